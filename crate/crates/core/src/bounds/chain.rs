use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::binom::{binomial, ln_big, BigBinomial, Verdict};
use super::patterns::{GridSummary, LogCheck};
use crate::holes::QCell;
use crate::{Error, Result};

fn check_mu(mu: f64) -> Result<()> {
    if mu > 0.0 && mu < 1.0 {
        Ok(())
    } else {
        Err(Error::Precondition(format!("μ must lie in (0,1), got {mu}")))
    }
}

/// `μ / (−4 ln μ)`, the admissible run density.
pub fn run_density(mu: f64) -> f64 {
    mu / (-4.0 * mu.ln())
}

/// `δ(n, μ) = μ/(−4 ln μ) · n² · e^{−μn/4}`.
pub fn delta_bound(n: usize, mu: f64) -> Result<f64> {
    check_mu(mu)?;
    if n == 0 {
        return Err(Error::Precondition("n must be at least 1".into()));
    }
    let nf = n as f64;
    Ok(run_density(mu) * nf * nf * (-0.25 * mu * nf).exp())
}

/// Integer maximiser of `δ(·, μ)` and the maximum. The real maximiser is `8/μ`.
pub fn delta_peak(mu: f64) -> Result<(usize, f64)> {
    check_mu(mu)?;
    let x = 8.0 / mu;
    let lo = (x.floor() as usize).max(1);
    let (a, b) = (delta_bound(lo, mu)?, delta_bound(lo + 1, mu)?);
    Ok(if b > a { (lo + 1, b) } else { (lo, a) })
}

/// First `n` past the peak with `δ(n, μ) < target`.
pub fn delta_first_below(mu: f64, target: f64, cap: usize) -> Result<Option<usize>> {
    let (peak, _) = delta_peak(mu)?;
    for n in peak..=cap {
        if delta_bound(n, mu)? < target {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LtFlags {
    /// `(n − l)/l ≤ μ / (8 ln σ)`.
    pub outside: bool,
    /// `t/l ≤ μ / (−4 ln μ)`.
    pub runs: bool,
}

impl LtFlags {
    pub fn admissible(&self) -> bool {
        self.outside && self.runs
    }
}

pub fn lt_constraints(n: usize, l: usize, t: usize, mu: f64, sigma: f64) -> Result<LtFlags> {
    check_mu(mu)?;
    if !(sigma > 1.0) || l == 0 || l > n {
        return Err(Error::Precondition(format!("need σ > 1 and 1 ≤ l ≤ n, got σ={sigma}, l={l}, n={n}")));
    }
    let lf = l as f64;
    Ok(LtFlags {
        outside: ((n - l) as f64) <= lf * mu / (8.0 * sigma.ln()),
        runs: (t as f64) <= lf * run_density(mu),
    })
}

/// Largest admissible `n − l` and `t` for a given `l`.
pub fn lt_limits(l: usize, mu: f64, sigma: f64) -> Result<(usize, usize)> {
    check_mu(mu)?;
    let lf = l as f64;
    Ok(((lf * mu / (8.0 * sigma.ln())).floor() as usize, (lf * run_density(mu)).floor() as usize))
}

/// `ln C(l, t−1) ≤ (13/32) μ l`.
pub fn lemma_cell(l: usize, t: usize, mu: f64) -> Result<LogCheck> {
    check_mu(mu)?;
    if t == 0 || t > l {
        return Err(Error::Precondition(format!("need 1 ≤ t ≤ l, got l={l}, t={t}")));
    }
    let (lo, hi) = ln_big(&binomial(l as u64, t as u64 - 1));
    let rhs = 13.0 / 32.0 * mu * l as f64;
    Ok(LogCheck { lhs: 0.5 * (lo + hi), rhs, verdict: Verdict::le(lo, hi, rhs) })
}

/// The lemma over `l ∈ ls`, `1 ≤ t ≤ μl/(−4 ln μ)`.
pub fn lemma_grid(mu: f64, ls: core::ops::RangeInclusive<usize>) -> Result<GridSummary> {
    check_mu(mu)?;
    let rhs_per_l = 13.0 / 32.0 * mu;
    let mut table = BigBinomial::new();
    let mut out = GridSummary::default();
    for l in ls {
        let t_max = (l as f64 * run_density(mu)).floor() as usize;
        if t_max == 0 {
            continue;
        }
        let row = table.row(l).to_vec();
        table.forget_below(l);
        for t in 1..=t_max {
            out.checked += 1;
            let (lo, hi) = ln_big(&row[t - 1]);
            if !Verdict::le(lo, hi, rhs_per_l * l as f64).passed() {
                out.failures.push((l, t));
            }
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainRow {
    pub l: usize,
    pub t: usize,
    pub words: usize,
    pub log_volume: f64,
    pub intermediate: f64,
    pub final_bound: f64,
    pub flags: LtFlags,
    /// `None` for inadmissible cells, which are skipped.
    pub pass: Option<bool>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChainReport {
    pub n: usize,
    pub mu: f64,
    pub rows: Vec<ChainRow>,
    pub total_volume: f64,
    pub final_total: f64,
    pub count_factor: f64,
    pub delta: f64,
}

impl ChainReport {
    pub fn aggregate_pass(&self) -> bool {
        self.total_volume <= self.final_total && self.total_volume <= self.delta
    }

    pub fn pass(&self) -> bool {
        self.aggregate_pass() && self.rows.iter().all(|r| r.pass != Some(false))
    }

    pub fn skipped(&self) -> usize {
        self.rows.iter().filter(|r| r.pass.is_none()).count()
    }
}

/// Compares measured per-`(l,t)` volume sums with the chain
/// `(13/32)μl + (n−l)ln 2 + (n−l)ln(η/σ²) − (61/32)μl ≤ −μn/4`.
pub fn volume_chain_check(cells: &[QCell], n: usize, mu: f64, sigma: f64, eta: f64) -> Result<ChainReport> {
    check_mu(mu)?;
    if !(eta >= 1.0) || eta > 1000.0 * sigma * sigma {
        return Err(Error::Precondition(format!("need 1 ≤ η ≤ 1000σ², got η={eta}")));
    }
    let final_bound = -0.25 * mu * n as f64;
    let mut rows = Vec::with_capacity(cells.len());
    for c in cells {
        let flags = lt_constraints(n, c.l.max(1), c.t, mu, sigma)?;
        let k = (n - c.l) as f64;
        let intermediate = (13.0 - 61.0) / 32.0 * mu * c.l as f64
            + k * core::f64::consts::LN_2
            + k * (eta / (sigma * sigma)).ln();
        let log_volume = c.volume_upper.ln();
        let pass = (flags.admissible() && c.l > 0)
            .then(|| log_volume <= intermediate && log_volume <= final_bound);
        rows.push(ChainRow { l: c.l, t: c.t, words: c.words, log_volume, intermediate, final_bound, flags, pass });
    }
    let nf = n as f64;
    Ok(ChainReport {
        n,
        mu,
        total_volume: cells.iter().map(|c| c.volume_upper).sum(),
        final_total: final_bound.exp(),
        count_factor: run_density(mu) * nf * nf,
        delta: delta_bound(n, mu)?,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_values() {
        let d = delta_bound(10, 0.1).unwrap();
        assert!((d - 0.845_572_206).abs() < 1e-8);
        assert_eq!(delta_peak(0.1).unwrap().0, 80);
        assert_eq!(delta_first_below(0.1, 1e-6, 5000).unwrap(), Some(918));
        assert!(delta_bound(10, 1e-9).unwrap() < 1e-8);
        assert!(delta_bound(10, 1.0).is_err() && delta_bound(0, 0.1).is_err());
    }

    #[test]
    fn lt_examples() {
        assert_eq!(lt_limits(100, 0.1, 3.1623).unwrap(), (1, 1));
        let f = lt_constraints(110, 100, 1, 0.1, 3.1623).unwrap();
        assert!(!f.outside && f.runs);
        assert!(lt_constraints(101, 100, 1, 0.1, 3.1623).unwrap().admissible());
    }

    #[test]
    fn lemma_is_vacuous_at_small_l() {
        let g = lemma_grid(0.05, 200..=200).unwrap();
        assert_eq!(g.checked, 0);
        assert!(lemma_cell(200, 1, 0.05).unwrap().pass());
    }

    #[test]
    fn empty_chain_passes() {
        let r = volume_chain_check(&[], 8, 0.1, 10f64.sqrt(), 2.0).unwrap();
        assert!(r.pass() && r.total_volume == 0.0);
        assert!(volume_chain_check(&[], 8, 0.1, 3.0, 1e5).is_err());
    }
}
