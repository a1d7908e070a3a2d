use alloc::format;
use alloc::vec::Vec;
use num_bigint::BigUint;
#[allow(unused_imports)]
use num_traits::{Float, One, Pow};

use super::binom::{binomial, ln_big, BigBinomial, Verdict};
use crate::{Error, Result};

/// Alternating block lengths `k₁, l₁, …, k_t, l_t`: `kᵢ` steps outside the
/// degenerate region, then `lᵢ` steps inside.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockPattern {
    outside: Vec<usize>,
    inside: Vec<usize>,
}

impl BlockPattern {
    pub fn new(outside: Vec<usize>, inside: Vec<usize>) -> Result<Self> {
        if outside.len() != inside.len() || outside.is_empty() {
            return Err(Error::Precondition(format!(
                "need t ≥ 1 matching blocks, got {} and {}",
                outside.len(),
                inside.len()
            )));
        }
        if outside.iter().chain(&inside).any(|&b| b == 0) {
            return Err(Error::Precondition("block lengths must be positive".into()));
        }
        Ok(Self { outside, inside })
    }

    /// Reads the pattern off a word. `None` unless the word starts outside and
    /// ends inside.
    pub fn of_word(word: &[u8], inside: impl Fn(u8) -> bool) -> Option<Self> {
        let mut outside_runs = Vec::new();
        let mut inside_runs = Vec::new();
        let mut i = 0;
        while i < word.len() {
            let state = inside(word[i]);
            let start = i;
            while i < word.len() && inside(word[i]) == state {
                i += 1;
            }
            if state { inside_runs.push(i - start) } else { outside_runs.push(i - start) }
        }
        if word.is_empty() || inside(word[0]) || !inside(word[word.len() - 1]) {
            return None;
        }
        Self::new(outside_runs, inside_runs).ok()
    }

    pub fn t(&self) -> usize {
        self.inside.len()
    }

    pub fn l(&self) -> usize {
        self.inside.iter().sum()
    }

    pub fn n(&self) -> usize {
        self.l() + self.outside.iter().sum::<usize>()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PatternCount {
    pub exact: BigUint,
    pub bound: BigUint,
    pub pass: bool,
}

/// Number of words of length `n` with `t` alternating outside/inside blocks
/// of total inside length `l`, over `m_outside` outside symbols, against
/// `C(l, t−1)·C(n−l, t−1)·(m_outside+1)^{n−l}`.
pub fn count_patterns(n: usize, l: usize, t: usize, m_outside: usize) -> Result<PatternCount> {
    if t == 0 || l < t || n < l || n - l < t || m_outside == 0 {
        return Err(Error::Precondition(format!(
            "alternation needs 1 ≤ t ≤ l and t ≤ n − l with m ≥ 1 (n={n}, l={l}, t={t}, m={m_outside})"
        )));
    }
    let (n, l, t) = (n as u64, l as u64, t as u64);
    let m = BigUint::from(m_outside);
    let exact = binomial(l - 1, t - 1) * binomial(n - l - 1, t - 1) * Pow::pow(&m, n - l);
    let eta = m + 1u32;
    let bound = binomial(l, t - 1) * binomial(n - l, t - 1) * Pow::pow(&eta, n - l);
    let pass = exact <= bound;
    Ok(PatternCount { exact, bound, pass })
}

/// Both sides of a log-scale inequality `lhs ≤ rhs`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub verdict: Verdict,
}

impl LogCheck {
    pub fn pass(&self) -> bool {
        self.verdict.passed()
    }
}

/// `C(l,t) ≤ l^l / (t^t (l−t)^{l−t})`, decided exactly.
pub fn stirling_binomial_bound(l: usize, t: usize) -> Result<LogCheck> {
    if t == 0 || 2 * t >= l {
        return Err(Error::Precondition(format!("need 0 < t < l/2, got l={l}, t={t}")));
    }
    Ok(stirling_with(&binomial(l as u64, t as u64), l, t))
}

fn stirling_with(c: &BigUint, l: usize, t: usize) -> LogCheck {
    let tt = Pow::pow(&BigUint::from(t), t);
    let rest = Pow::pow(&BigUint::from(l - t), l - t);
    let ll = Pow::pow(&BigUint::from(l), l);
    let pass = c * &tt * &rest <= ll;
    let (lf, tf) = (l as f64, t as f64);
    let rhs = lf * lf.ln() - tf * tf.ln() - (lf - tf) * (lf - tf).ln();
    let lhs = super::binom::ln_big_mid(c);
    LogCheck { lhs, rhs, verdict: if pass { Verdict::Pass } else { Verdict::Fail } }
}

/// `(1 + 1/(4l)) / √(tπ) ≤ 1`, decided with integers and a rational lower
/// bound for π.
pub fn prefactor_check(l: usize, t: usize) -> bool {
    let (l, t) = (l as u128, t as u128);
    if l == 0 || t == 0 {
        return false;
    }
    let lhs = (4 * l + 1) * (4 * l + 1) * 100_000_000_000;
    let rhs = 16 * l * l * t * 314_159_265_358;
    lhs <= rhs
}

/// Failing cells of a grid check.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct GridSummary {
    pub checked: usize,
    pub failures: Vec<(usize, usize)>,
}

impl GridSummary {
    pub fn pass(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Stirling bound and prefactor for every `1 ≤ t < l/2`, `l ≤ l_max`.
pub fn stirling_grid(l_max: usize) -> GridSummary {
    let mut table = BigBinomial::new();
    let mut out = GridSummary::default();
    for l in 3..=l_max {
        let row = table.row(l).to_vec();
        table.forget_below(l);
        for t in (1..).take_while(|t| 2 * t < l) {
            out.checked += 1;
            if !stirling_with(&row[t], l, t).pass() || !prefactor_check(l, t) {
                out.failures.push((l, t));
            }
        }
    }
    out
}

/// The largest `κ` for which the entropy bound is claimed, `e^{−1/τ}`.
pub fn kappa0(tau: f64) -> f64 {
    (-1.0 / tau).exp()
}

/// `ln C(l,t) ≤ l(1+τ) κ ln(1/κ)` for `t ≤ κl`, `κ ≤ e^{−1/τ}`.
pub fn entropy_bound(l: usize, t: usize, kappa: f64, tau: f64) -> Result<LogCheck> {
    if !(tau > 0.0) || !(kappa > 0.0) {
        return Err(Error::Precondition(format!("need τ > 0 and κ > 0, got τ={tau}, κ={kappa}")));
    }
    let k0 = kappa0(tau);
    if kappa > k0 {
        return Err(Error::Precondition(format!("κ = {kappa} exceeds κ₀ = {k0}")));
    }
    if t as f64 > kappa * l as f64 * (1.0 + 1e-12) {
        return Err(Error::Precondition(format!("t = {t} exceeds κl = {}", kappa * l as f64)));
    }
    Ok(entropy_unchecked(&binomial(l as u64, t as u64), l, kappa, tau))
}

/// The entropy inequality without the range guard on `κ`.
pub fn entropy_probe(l: usize, t: usize, kappa: f64, tau: f64) -> LogCheck {
    entropy_unchecked(&binomial(l as u64, t as u64), l, kappa, tau)
}

fn entropy_unchecked(c: &BigUint, l: usize, kappa: f64, tau: f64) -> LogCheck {
    let (lo, hi) = ln_big(c);
    let rhs = l as f64 * (1.0 + tau) * kappa * (1.0 / kappa).ln();
    LogCheck { lhs: 0.5 * (lo + hi), rhs, verdict: Verdict::le(lo, hi, rhs) }
}

/// Every `1 ≤ t ≤ κ₀ l` with the tightest admissible `κ = t/l`.
pub fn entropy_grid(l_max: usize, tau: f64) -> GridSummary {
    let k0 = kappa0(tau);
    let mut table = BigBinomial::new();
    let mut out = GridSummary::default();
    for l in 1..=l_max {
        let row = table.row(l).to_vec();
        table.forget_below(l);
        for t in (1..=l).take_while(|&t| t as f64 <= k0 * l as f64) {
            out.checked += 1;
            if !entropy_unchecked(&row[t], l, t as f64 / l as f64, tau).pass() {
                out.failures.push((l, t));
            }
        }
    }
    out
}

/// Smallest `κ > κ₀` where the binary entropy overtakes `(1+τ)κ ln(1/κ)`; the
/// entropy bound fails there for large enough `l`.
pub fn entropy_onset(tau: f64) -> f64 {
    let g = |k: f64| (1.0 - k) * (1.0 / (1.0 - k)).ln() - tau * k * (1.0 / k).ln();
    let (mut lo, mut hi) = (kappa0(tau), 1.0 - 1e-12);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if g(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// `Σ_{j≤m} C(m,j) = 2^m` and `C(m,j) ≤ 2^m`, exactly.
pub fn power_sum_check(m: usize) -> Result<bool> {
    if m > 64 {
        return Err(Error::Precondition(format!("m = {m} exceeds 64")));
    }
    let full = BigUint::one() << m;
    let mut sum = BigUint::from(0u32);
    for j in 0..=m as u64 {
        let c = binomial(m as u64, j);
        if c > full {
            return Ok(false);
        }
        sum += c;
    }
    Ok(sum == full)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn enumerate(n: usize, l: usize, t: usize, m: u8) -> u64 {
        let total = (m as u64 + 1).pow(n as u32);
        let mut count = 0;
        for mut code in 0..total {
            let mut w = alloc::vec![0u8; n];
            for s in w.iter_mut() {
                *s = (code % (m as u64 + 1)) as u8;
                code /= m as u64 + 1;
            }
            if let Some(p) = BlockPattern::of_word(&w, |s| s == 0) {
                if p.l() == l && p.t() == t {
                    count += 1;
                }
            }
        }
        count
    }

    #[test]
    fn counts_match_enumeration() {
        let c = count_patterns(4, 2, 1, 2).unwrap();
        assert_eq!(c.exact, BigUint::from(4u32));
        assert_eq!(c.bound, BigUint::from(9u32));
        let c = count_patterns(6, 3, 2, 1).unwrap();
        assert_eq!((c.exact.clone(), c.bound.clone()), (BigUint::from(4u32), BigUint::from(72u32)));
        for n in 2..=9 {
            for l in 1..n {
                for t in 1..=l.min(n - l) {
                    for m in [1u8, 2] {
                        let c = count_patterns(n, l, t, m as usize).unwrap();
                        assert_eq!(c.exact, BigUint::from(enumerate(n, l, t, m)), "{n} {l} {t} {m}");
                        assert!(c.pass);
                    }
                }
            }
        }
        assert!(count_patterns(3, 3, 3, 1).is_err());
    }

    #[test]
    fn stirling_examples() {
        let s = stirling_binomial_bound(10, 2).unwrap();
        assert!(s.pass());
        assert!((s.lhs - 45f64.ln()).abs() < 1e-12);
        assert!((s.rhs.exp() - 149.011_611_938_476_56).abs() < 1e-6);
        let s = stirling_binomial_bound(100, 10).unwrap();
        assert!(s.pass());
        assert!((s.lhs - 30.482_323).abs() < 1e-5);
        assert!((s.rhs - 32.508_297).abs() < 1e-5);
        assert!(stirling_binomial_bound(2, 1).is_err());
        assert!(prefactor_check(1, 1));
    }

    #[test]
    fn entropy_examples() {
        let e = entropy_bound(100, 5, 0.05, 1.0).unwrap();
        assert!(e.pass() && (e.lhs - 18.136_9).abs() < 1e-3 && (e.rhs - 29.957_3).abs() < 1e-3);
        let e = entropy_bound(100, 30, 0.3, 1.0).unwrap();
        assert!(e.pass() && (e.lhs - 58.64).abs() < 0.01 && (e.rhs - 72.24).abs() < 0.01);
        assert!(entropy_bound(100, 0, 0.05, 1.0).unwrap().pass());
        assert!(entropy_bound(100, 40, 0.4, 1.0).is_err());
    }

    #[test]
    fn onset_lies_above_kappa0() {
        assert!((entropy_onset(1.0) - 0.5).abs() < 1e-9);
        let k = entropy_onset(0.5);
        assert!(k > kappa0(0.5) && k < 0.2);
        assert!(!entropy_probe(1000, 600, 0.6, 1.0).pass());
        assert!(!entropy_probe(1000, 200, 0.2, 0.5).pass());
    }

    #[test]
    fn power_sums() {
        for m in 0..=64 {
            assert!(power_sum_check(m).unwrap());
        }
        assert!(power_sum_check(65).is_err());
    }
}
