use alloc::vec;
use alloc::vec::Vec;
use num_bigint::BigUint;
#[allow(unused_imports)]
use num_traits::{Float, One, ToPrimitive, Zero};

/// Exact `C(n, k)`; zero when `k > n`.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for i in 0..k {
        acc *= n - i;
        acc /= i + 1;
    }
    acc
}

/// Rows of Pascal's triangle, built incrementally.
#[derive(Debug, Clone)]
pub struct BigBinomial {
    rows: Vec<Vec<BigUint>>,
}

impl Default for BigBinomial {
    fn default() -> Self {
        Self { rows: vec![vec![BigUint::one()]] }
    }
}

impl BigBinomial {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row(&mut self, n: usize) -> &[BigUint] {
        while self.rows.len() <= n {
            let prev = self.rows.last().expect("row 0 exists");
            let mut next = Vec::with_capacity(prev.len() + 1);
            next.push(BigUint::one());
            for w in prev.windows(2) {
                next.push(&w[0] + &w[1]);
            }
            next.push(BigUint::one());
            self.rows.push(next);
        }
        &self.rows[n]
    }

    pub fn get(&mut self, n: usize, k: usize) -> BigUint {
        if k > n {
            return BigUint::zero();
        }
        self.row(n)[k].clone()
    }

    /// Drops cached rows below `n` to bound memory on long sweeps.
    pub fn forget_below(&mut self, n: usize) {
        for r in self.rows.iter_mut().take(n) {
            *r = Vec::new();
        }
    }
}

/// Enclosure `[lo, hi]` of `ln x` for a positive big integer, from its top 64
/// bits. `ln 0` is `-∞`.
pub fn ln_big(x: &BigUint) -> (f64, f64) {
    if x.is_zero() {
        return (f64::NEG_INFINITY, f64::NEG_INFINITY);
    }
    let bits = x.bits();
    let shift = bits.saturating_sub(64);
    let top = (x >> shift).to_u64().expect("fits in 64 bits") as f64;
    let scale = shift as f64 * core::f64::consts::LN_2;
    let lo = top.ln() + scale;
    let hi = if shift == 0 { lo } else { (top + 1.0).ln() + scale };
    let pad = 4.0 * f64::EPSILON * lo.abs().max(1.0);
    (lo - pad, hi + pad)
}

pub fn ln_big_mid(x: &BigUint) -> f64 {
    let (lo, hi) = ln_big(x);
    0.5 * (lo + hi)
}

/// Outcome of comparing an enclosed quantity against a bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
    /// The enclosure straddles the bound; counted as a failure.
    Undecided,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    /// `[lo, hi] ≤ bound`, allowing for a relative error in `bound` itself.
    pub fn le(lo: f64, hi: f64, bound: f64) -> Self {
        let tol = 1e-12 * bound.abs().max(1.0);
        if hi <= bound - tol {
            Verdict::Pass
        } else if lo > bound + tol {
            Verdict::Fail
        } else {
            Verdict::Undecided
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_matches_formula() {
        let mut t = BigBinomial::new();
        for n in 0..60u64 {
            for k in 0..=n {
                assert_eq!(t.get(n as usize, k as usize), binomial(n, k));
            }
        }
        assert_eq!(binomial(100, 5), BigUint::from(75_287_520u64));
    }

    #[test]
    fn log_enclosure() {
        let x = binomial(100, 10);
        let (lo, hi) = ln_big(&x);
        let exact = 30.482_323_362_278_65;
        assert!(lo <= exact && exact <= hi && hi - lo < 1e-9);
        let big = binomial(2000, 1000);
        let (lo, hi) = ln_big(&big);
        assert!(hi - lo < 1e-9 && (lo - 1382.2).abs() < 1.0);
    }
}
