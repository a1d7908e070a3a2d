use alloc::format;
use core::f64::consts::TAU;
#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::TorusPoint;
use crate::holes::MapWithHoles;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Degree-2 circle maps `f_t(x) = 2x − (1 + t)/(2π) · sin 2πx`.
///
/// For `t > 0` the fixed point `0` attracts (`f_t'(0) = 1 − t`) and two
/// repelling fixed points `±x*` bound its immediate basin, which is the hole.
/// Off the hole `f_t' > 1`. The hole closes as `t → 0⁺`.
#[derive(Debug, Clone, Copy)]
pub struct DiazVianaFamily {
    pub t: f64,
    /// The repelling fixed point `x*` in `(0, 1/2)`.
    pub edge: f64,
    pub c0: f64,
}

impl DiazVianaFamily {
    pub fn new(t: f64) -> Result<Self> {
        if !(t > 0.0 && t < 1.0) {
            return Err(Error::InvalidParameter(format!("t = {t} outside (0, 1)")));
        }
        // x = (1 + t) sin(2πx) / (2π) on (0, 1/2): g > 0 near 0, g < 0 at 1/2
        let g = |x: f64| (1.0 + t) * (TAU * x).sin() / TAU - x;
        let (mut lo, mut hi) = (1e-12, 0.5);
        if !(g(lo) > 0.0 && g(hi) < 0.0) {
            return Err(Error::Bracketing(format!("fixed point not bracketed at t = {t}")));
        }
        while hi - lo > 1e-15 {
            let mid = 0.5 * (lo + hi);
            if g(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Ok(Self { t, edge: 0.5 * (lo + hi), c0: 1.0 / 256.0 })
    }

    pub fn with_c0(mut self, c0: f64) -> Self {
        self.c0 = c0;
        self
    }

    pub fn derivative(&self, x: f64) -> f64 {
        2.0 - (1.0 + self.t) * (TAU * x).cos()
    }

    pub fn threshold(&self) -> f64 {
        self.c0 * self.hole_volume()
    }

    /// The lift `F(x) = 2x − (1 + t) sin(2πx)/(2π)`, increasing on the line.
    fn lift(&self, x: f64) -> f64 {
        2.0 * x - (1.0 + self.t) * (TAU * x).sin() / TAU
    }
}

impl MapWithHoles<1> for DiazVianaFamily {
    fn symbol_count(&self) -> usize {
        2
    }

    fn step(&self, x: &TorusPoint<1>) -> TorusPoint<1> {
        TorusPoint::new([self.lift(x.0[0])])
    }

    fn branch_of(&self, x: &TorusPoint<1>) -> Option<usize> {
        let v = x.0[0];
        if v >= self.edge && v < 0.5 {
            Some(0)
        } else if v >= 0.5 && v <= 1.0 - self.edge {
            Some(1)
        } else {
            None
        }
    }

    /// Solves `F(x) = y + symbol` on `[symbol/2, (symbol + 1)/2]`.
    fn inverse_branch(&self, symbol: usize, y: &TorusPoint<1>) -> TorusPoint<1> {
        let target = y.0[0] + symbol as f64;
        let (mut lo, mut hi) = (0.5 * symbol as f64, 0.5 * (symbol + 1) as f64);
        let mut x = 0.5 * (lo + hi);
        for _ in 0..200 {
            let v = self.lift(x) - target;
            if v.abs() < 1e-16 {
                break;
            }
            if v < 0.0 {
                lo = x;
            } else {
                hi = x;
            }
            let next = x - v / self.derivative(x);
            x = if next >= lo && next <= hi { next } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-16 {
                break;
            }
        }
        TorusPoint::new([x])
    }

    fn jacobian(&self, x: &TorusPoint<1>) -> Matrix<1> {
        [[self.derivative(x.0[0])]]
    }

    fn expansion_floor(&self, _symbol: usize) -> f64 {
        self.derivative(self.edge).ln()
    }

    /// `|d/dx log f'| = 2π(1+t)|sin 2πx| / f'`, bounded using `f' ≥ f'(x*)`.
    fn expansion_lipschitz(&self, _symbol: usize) -> f64 {
        TAU * (1.0 + self.t) / self.derivative(self.edge)
    }

    fn inverse_norm_bound(&self, _symbol: usize) -> f64 {
        1.0 / (1.0 - self.t)
    }

    fn branch_diameter(&self, _symbol: usize) -> f64 {
        0.5 - self.edge
    }

    fn hole_volume(&self) -> f64 {
        2.0 * self.edge
    }

    fn cell_in_hole(&self, lo: &[f64; 1], side: f64) -> bool {
        let (a, b) = (lo[0], lo[0] + side);
        (a > 1.0 - self.edge && b <= 1.0) || (a >= 0.0 && b < self.edge)
    }

    fn label(&self) -> &str {
        "diaz-viana"
    }
}


#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expanding_off_the_hole() {
        for t in [0.01, 0.05, 0.1, 0.3] {
            let f = DiazVianaFamily::new(t).unwrap();
            assert!((f.lift(f.edge) - f.edge).abs() < 1e-12);
            assert!(f.derivative(f.edge) > 1.0);
            for i in 0..=1000 {
                let x = f.edge + (1.0 - 2.0 * f.edge) * i as f64 / 1000.0;
                assert!(f.derivative(x) >= f.derivative(f.edge) - 1e-12);
            }
        }
        let small = DiazVianaFamily::new(1e-4).unwrap();
        assert!(small.hole_volume() < DiazVianaFamily::new(0.1).unwrap().hole_volume());
    }

    #[test]
    fn inverse_branches() {
        let f = DiazVianaFamily::new(0.2).unwrap();
        for y in [0.0, 0.13, 0.5, 0.97] {
            for s in 0..2 {
                let x = f.inverse_branch(s, &TorusPoint::new([y]));
                let d = f.step(&x).distance(&TorusPoint::new([y]));
                assert!(d < 1e-12, "{y} {s} {x:?} {d}");
            }
        }
    }
}
