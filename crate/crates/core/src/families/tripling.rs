#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::TorusPoint;
use crate::holes::MapWithHoles;
use crate::linalg::Matrix;

/// `x ↦ 3x mod 1` with domains `[0, 1/3]`, `[2/3, 1]` and hole `(1/3, 2/3)`.
/// Its repeller is the middle-third Cantor set.
#[derive(Debug, Clone, Copy, Default)]
pub struct TriplingMap;

impl TriplingMap {
    /// Closed interval `C(α₁, …, αₙ)` from the affine inverse branches.
    pub fn cylinder_interval(word: &[u8]) -> (f64, f64) {
        let (mut lo, mut hi) = (0.0, 1.0);
        for &s in word.iter().rev() {
            let shift = 2.0 * s as f64;
            lo = (lo + shift) / 3.0;
            hi = (hi + shift) / 3.0;
        }
        (lo, hi)
    }
}

impl MapWithHoles<1> for TriplingMap {
    fn symbol_count(&self) -> usize {
        2
    }

    fn step(&self, x: &TorusPoint<1>) -> TorusPoint<1> {
        TorusPoint::new([3.0 * x.0[0]])
    }

    fn branch_of(&self, x: &TorusPoint<1>) -> Option<usize> {
        let v = x.0[0];
        if v <= 1.0 / 3.0 {
            Some(0)
        } else if v >= 2.0 / 3.0 {
            Some(1)
        } else {
            None
        }
    }

    fn inverse_branch(&self, symbol: usize, y: &TorusPoint<1>) -> TorusPoint<1> {
        TorusPoint::new([(y.0[0] + 2.0 * symbol as f64) / 3.0])
    }

    fn jacobian(&self, _x: &TorusPoint<1>) -> Matrix<1> {
        [[3.0]]
    }

    fn log_expansion(&self, _x: &TorusPoint<1>) -> f64 {
        3f64.ln()
    }

    fn expansion_floor(&self, _symbol: usize) -> f64 {
        3f64.ln()
    }

    fn expansion_lipschitz(&self, _symbol: usize) -> f64 {
        0.0
    }

    fn inverse_norm_bound(&self, _symbol: usize) -> f64 {
        1.0 / 3.0
    }

    fn branch_diameter(&self, _symbol: usize) -> f64 {
        1.0 / 3.0
    }

    fn hole_volume(&self) -> f64 {
        1.0 / 3.0
    }

    fn cell_in_hole(&self, lo: &[f64; 1], side: f64) -> bool {
        lo[0] > 1.0 / 3.0 && lo[0] + side < 2.0 / 3.0
    }

    fn label(&self) -> &str {
        "tripling"
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cylinder_intervals() {
        let (a, b) = TriplingMap::cylinder_interval(&[0, 1]);
        assert!((a - 2.0 / 9.0).abs() < 1e-15 && (b - 1.0 / 3.0).abs() < 1e-15);
        let (a, b) = TriplingMap::cylinder_interval(&[1]);
        assert!((a - 2.0 / 3.0).abs() < 1e-15 && b == 1.0);
        let (a, b) = TriplingMap::cylinder_interval(&[0, 1, 0]);
        assert!((a - 6.0 / 27.0).abs() < 1e-15 && (b - 7.0 / 27.0).abs() < 1e-15);
    }
}
