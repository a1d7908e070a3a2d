#[allow(unused_imports)]
use num_traits::Float;

use super::lattice;
use crate::geometry::TorusPoint;
use crate::holes::MapWithHoles;
use crate::linalg::Matrix;

/// The linear endomorphism `L = [[3, −1], [1, 3]]` of `T²` with the lattice
/// symbols and no hole.
#[derive(Debug, Clone, Copy, Default)]
pub struct ConformalTorusMap;

impl MapWithHoles<2> for ConformalTorusMap {
    fn symbol_count(&self) -> usize {
        lattice::DEGREE
    }

    fn step(&self, x: &TorusPoint<2>) -> TorusPoint<2> {
        TorusPoint::new(lattice::apply(x.centered()))
    }

    fn branch_of(&self, x: &TorusPoint<2>) -> Option<usize> {
        Some(lattice::symbol(x.centered()))
    }

    fn inverse_branch(&self, symbol: usize, y: &TorusPoint<2>) -> TorusPoint<2> {
        lattice::inverse(symbol, y)
    }

    fn jacobian(&self, _x: &TorusPoint<2>) -> Matrix<2> {
        lattice::L
    }

    fn log_expansion(&self, _x: &TorusPoint<2>) -> f64 {
        0.5 * 10f64.ln()
    }

    fn expansion_floor(&self, _symbol: usize) -> f64 {
        0.5 * 10f64.ln()
    }

    fn expansion_lipschitz(&self, _symbol: usize) -> f64 {
        0.0
    }

    fn inverse_norm_bound(&self, _symbol: usize) -> f64 {
        1.0 / lattice::conformal_factor()
    }

    fn branch_diameter(&self, _symbol: usize) -> f64 {
        (2.0 / lattice::DEGREE as f64).sqrt()
    }

    fn hole_volume(&self) -> f64 {
        0.0
    }

    fn label(&self) -> &str {
        "conformal"
    }
}
