//! Maps with holes: branch structure, cylinders, average least expansion,
//! bad sets and the first-good-time partition.

mod a2;
mod enumerate;
mod profile;
mod refine;
mod word;

pub use a2::{a2_report, A2Config, A2Row, A2Status};
pub use enumerate::{
    bad_volume, q_cells, sn_partition, BadVolume, Census, EnumerationConfig, QCell, SnPartition, DEFAULT_WORD_CAP,
};
pub use profile::{phi_profile, step_terms, ExpansionProfile};
pub use refine::{refine_cylinder, CylinderGeometry, CylinderRefiner, RefineConfig, Refinement};
pub use word::CylinderWord;

use crate::geometry::TorusPoint;
use crate::linalg::{self, Matrix};
#[allow(unused_imports)]
use num_traits::Float;

/// A piecewise expanding map whose branch images overflow the branch domains.
///
/// Symbols index the branch domains `R_0, …, R_m`. Points of the hole belong to
/// no domain. All evaluators must be pure.
pub trait MapWithHoles<const D: usize> {
    /// Number of branches, `m + 1`.
    fn symbol_count(&self) -> usize;

    fn step(&self, x: &TorusPoint<D>) -> TorusPoint<D>;

    /// Domain containing `x`, or `None` if `x` lies in the hole.
    fn branch_of(&self, x: &TorusPoint<D>) -> Option<usize>;

    /// The preimage of `y` under the branch `symbol`. It may land in the hole.
    fn inverse_branch(&self, symbol: usize, y: &TorusPoint<D>) -> TorusPoint<D>;

    fn jacobian(&self, x: &TorusPoint<D>) -> Matrix<D>;

    /// `log ‖Df⁻¹(f(x))‖⁻¹`, the log of the least expansion at `x`.
    fn log_expansion(&self, x: &TorusPoint<D>) -> f64 {
        linalg::min_singular(&self.jacobian(x)).ln()
    }

    fn log_jacobian(&self, x: &TorusPoint<D>) -> f64 {
        linalg::det(&self.jacobian(x)).abs().ln()
    }

    /// Lower bound of `log_expansion` over the domain `symbol`.
    fn expansion_floor(&self, symbol: usize) -> f64;

    /// Lipschitz constant of `log_expansion` on the domain `symbol`.
    fn expansion_lipschitz(&self, symbol: usize) -> f64;

    /// Lipschitz constant of the inverse branch `symbol` on the whole torus.
    fn inverse_norm_bound(&self, symbol: usize) -> f64;

    /// Diameter bound of the domain `symbol`.
    fn branch_diameter(&self, symbol: usize) -> f64;

    /// Whether the image of domain `from` covers domain `to`.
    fn allows(&self, _from: usize, _to: usize) -> bool {
        true
    }

    /// `μ_f`.
    fn hole_volume(&self) -> f64;

    /// `S = sup ‖Df⁻¹‖`.
    fn inverse_derivative_sup(&self) -> f64 {
        (0..self.symbol_count()).map(|s| self.inverse_norm_bound(s)).fold(0.0, f64::max)
    }

    /// Parameter fed to the bad-set bound `δ(n, ·)`.
    fn delta_parameter(&self) -> f64 {
        self.hole_volume()
    }

    /// `true` only if the closed cell `[lo, lo + side]` lies inside the hole.
    fn cell_in_hole(&self, _lo: &[f64; D], _side: f64) -> bool {
        false
    }

    /// Bound on the number of domains met by a branch image.
    fn intersection_bound(&self) -> usize {
        self.symbol_count()
    }

    fn label(&self) -> &str;
}

/// Whether the orbit of `x` follows `word`, staying out of the hole.
pub fn follows<const D: usize, M: MapWithHoles<D> + ?Sized>(map: &M, x: &TorusPoint<D>, word: &[u8]) -> bool {
    let mut y = *x;
    for (j, &s) in word.iter().enumerate() {
        if map.branch_of(&y) != Some(s as usize) {
            return false;
        }
        if j + 1 < word.len() {
            y = map.step(&y);
        }
    }
    true
}

/// Symbols visited by `x` over at most `n` steps; stops early at the hole.
pub fn itinerary<const D: usize, M: MapWithHoles<D> + ?Sized>(
    map: &M,
    x: &TorusPoint<D>,
    n: usize,
) -> (alloc::vec::Vec<u8>, bool) {
    let mut out = alloc::vec::Vec::with_capacity(n);
    let mut y = *x;
    for j in 0..n {
        match map.branch_of(&y) {
            Some(s) => out.push(s as u8),
            None => return (out, false),
        }
        if j + 1 < n {
            y = map.step(&y);
        }
    }
    (out, true)
}
