use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;

use super::escape::Trapped;
use super::lattice;
use super::phi::{PhiParams, PhiProfile};
use crate::geometry::{Ball, TorusPoint};
use crate::holes::MapWithHoles;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Root of `Φ(μ, ρ²) = 1` in `(0, √δ₀)` by bisection to `1e-12`; zero when
/// `μ ≤ 0`.
pub fn invariant_circle_radius(phi: &PhiProfile) -> Result<f64> {
    if phi.mu() <= 0.0 {
        return Ok(0.0);
    }
    let g = |r: f64| phi.eval(r * r) - 1.0;
    let (mut lo, mut hi) = (0.0, phi.delta0().sqrt());
    if !(g(lo) < 0.0 && g(hi) > 0.0) {
        return Err(Error::Bracketing(format!("Phi - 1 has no sign change on [0, sqrt(delta0)] at mu = {}", phi.mu())));
    }
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// First-order radius `√(μ / b₁)` with `b₁ = ∂_wΦ(μ, 0)`.
pub fn first_order_radius(phi: &PhiProfile) -> f64 {
    if phi.mu() <= 0.0 {
        0.0
    } else {
        (phi.mu() / phi.b1).sqrt()
    }
}

/// Smallest `K_μ = μ / μ_f` over a parameter grid and `c₀ = K / 256`.
pub fn c0_from_grid(mus: &[f64]) -> Result<f64> {
    let mut k = f64::INFINITY;
    for &mu in mus.iter().filter(|&&m| m > 0.0) {
        k = k.min(HopfModel2D::new(mu)?.k_mu());
    }
    if !k.is_finite() {
        return Err(Error::InvalidParameter("c0 needs at least one positive mu".into()));
    }
    Ok(k / 256.0)
}

/// The planar Hopf model: `f = L ∘ h` on `T²`, where `h` rescales the radius
/// inside the disk `ρ² < δ₀` by `Φ(μ, ρ²) / σ`. Inside that disk `f` has the
/// polar form `(ρ, θ) ↦ (Φ(μ, ρ²) ρ, θ + α)`; outside it is the linear map.
///
/// The hole is the open disk of radius `ρ_inv` bounded by the invariant
/// circle, and symbols are the ten lattice classes of [`lattice::symbol`].
#[derive(Debug, Clone)]
pub struct HopfModel2D {
    pub phi: PhiProfile,
    pub rho_inv: f64,
    /// Threshold constant `c₀`; the bad-set threshold is `c₀ μ_f`.
    pub c0: f64,
    /// Trap radius as a fraction of `ρ_inv`.
    pub trap_fraction: f64,
}

impl HopfModel2D {
    pub fn new(mu: f64) -> Result<Self> {
        Self::with_params(PhiParams::planar(mu))
    }

    pub fn with_params(params: PhiParams) -> Result<Self> {
        if (params.sigma - lattice::conformal_factor()).abs() > 1e-12 {
            return Err(Error::InvalidParameter(format!(
                "sigma must equal sqrt(10) for the planar model, got {}",
                params.sigma
            )));
        }
        let phi = PhiProfile::new(params)?;
        let rho_inv = invariant_circle_radius(&phi)?;
        Ok(Self { phi, rho_inv, c0: 1.0 / 256.0, trap_fraction: 1.0 })
    }

    pub fn with_c0(mut self, c0: f64) -> Self {
        self.c0 = c0;
        self
    }

    pub fn with_trap_fraction(mut self, f: f64) -> Self {
        self.trap_fraction = f;
        self
    }

    pub fn mu(&self) -> f64 {
        self.phi.mu()
    }

    pub fn sigma(&self) -> f64 {
        self.phi.sigma()
    }

    /// `μ_f = π ρ_inv²`.
    pub fn mu_f(&self) -> f64 {
        core::f64::consts::PI * self.rho_inv * self.rho_inv
    }

    /// `K_μ = μ / μ_f`, infinite before the bifurcation.
    pub fn k_mu(&self) -> f64 {
        if self.mu_f() > 0.0 { self.mu() / self.mu_f() } else { f64::INFINITY }
    }

    pub fn threshold(&self) -> f64 {
        self.c0 * self.mu_f()
    }

    pub fn hole(&self) -> Ball<2> {
        Ball::new(TorusPoint::origin(), self.rho_inv)
    }

    pub fn in_hole(&self, x: &TorusPoint<2>) -> bool {
        x.norm() < self.rho_inv
    }

    /// The radial rescaling `h` in centered coordinates.
    pub fn deform(&self, c: [f64; 2]) -> [f64; 2] {
        let w = c[0] * c[0] + c[1] * c[1];
        if w >= self.phi.delta0() {
            return c;
        }
        let k = self.phi.eval(w) / self.sigma();
        [k * c[0], k * c[1]]
    }

    /// Inverse of [`Self::deform`], by safeguarded Newton on the radius.
    pub fn undeform(&self, c: [f64; 2]) -> [f64; 2] {
        let r = (c[0] * c[0] + c[1] * c[1]).sqrt();
        let edge = self.phi.delta0().sqrt();
        if r >= edge || r == 0.0 {
            return c;
        }
        let sigma = self.sigma();
        let g = |p: f64| self.phi.eval(p * p) * p / sigma - r;
        let (mut lo, mut hi) = (0.0, edge);
        let mut p = (r * sigma / self.phi.eval(r * r)).min(edge);
        for _ in 0..100 {
            let v = g(p);
            if v.abs() <= 1e-16 {
                break;
            }
            if v < 0.0 {
                lo = p;
            } else {
                hi = p;
            }
            let (f, d) = self.phi.eval_with_derivative(p * p);
            let slope = (f + 2.0 * p * p * d) / sigma;
            let next = p - v / slope;
            p = if next >= lo && next <= hi { next } else { 0.5 * (lo + hi) };
            if hi - lo < 1e-16 {
                break;
            }
        }
        [c[0] * p / r, c[1] * p / r]
    }

    /// Singular values `(Φ, Φ + 2ρ²∂_wΦ)` of `Df` at a centered point, the
    /// tangential and radial expansion.
    pub fn expansions(&self, c: [f64; 2]) -> (f64, f64) {
        let w = c[0] * c[0] + c[1] * c[1];
        if w >= self.phi.delta0() {
            let s = self.sigma();
            return (s, s);
        }
        let (f, d) = self.phi.eval_with_derivative(w);
        (f, f + 2.0 * w * d)
    }
}

impl MapWithHoles<2> for HopfModel2D {
    fn symbol_count(&self) -> usize {
        lattice::DEGREE
    }

    fn step(&self, x: &TorusPoint<2>) -> TorusPoint<2> {
        TorusPoint::new(lattice::apply(self.deform(x.centered())))
    }

    fn branch_of(&self, x: &TorusPoint<2>) -> Option<usize> {
        if self.in_hole(x) {
            return None;
        }
        Some(lattice::symbol(self.deform(x.centered())))
    }

    fn inverse_branch(&self, symbol: usize, y: &TorusPoint<2>) -> TorusPoint<2> {
        let x = lattice::inverse(symbol, y);
        TorusPoint::new(self.undeform(x.centered()))
    }

    fn jacobian(&self, x: &TorusPoint<2>) -> Matrix<2> {
        let c = x.centered();
        let w = c[0] * c[0] + c[1] * c[1];
        let dh = if w >= self.phi.delta0() {
            [[1.0, 0.0], [0.0, 1.0]]
        } else {
            let (f, d) = self.phi.eval_with_derivative(w);
            let s = self.sigma();
            [
                [(f + 2.0 * d * c[0] * c[0]) / s, 2.0 * d * c[0] * c[1] / s],
                [2.0 * d * c[0] * c[1] / s, (f + 2.0 * d * c[1] * c[1]) / s],
            ]
        };
        crate::linalg::mul(&lattice::L, &dh)
    }

    fn log_expansion(&self, x: &TorusPoint<2>) -> f64 {
        self.expansions(x.centered()).0.ln()
    }

    fn log_jacobian(&self, x: &TorusPoint<2>) -> f64 {
        let (t, r) = self.expansions(x.centered());
        (t * r).ln()
    }

    fn expansion_floor(&self, symbol: usize) -> f64 {
        if symbol != 0 {
            self.sigma().ln()
        } else if self.mu() > 0.0 {
            0.0
        } else {
            (1.0 - self.mu()).ln()
        }
    }

    fn expansion_lipschitz(&self, symbol: usize) -> f64 {
        if symbol != 0 {
            return 0.0;
        }
        let d0 = self.phi.delta0();
        let floor = (1.0 - self.mu()).min(1.0);
        2.0 * d0.sqrt() * (self.phi.c0 / d0) / floor
    }

    fn inverse_norm_bound(&self, symbol: usize) -> f64 {
        if symbol == 0 {
            1.0 / (1.0 - self.mu()).min(self.sigma())
        } else {
            1.0 / self.sigma()
        }
    }

    fn branch_diameter(&self, _symbol: usize) -> f64 {
        (2.0 / lattice::DEGREE as f64).sqrt()
    }

    fn hole_volume(&self) -> f64 {
        self.mu_f()
    }

    fn delta_parameter(&self) -> f64 {
        self.mu()
    }

    fn cell_in_hole(&self, lo: &[f64; 2], side: f64) -> bool {
        if self.rho_inv == 0.0 {
            return false;
        }
        [[0.0, 0.0], [side, 0.0], [0.0, side], [side, side]]
            .iter()
            .all(|o| TorusPoint::new([lo[0] + o[0], lo[1] + o[1]]).norm() < self.rho_inv)
    }

    fn label(&self) -> &str {
        "hopf2d"
    }
}

impl Trapped<2> for HopfModel2D {
    fn advance(&self, x: &TorusPoint<2>) -> TorusPoint<2> {
        self.step(x)
    }

    fn in_trap(&self, x: &TorusPoint<2>) -> bool {
        x.norm() < self.trap_fraction * self.rho_inv
    }

    fn trap_boundary(&self, i: usize, n: usize) -> Option<TorusPoint<2>> {
        if self.rho_inv == 0.0 {
            return None;
        }
        let r = self.trap_fraction * self.rho_inv * (1.0 - 1e-9);
        let a = core::f64::consts::TAU * i as f64 / n as f64;
        Some(TorusPoint::new([r * a.cos(), r * a.sin()]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deform_roundtrip() {
        let m = HopfModel2D::new(0.05).unwrap();
        for &c in &[[0.01, 0.02], [0.0, 0.099], [-0.03, 0.001], [0.2, 0.1]] {
            let back = m.undeform(m.deform(c));
            assert!((back[0] - c[0]).abs() < 1e-13 && (back[1] - c[1]).abs() < 1e-13, "{c:?} {back:?}");
        }
    }

    #[test]
    fn circle_is_invariant() {
        let m = HopfModel2D::new(0.1).unwrap();
        let r = m.rho_inv;
        let x = TorusPoint::new([r * 0.6, r * 0.8]);
        let y = m.step(&x);
        assert!((y.norm() - r).abs() < 1e-12);
        let angle = |p: &TorusPoint<2>| {
            let c = p.centered();
            c[1].atan2(c[0])
        };
        assert!((angle(&y) - angle(&x) - lattice::rotation()).abs() < 1e-12);
    }

    #[test]
    fn far_points_follow_the_matrix() {
        let m = HopfModel2D::new(0.1).unwrap();
        let x = TorusPoint::new([0.4, 0.3]);
        let c = x.centered();
        let lin = TorusPoint::new(lattice::apply(c));
        assert!(m.step(&x).distance(&lin) < 1e-15);
    }

    #[test]
    fn inverse_branches_invert() {
        let m = HopfModel2D::new(0.05).unwrap();
        for y in [TorusPoint::new([0.013, 0.991]), TorusPoint::new([0.45, 0.25])] {
            for s in 0..10 {
                let x = m.inverse_branch(s, &y);
                assert!(m.step(&x).distance(&y) < 1e-12);
                if !m.in_hole(&x) {
                    assert_eq!(m.branch_of(&x), Some(s));
                }
            }
        }
    }

    #[test]
    fn jacobian_matches_expansions() {
        let m = HopfModel2D::new(0.05).unwrap();
        let x = TorusPoint::new([0.03, 0.04]);
        let s = crate::linalg::min_singular(&m.jacobian(&x));
        assert!((s.ln() - m.log_expansion(&x)).abs() < 1e-12);
        let det = crate::linalg::det(&m.jacobian(&x));
        assert!((det.ln() - m.log_jacobian(&x)).abs() < 1e-12);
    }

    #[test]
    fn radius_before_and_after_bifurcation() {
        assert_eq!(HopfModel2D::new(0.0).unwrap().rho_inv, 0.0);
        assert_eq!(HopfModel2D::new(-0.1).unwrap().rho_inv, 0.0);
        let m = HopfModel2D::new(0.01).unwrap();
        let approx = first_order_radius(&m.phi);
        assert!((m.rho_inv / approx - 1.0).abs() < 0.05);
    }
}
