use alloc::format;
use core::f64::consts::{PI, TAU};
#[allow(unused_imports)]
use num_traits::Float;

use super::escape::Trapped;
use super::hopf2d::invariant_circle_radius;
use super::phi::{PhiParams, PhiProfile};
use crate::geometry::TorusPoint;
use crate::linalg::{self, Matrix};
use crate::{Error, Result};

/// Companion matrix of `x³ + 10x − 1`.
pub const A: Matrix<3> = [[0.0, 1.0, 0.0], [0.0, 0.0, 1.0], [1.0, -10.0, 0.0]];

/// Eigendata of [`A`]: real eigenvalue `λ`, complex pair `σe^{±iα}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spectrum {
    pub lambda: f64,
    pub sigma: f64,
    pub alpha: f64,
}

impl Spectrum {
    pub fn compute() -> Result<Self> {
        let p = |x: f64| x * x * x + 10.0 * x - 1.0;
        let mut l = 0.1;
        for _ in 0..50 {
            l -= p(l) / (3.0 * l * l + 10.0);
        }
        let re = -l / 2.0;
        let sigma = (1.0 / l).sqrt();
        let im = (sigma * sigma - re * re).sqrt();
        let s = Self { lambda: l, sigma, alpha: im.atan2(re) };
        s.verify()?;
        Ok(s)
    }

    /// The certificate: `det A = 1`, `λσ² = 1`, `σ > 3`, `λ < 1/9` and
    /// `kα ∉ 2πZ` for `k = 1, …, 4`.
    pub fn verify(&self) -> Result<()> {
        let fail = |what: &str| Err(Error::InvalidParameter(format!("spectrum check failed: {what}")));
        if (linalg::det(&A) - 1.0).abs() > 1e-12 {
            return fail("det A != 1");
        }
        if (self.lambda * self.sigma * self.sigma - 1.0).abs() > 1e-10 {
            return fail("lambda sigma^2 != 1");
        }
        if !(self.sigma > 3.0 && self.lambda > 0.0 && self.lambda < 1.0 / 9.0) {
            return fail("sigma <= 3 or lambda outside (0, 1/9)");
        }
        for k in 1..=4 {
            let a = k as f64 * self.alpha;
            let r = a - TAU * (a / TAU).floor();
            if r.min(TAU - r) < 1e-6 {
                return fail("resonant rotation angle");
            }
        }
        Ok(())
    }
}

/// The three-dimensional model on `T³`: the automorphism `A` deformed inside
/// `V = {ρ² < δ₀, |z| < δ₀}` (eigencoordinates) to the cylindrical form
/// `(ρ, θ, z) ↦ (Φ(μ, ρ², z) ρ, θ + α, λz)`.
#[derive(Debug, Clone)]
pub struct HopfModel3D {
    pub spectrum: Spectrum,
    pub phi: PhiProfile,
    pub rho_inv: f64,
    /// Columns: rotation plane basis `p`, `−q`, then the contracting eigenvector.
    pub basis: Matrix<3>,
    pub basis_inv: Matrix<3>,
}

impl HopfModel3D {
    pub fn new(mu: f64) -> Result<Self> {
        let spectrum = Spectrum::compute()?;
        let params = PhiParams { mu, sigma: spectrum.sigma, delta0: 0.01, delta1: 0.005, sigma1: 1.5 };
        Self::with_params(spectrum, params)
    }

    pub fn with_params(spectrum: Spectrum, params: PhiParams) -> Result<Self> {
        if (params.sigma - spectrum.sigma).abs() > 1e-12 {
            return Err(Error::InvalidParameter("profile sigma must equal the complex modulus".into()));
        }
        let phi = PhiProfile::new(params)?;
        let rho_inv = invariant_circle_radius(&phi)?;
        let (re, im) = (spectrum.sigma * spectrum.alpha.cos(), spectrum.sigma * spectrum.alpha.sin());
        // (1, z, z²) = p + iq for z = re + i·im
        let p = [1.0, re, re * re - im * im];
        let q = [0.0, im, 2.0 * re * im];
        let np = p.iter().map(|v| v * v).sum::<f64>().sqrt();
        let l = spectrum.lambda;
        let v = [1.0, l, l * l];
        let nv = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        let mut basis = [[0.0; 3]; 3];
        for i in 0..3 {
            basis[i] = [p[i] / np, -q[i] / np, v[i] / nv];
        }
        let basis_inv = invert3(&basis)?;
        Ok(Self { spectrum, phi, rho_inv, basis, basis_inv })
    }

    pub fn mu(&self) -> f64 {
        self.phi.mu()
    }

    pub fn delta0(&self) -> f64 {
        self.phi.delta0()
    }

    /// Eigencoordinates `(u, v, z)` of a point.
    pub fn eigen(&self, x: &TorusPoint<3>) -> [f64; 3] {
        linalg::apply(&self.basis_inv, &x.centered())
    }

    fn in_v(&self, e: &[f64; 3]) -> bool {
        e[0] * e[0] + e[1] * e[1] < self.delta0() && e[2].abs() < self.delta0()
    }

    pub fn step(&self, x: &TorusPoint<3>) -> TorusPoint<3> {
        let e = self.eigen(x);
        let c = if self.in_v(&e) {
            let (phi, _, _) = self.phi.eval_z(e[0] * e[0] + e[1] * e[1], e[2]);
            let k = phi / self.spectrum.sigma;
            linalg::apply(&self.basis, &[k * e[0], k * e[1], e[2]])
        } else {
            x.centered()
        };
        TorusPoint::new(linalg::apply(&A, &c))
    }

    /// Local expansion rates `(tangential, radial, vertical)` in eigencoordinates.
    pub fn local_expansions(&self, x: &TorusPoint<3>) -> (f64, f64, f64) {
        let e = self.eigen(x);
        let l = self.spectrum.lambda;
        if !self.in_v(&e) {
            return (self.spectrum.sigma, self.spectrum.sigma, l);
        }
        let w = e[0] * e[0] + e[1] * e[1];
        let (phi, dw, _) = self.phi.eval_z(w, e[2]);
        (phi, phi + 2.0 * w * dw, l)
    }

    /// Jacobian of the local form in eigencoordinates.
    pub fn local_jacobian(&self, x: &TorusPoint<3>) -> Matrix<3> {
        let e = self.eigen(x);
        let s = &self.spectrum;
        let (ca, sa) = (s.alpha.cos(), s.alpha.sin());
        let b = [[s.sigma * ca, -s.sigma * sa, 0.0], [s.sigma * sa, s.sigma * ca, 0.0], [0.0, 0.0, s.lambda]];
        if !self.in_v(&e) {
            return b;
        }
        let w = e[0] * e[0] + e[1] * e[1];
        let (phi, dw, dz) = self.phi.eval_z(w, e[2]);
        let sg = s.sigma;
        let dh = [
            [(phi + 2.0 * dw * e[0] * e[0]) / sg, 2.0 * dw * e[0] * e[1] / sg, dz * e[0] / sg],
            [2.0 * dw * e[0] * e[1] / sg, (phi + 2.0 * dw * e[1] * e[1]) / sg, dz * e[1] / sg],
            [0.0, 0.0, 1.0],
        ];
        linalg::mul(&b, &dh)
    }

    /// `‖Dĝ⁻¹(ĝ(x))‖` measured in eigencoordinates.
    pub fn deriv_inverse_norm(&self, x: &TorusPoint<3>) -> f64 {
        1.0 / linalg::min_singular(&self.local_jacobian(x))
    }

    /// Volume of the trap cylinder in torus coordinates.
    pub fn trap_volume(&self) -> f64 {
        PI * self.rho_inv * self.rho_inv * self.delta0() * linalg::det(&self.basis).abs()
    }
}

impl Trapped<3> for HopfModel3D {
    fn advance(&self, x: &TorusPoint<3>) -> TorusPoint<3> {
        self.step(x)
    }

    fn in_trap(&self, x: &TorusPoint<3>) -> bool {
        let e = self.eigen(x);
        e[0] * e[0] + e[1] * e[1] < self.rho_inv * self.rho_inv && e[2].abs() < 0.5 * self.delta0()
    }

    /// Half the samples on the side wall, half on the two caps.
    fn trap_boundary(&self, i: usize, n: usize) -> Option<TorusPoint<3>> {
        if self.rho_inv == 0.0 {
            return None;
        }
        let shrink = 1.0 - 1e-9;
        let h = 0.5 * self.delta0() * shrink;
        let golden = 0.618_033_988_749_895;
        let u = (i as f64 * golden).fract();
        let v = (i as f64 + 0.5) / n as f64;
        let e = if i % 2 == 0 {
            let a = TAU * u;
            let r = self.rho_inv * shrink;
            [r * a.cos(), r * a.sin(), h * (2.0 * v - 1.0)]
        } else {
            let a = TAU * u;
            let r = self.rho_inv * shrink * v.sqrt();
            let z = if (i / 2) % 2 == 0 { h } else { -h };
            [r * a.cos(), r * a.sin(), z]
        };
        Some(TorusPoint::new(linalg::apply(&self.basis, &e)))
    }
}

fn invert3(m: &Matrix<3>) -> Result<Matrix<3>> {
    let d = linalg::det(m);
    if d.abs() < 1e-14 {
        return Err(Error::InvalidParameter("singular eigenbasis".into()));
    }
    let mut inv = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            let (a, b) = ((j + 1) % 3, (j + 2) % 3);
            let (c, e) = ((i + 1) % 3, (i + 2) % 3);
            inv[i][j] = (m[a][c] * m[b][e] - m[a][e] * m[b][c]) / d;
        }
    }
    Ok(inv)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectrum_values() {
        let s = Spectrum::compute().unwrap();
        assert!((s.lambda - 0.0999).abs() < 1e-4);
        assert!((s.sigma - 3.163_855).abs() < 1e-5);
        assert!((s.alpha - 1.5866).abs() < 1e-4);
    }

    #[test]
    fn basis_conjugates_to_rotation() {
        let m = HopfModel3D::new(0.05).unwrap();
        let s = m.spectrum;
        let id = linalg::mul(&m.basis, &m.basis_inv);
        for i in 0..3 {
            for j in 0..3 {
                assert!((id[i][j] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-12);
            }
        }
        let conj = linalg::mul(&m.basis_inv, &linalg::mul(&A, &m.basis));
        assert!((conj[0][0] - s.sigma * s.alpha.cos()).abs() < 1e-10);
        assert!((conj[1][0] - s.sigma * s.alpha.sin()).abs() < 1e-10);
        assert!((conj[2][2] - s.lambda).abs() < 1e-10);
        assert!(conj[0][2].abs() < 1e-10 && conj[2][0].abs() < 1e-10);
    }

    #[test]
    fn bifurcation_point_expansions() {
        let m = HopfModel3D::new(0.0).unwrap();
        let (t, r, v) = m.local_expansions(&TorusPoint::origin());
        assert_eq!(t, 1.0);
        assert_eq!(r, 1.0);
        assert!((v - m.spectrum.lambda).abs() < 1e-15);
    }

    #[test]
    fn trap_is_forward_invariant() {
        let m = HopfModel3D::new(0.1).unwrap();
        assert!(super::super::escape::trap_is_invariant(&m, 2000));
    }
}
