use alloc::format;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Number of grid points used to verify the profile conditions.
pub const CONDITION_GRID: usize = 2048;

/// Shape parameters of the radial profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiParams {
    pub mu: f64,
    pub sigma: f64,
    pub delta0: f64,
    pub delta1: f64,
    pub sigma1: f64,
}

impl PhiParams {
    /// Defaults used by the planar model: `σ = √10`.
    pub fn planar(mu: f64) -> Self {
        Self { mu, sigma: 10f64.sqrt(), delta0: 0.01, delta1: 0.005, sigma1: 1.5 }
    }
}

/// Radial expansion profile `w ↦ Φ(μ, w)` with `w = ρ²`.
///
/// On `[0, δ₁]` it is the convex quadratic `1 − μ + c·w + q·w²`; on `[δ₁, δ₀]`
/// a cubic Hermite blend reaching `σ` with zero slope; `σ` beyond.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhiProfile {
    pub params: PhiParams,
    /// Linear coefficient, equal to `∂_wΦ(μ, 0)`.
    pub b1: f64,
    pub q: f64,
    /// `Φ(μ, δ₁)`.
    pub phi1: f64,
    /// `∂_wΦ(μ, δ₁)`.
    pub slope1: f64,
    /// `δ₀ · max ∂_wΦ` over the verification grid.
    pub c0: f64,
}

/// Builds the profile and verifies the four conditions on a grid.
pub fn build_phi(mu: f64, sigma: f64, delta0: f64, delta1: f64, sigma1: f64) -> Result<PhiProfile> {
    PhiProfile::new(PhiParams { mu, sigma, delta0, delta1, sigma1 })
}

impl PhiProfile {
    pub fn new(params: PhiParams) -> Result<Self> {
        let PhiParams { mu, sigma, delta0, delta1, sigma1 } = params;
        if !(mu.abs() < 1.0) {
            return Err(Error::InvalidParameter(format!("|mu| = {} must be < 1", mu.abs())));
        }
        if !(0.0 < delta1 && delta1 < delta0 && delta0 < 1.0) {
            return Err(Error::InvalidParameter(format!("need 0 < delta1 < delta0 < 1, got {delta1}, {delta0}")));
        }
        if !(1.0 < sigma1 && sigma1 < sigma) {
            return Err(Error::InvalidParameter(format!("need 1 < sigma1 < sigma, got {sigma1}, {sigma}")));
        }
        let phi1 = sigma1 + (sigma - sigma1) / 3.0;
        let b1 = (phi1 - 1.0) / (2.0 * delta1);
        let q = ((phi1 - 1.0) / 2.0 + mu) / (delta1 * delta1);
        if q < 0.0 {
            return Err(Error::ProfileCondition {
                condition: "C4",
                detail: format!("quadratic coefficient {q} < 0, derivative would drop below its value at 0"),
            });
        }
        let slope1 = b1 + 2.0 * q * delta1;
        let chord = (sigma - phi1) / (delta0 - delta1);
        if slope1 >= 3.0 * chord {
            return Err(Error::ProfileCondition {
                condition: "C3",
                detail: format!("blend slope ratio {} >= 3, cubic is not monotone", slope1 / chord),
            });
        }
        let mut p = Self { params, b1, q, phi1, slope1, c0: 0.0 };
        p.c0 = delta0 * p.verify()?;
        Ok(p)
    }

    pub fn mu(&self) -> f64 {
        self.params.mu
    }

    pub fn sigma(&self) -> f64 {
        self.params.sigma
    }

    pub fn delta0(&self) -> f64 {
        self.params.delta0
    }

    pub fn delta1(&self) -> f64 {
        self.params.delta1
    }

    /// `(Φ(μ, w), ∂_wΦ(μ, w))`.
    pub fn eval_with_derivative(&self, w: f64) -> (f64, f64) {
        let PhiParams { mu, sigma, delta0, delta1, .. } = self.params;
        let w = w.max(0.0);
        if w <= delta1 {
            (1.0 - mu + self.b1 * w + self.q * w * w, self.b1 + 2.0 * self.q * w)
        } else if w < delta0 {
            let h = delta0 - delta1;
            let u = (w - delta1) / h;
            let m0 = self.slope1 * h;
            let h00 = (2.0 * u - 3.0) * u * u + 1.0;
            let h10 = ((u - 2.0) * u + 1.0) * u;
            let h01 = (3.0 - 2.0 * u) * u * u;
            let value = h00 * self.phi1 + h10 * m0 + h01 * sigma;
            let chord = (sigma - self.phi1) / h;
            let deriv = (1.0 - u) * (6.0 * u * chord + (1.0 - 3.0 * u) * self.slope1);
            (value, deriv)
        } else {
            (sigma, 0.0)
        }
    }

    pub fn eval(&self, w: f64) -> f64 {
        self.eval_with_derivative(w).0
    }

    pub fn derivative(&self, w: f64) -> f64 {
        self.eval_with_derivative(w).1
    }

    /// Profile with the vertical cutoff: `Φ` blended to `σ` as `|z|` goes from
    /// `δ₀/2` to `δ₀`. Returns `(Φ, ∂_wΦ, ∂_zΦ)`.
    pub fn eval_z(&self, w: f64, z: f64) -> (f64, f64, f64) {
        let (phi, dphi) = self.eval_with_derivative(w);
        let (r, dr) = cutoff(z.abs(), self.params.delta0);
        let sigma = self.params.sigma;
        let dz = dr * (sigma - phi) * if z < 0.0 { -1.0 } else { 1.0 };
        (phi + r * (sigma - phi), (1.0 - r) * dphi, dz)
    }

    /// Checks the four conditions on `CONDITION_GRID` points of `[0, 2δ₀]` and
    /// returns the largest derivative seen.
    fn verify(&self) -> Result<f64> {
        let PhiParams { mu, sigma, delta0, delta1, sigma1 } = self.params;
        let fail = |condition: &'static str, w: f64, what: &str| Error::ProfileCondition {
            condition,
            detail: format!("{what} at w = {w:e}, mu = {mu}"),
        };
        let (phi0, d0) = self.eval_with_derivative(0.0);
        if (phi0 - (1.0 - mu)).abs() > 1e-12 {
            return Err(fail("C1", 0.0, "Phi(0) != 1 - mu"));
        }
        let mut max_d = 0.0f64;
        for i in 0..CONDITION_GRID {
            let w = 2.0 * delta0 * i as f64 / (CONDITION_GRID - 1) as f64;
            let (phi, d) = self.eval_with_derivative(w);
            if phi < 1.0 - mu - 1e-12 {
                return Err(fail("C1", w, "Phi below 1 - mu"));
            }
            if w >= delta0 && phi != sigma {
                return Err(fail("C2", w, "Phi != sigma"));
            }
            if w < delta0 && !(d > 0.0) {
                return Err(fail("C3", w, "derivative not positive"));
            }
            if w >= delta1 && !(phi > sigma1) {
                return Err(fail("C4", w, "Phi <= sigma1"));
            }
            if w <= delta1 && d < d0 {
                return Err(fail("C4", w, "derivative below its value at 0"));
            }
            max_d = max_d.max(d);
        }
        Ok(max_d)
    }
}

/// `C¹` ramp: 0 below `δ₀/2`, 1 from `δ₀` on. Returns value and derivative.
fn cutoff(s: f64, delta0: f64) -> (f64, f64) {
    let half = delta0 / 2.0;
    if s <= half {
        (0.0, 0.0)
    } else if s >= delta0 {
        (1.0, 0.0)
    } else {
        let v = (s - half) / half;
        (v * v * (3.0 - 2.0 * v), 6.0 * v * (1.0 - v) / half)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_values() {
        for mu in [0.0, 0.05, 0.2] {
            let p = PhiProfile::new(PhiParams::planar(mu)).unwrap();
            assert_eq!(p.eval(0.0), 1.0 - mu);
            assert_eq!(p.eval(0.01), 10f64.sqrt());
            assert_eq!(p.eval(0.5), 10f64.sqrt());
            assert!((p.eval(p.delta1()) - p.phi1).abs() < 1e-12);
        }
    }

    #[test]
    fn continuous_derivative_at_junction() {
        let p = PhiProfile::new(PhiParams::planar(0.05)).unwrap();
        let d1 = p.delta1();
        let h = 1e-9;
        assert!((p.eval(d1 + h) - p.eval(d1 - h)).abs() < 1e-5);
        assert!((p.derivative(d1 + h) - p.derivative(d1 - h)).abs() < 1e-3);
        let fd = (p.eval(0.007 + 1e-7) - p.eval(0.007 - 1e-7)) / 2e-7;
        assert!((fd - p.derivative(0.007)).abs() < 1e-4 * fd);
    }

    #[test]
    fn infeasible_parameters_name_the_condition() {
        let e = build_phi(-0.9, 10f64.sqrt(), 0.01, 0.005, 1.5).unwrap_err();
        assert!(matches!(e, Error::ProfileCondition { condition: "C4", .. }));
        let e = build_phi(0.05, 10f64.sqrt(), 0.01, 0.0005, 1.5).unwrap_err();
        assert!(matches!(e, Error::ProfileCondition { condition: "C3", .. }));
        assert!(build_phi(0.0, 10f64.sqrt(), 0.01, 0.02, 1.5).is_err());
        assert!(build_phi(1.0, 10f64.sqrt(), 0.01, 0.005, 1.5).is_err());
    }

    #[test]
    fn vertical_cutoff() {
        let p = PhiProfile::new(PhiParams::planar(0.1)).unwrap();
        assert_eq!(p.eval_z(0.0, 0.0).0, 0.9);
        assert_eq!(p.eval_z(0.0, 0.004).0, 0.9);
        assert_eq!(p.eval_z(0.0, 0.01).0, p.sigma());
        assert_eq!(p.eval_z(0.0, -0.02).0, p.sigma());
        assert!(p.eval_z(0.001, 0.008).1 > 0.0);
    }
}
