use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use super::hopf2d::HopfModel2D;
use crate::geometry::TorusPoint;
use crate::holes::MapWithHoles;
use crate::rng::stream;

/// Sampled minimum of `log Jac f` over a region, with its location.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JacobianBound {
    pub bound: f64,
    pub min: f64,
    pub at: TorusPoint<2>,
    pub samples: usize,
    pub pass: bool,
}

/// Sampled check of `log Jac f ≥ 2 log σ₁` outside `V₁ = {ρ² ≤ δ₁}` and
/// `log Jac f ≥ (61/32) μ` outside the hole.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobianReport {
    pub mu: f64,
    pub outside_v1: JacobianBound,
    pub outside_hole: JacobianBound,
    /// `log Jac` on the invariant circle, where it is smallest off the hole.
    pub on_circle: f64,
    /// Sampled points violating either bound.
    pub counterexamples: Vec<TorusPoint<2>>,
}

impl JacobianReport {
    pub fn pass(&self) -> bool {
        self.outside_v1.pass && self.outside_hole.pass
    }
}

pub fn jacobian_bounds_check(model: &HopfModel2D, samples: usize, seed: u64) -> JacobianReport {
    let mu = model.mu();
    let d1 = model.phi.delta1();
    let v1_bound = 2.0 * model.phi.params.sigma1.ln();
    let hole_bound = 61.0 / 32.0 * mu;
    let mut v1 = JacobianBound { bound: v1_bound, min: f64::INFINITY, at: TorusPoint::origin(), samples: 0, pass: true };
    let mut hole = JacobianBound { bound: hole_bound, ..v1 };
    let mut counterexamples = Vec::new();
    // half the samples uniform on the torus, half in the disk ρ² < δ₀ where
    // the Jacobian varies
    let r0 = model.phi.delta0().sqrt();
    let mut rng = stream(seed, 0x4a41_4342, 0);
    for i in 0..samples {
        let x = if i % 2 == 0 {
            TorusPoint::new([rng.random(), rng.random()])
        } else {
            let r = r0 * rng.random::<f64>().sqrt();
            let a = core::f64::consts::TAU * rng.random::<f64>();
            TorusPoint::new([r * a.cos(), r * a.sin()])
        };
        let c = x.centered();
        let w = c[0] * c[0] + c[1] * c[1];
        let lj = model.log_jacobian(&x);
        if w > d1 {
            v1.samples += 1;
            if lj < v1.min {
                v1.min = lj;
                v1.at = x;
            }
            if lj < v1_bound {
                counterexamples.push(x);
            }
        }
        if !model.in_hole(&x) {
            hole.samples += 1;
            if lj < hole.min {
                hole.min = lj;
                hole.at = x;
            }
            if lj < hole_bound {
                counterexamples.push(x);
            }
        }
    }
    v1.pass = v1.min >= v1_bound;
    hole.pass = hole.min >= hole_bound;
    let on_circle = model.log_jacobian(&TorusPoint::new([model.rho_inv, 0.0]));
    JacobianReport { mu, outside_v1: v1, outside_hole: hole, on_circle, counterexamples }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixed_point_jacobian_is_contracting() {
        let m = HopfModel2D::new(0.05).unwrap();
        let lj = m.log_jacobian(&TorusPoint::origin());
        assert!((lj - 2.0 * (0.95f64).ln()).abs() < 1e-12);
        assert!(lj < 0.0);
    }
}
