use alloc::string::String;
#[allow(unused_imports)]
use num_traits::Float;

use super::point::TorusPoint;

/// Axis-aligned box in lifted coordinates. It may stick out of `[0,1)^D`; the
/// torus wraps it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox<const D: usize> {
    pub lo: [f64; D],
    pub hi: [f64; D],
}

impl<const D: usize> BoundingBox<D> {
    pub fn unit() -> Self {
        Self { lo: [0.0; D], hi: [1.0; D] }
    }

    pub fn volume(&self) -> f64 {
        (0..D).map(|i| (self.hi[i] - self.lo[i]).max(0.0)).product()
    }
}

/// A measurable subset of the torus given by a membership test.
pub trait Region<const D: usize> {
    fn contains(&self, p: &TorusPoint<D>) -> bool;
    /// Every member point has a lift inside this box.
    fn bounding_box(&self) -> BoundingBox<D>;
    fn exact_volume(&self) -> Option<f64> {
        None
    }
    fn label(&self) -> &str;
}

/// Open flat-torus ball.
#[derive(Debug, Clone)]
pub struct Ball<const D: usize> {
    pub center: TorusPoint<D>,
    pub radius: f64,
}

impl<const D: usize> Ball<D> {
    pub fn new(center: TorusPoint<D>, radius: f64) -> Self {
        Self { center, radius }
    }
}

fn unit_ball_volume(d: usize) -> f64 {
    match d {
        0 => 1.0,
        1 => 2.0,
        2 => core::f64::consts::PI,
        3 => 4.0 / 3.0 * core::f64::consts::PI,
        _ => unit_ball_volume(d - 2) * 2.0 * core::f64::consts::PI / d as f64,
    }
}

impl<const D: usize> Region<D> for Ball<D> {
    fn contains(&self, p: &TorusPoint<D>) -> bool {
        p.distance(&self.center) < self.radius
    }

    fn bounding_box(&self) -> BoundingBox<D> {
        let mut b = BoundingBox { lo: self.center.0, hi: self.center.0 };
        for i in 0..D {
            b.lo[i] -= self.radius;
            b.hi[i] += self.radius;
        }
        b
    }

    fn exact_volume(&self) -> Option<f64> {
        (self.radius <= 0.5).then(|| unit_ball_volume(D) * self.radius.powi(D as i32))
    }

    fn label(&self) -> &str {
        "ball"
    }
}

/// Half-open axis box `[lo, hi)` in lifted coordinates.
#[derive(Debug, Clone)]
pub struct AxisBox<const D: usize>(pub BoundingBox<D>);

impl<const D: usize> Region<D> for AxisBox<D> {
    fn contains(&self, p: &TorusPoint<D>) -> bool {
        (0..D).all(|i| {
            let lo = self.0.lo[i];
            // shift the coordinate to the lift closest to the box
            let x = lo + (p.0[i] - lo - (p.0[i] - lo).floor());
            x < self.0.hi[i] || (self.0.hi[i] - lo) >= 1.0
        })
    }

    fn bounding_box(&self) -> BoundingBox<D> {
        self.0
    }

    fn exact_volume(&self) -> Option<f64> {
        Some(self.0.volume().min(1.0))
    }

    fn label(&self) -> &str {
        "box"
    }
}

/// The empty set, with a unit bounding box so that sampling still happens.
#[derive(Debug, Clone, Default)]
pub struct EmptyRegion;

impl<const D: usize> Region<D> for EmptyRegion {
    fn contains(&self, _p: &TorusPoint<D>) -> bool {
        false
    }

    fn bounding_box(&self) -> BoundingBox<D> {
        BoundingBox::unit()
    }

    fn exact_volume(&self) -> Option<f64> {
        Some(0.0)
    }

    fn label(&self) -> &str {
        "empty"
    }
}

/// Region defined by a closure.
pub struct FnRegion<F> {
    pub test: F,
    pub label: String,
    bbox_lo: [f64; 3],
    bbox_hi: [f64; 3],
    volume: Option<f64>,
}

impl<F> FnRegion<F> {
    pub fn new<const D: usize>(test: F, bbox: BoundingBox<D>, label: &str) -> Self {
        let mut lo = [0.0; 3];
        let mut hi = [1.0; 3];
        lo[..D].copy_from_slice(&bbox.lo);
        hi[..D].copy_from_slice(&bbox.hi);
        Self { test, label: label.into(), bbox_lo: lo, bbox_hi: hi, volume: None }
    }

    pub fn with_volume(mut self, v: f64) -> Self {
        self.volume = Some(v);
        self
    }
}

impl<const D: usize, F: Fn(&TorusPoint<D>) -> bool> Region<D> for FnRegion<F> {
    fn contains(&self, p: &TorusPoint<D>) -> bool {
        (self.test)(p)
    }

    fn bounding_box(&self) -> BoundingBox<D> {
        let mut b = BoundingBox { lo: [0.0; D], hi: [1.0; D] };
        b.lo.copy_from_slice(&self.bbox_lo[..D]);
        b.hi.copy_from_slice(&self.bbox_hi[..D]);
        b
    }

    fn exact_volume(&self) -> Option<f64> {
        self.volume
    }

    fn label(&self) -> &str {
        &self.label
    }
}
