#[allow(unused_imports)]
use num_traits::Float;

/// A point of the flat torus `T^D`, stored by its canonical representative in
/// `[0, 1)^D`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TorusPoint<const D: usize>(pub [f64; D]);

#[inline]
pub(crate) fn wrap(x: f64) -> f64 {
    let w = x - x.floor();
    // x slightly below an integer can round up to exactly 1.0
    if w >= 1.0 {
        0.0
    } else {
        w
    }
}

#[inline]
pub(crate) fn center(x: f64) -> f64 {
    let w = wrap(x);
    if w >= 0.5 {
        w - 1.0
    } else {
        w
    }
}

impl<const D: usize> TorusPoint<D> {
    /// Wraps arbitrary real coordinates onto the torus.
    pub fn new(coords: [f64; D]) -> Self {
        let mut c = coords;
        for x in c.iter_mut() {
            *x = wrap(*x);
        }
        Self(c)
    }

    pub fn origin() -> Self {
        Self([0.0; D])
    }

    pub fn coords(&self) -> &[f64; D] {
        &self.0
    }

    /// Representative in `[-1/2, 1/2)^D`.
    pub fn centered(&self) -> [f64; D] {
        let mut c = self.0;
        for x in c.iter_mut() {
            *x = center(*x);
        }
        c
    }

    /// Flat-torus distance: minimum over integer translates.
    pub fn distance(&self, other: &Self) -> f64 {
        let mut s = 0.0;
        for i in 0..D {
            let d = center(self.0[i] - other.0[i]);
            s += d * d;
        }
        s.sqrt()
    }

    /// Distance to the origin of the torus.
    pub fn norm(&self) -> f64 {
        self.distance(&Self::origin())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wraps_into_unit_cube() {
        let p = TorusPoint::new([1.25, -0.25]);
        assert!((p.0[0] - 0.25).abs() < 1e-15);
        assert!((p.0[1] - 0.75).abs() < 1e-15);
        let q = TorusPoint::new([-1e-18]);
        assert!(q.0[0] >= 0.0 && q.0[0] < 1.0);
    }

    #[test]
    fn distance_uses_shortest_translate() {
        let a = TorusPoint::new([0.05, 0.95]);
        let b = TorusPoint::new([0.95, 0.05]);
        assert!((a.distance(&b) - (0.02f64).sqrt()).abs() < 1e-12);
        assert!((a.centered()[1] + 0.05).abs() < 1e-12);
    }
}
