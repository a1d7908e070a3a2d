//! The integer matrix `L = [[3, −1], [1, 3]]` acting on the 2-torus: a degree
//! 10 covering, conformal with factor `√10`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::geometry::TorusPoint;

pub const L: [[f64; 2]; 2] = [[3.0, -1.0], [1.0, 3.0]];
pub const DEGREE: usize = 10;

pub fn conformal_factor() -> f64 {
    10f64.sqrt()
}

/// Rotation angle of `L / √10`.
pub fn rotation() -> f64 {
    1f64.atan2(3.0)
}

pub fn apply(c: [f64; 2]) -> [f64; 2] {
    [3.0 * c[0] - c[1], c[0] + 3.0 * c[1]]
}

pub fn apply_inverse(c: [f64; 2]) -> [f64; 2] {
    [(3.0 * c[0] + c[1]) / 10.0, (-c[0] + 3.0 * c[1]) / 10.0]
}

/// Symbol of a centered point `c`: the class of the integer part of `L·c`
/// modulo the image lattice `L·Z²`.
pub fn symbol(c: [f64; 2]) -> usize {
    let v = apply(c);
    let e0 = (v[0] + 0.5).floor() as i64;
    let e1 = (v[1] + 0.5).floor() as i64;
    (e0 - 3 * e1).rem_euclid(DEGREE as i64) as usize
}

/// The preimage of `y` under `L` whose symbol is `s`.
pub fn inverse(s: usize, y: &TorusPoint<2>) -> TorusPoint<2> {
    let c = y.centered();
    TorusPoint::new(apply_inverse([c[0] + s as f64, c[1]]))
}
