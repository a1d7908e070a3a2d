//! Small dense matrices in dimension 1 to 3.

// inherent float methods shadow the trait whenever std is linked into the build
#[allow(unused_imports)]
use num_traits::Float;

pub type Matrix<const D: usize> = [[f64; D]; D];

pub fn identity<const D: usize>() -> Matrix<D> {
    let mut m = [[0.0; D]; D];
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1.0;
    }
    m
}

pub fn mul<const D: usize>(a: &Matrix<D>, b: &Matrix<D>) -> Matrix<D> {
    let mut c = [[0.0; D]; D];
    for i in 0..D {
        for j in 0..D {
            c[i][j] = (0..D).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

pub fn apply<const D: usize>(a: &Matrix<D>, v: &[f64; D]) -> [f64; D] {
    let mut out = [0.0; D];
    for i in 0..D {
        out[i] = (0..D).map(|k| a[i][k] * v[k]).sum();
    }
    out
}

pub fn det<const D: usize>(m: &Matrix<D>) -> f64 {
    match D {
        1 => m[0][0],
        2 => m[0][0] * m[1][1] - m[0][1] * m[1][0],
        3 => {
            m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
                + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
        }
        _ => unimplemented!("dimension {D}"),
    }
}

/// Smallest singular value, i.e. `1 / ‖m⁻¹‖` for invertible `m`.
pub fn min_singular<const D: usize>(m: &Matrix<D>) -> f64 {
    // eigenvalues of the Gram matrix mᵀm
    let mut g = [[0.0; D]; D];
    for i in 0..D {
        for j in 0..D {
            g[i][j] = (0..D).map(|k| m[k][i] * m[k][j]).sum();
        }
    }
    let lambda = match D {
        1 => g[0][0],
        2 => {
            let tr = g[0][0] + g[1][1];
            let dt = g[0][0] * g[1][1] - g[0][1] * g[1][0];
            let disc = (tr * tr / 4.0 - dt).max(0.0).sqrt();
            // the small root via the product formula stays accurate when it is tiny
            let big = tr / 2.0 + disc;
            if big > 0.0 { dt / big } else { 0.0 }
        }
        3 => sym3_min_eigen(&[[g[0][0], g[0][1], g[0][2]], [g[1][0], g[1][1], g[1][2]], [g[2][0], g[2][1], g[2][2]]]),
        _ => unimplemented!("dimension {D}"),
    };
    lambda.max(0.0).sqrt()
}

fn sym3_min_eigen(a: &[[f64; 3]; 3]) -> f64 {
    let p1 = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    let q = (a[0][0] + a[1][1] + a[2][2]) / 3.0;
    if p1 == 0.0 {
        return a[0][0].min(a[1][1]).min(a[2][2]);
    }
    let p2 = (a[0][0] - q).powi(2) + (a[1][1] - q).powi(2) + (a[2][2] - q).powi(2) + 2.0 * p1;
    let p = (p2 / 6.0).sqrt();
    let mut b = *a;
    for (i, row) in b.iter_mut().enumerate() {
        for (j, v) in row.iter_mut().enumerate() {
            *v = (*v - if i == j { q } else { 0.0 }) / p;
        }
    }
    let r = (det::<3>(&b) / 2.0).clamp(-1.0, 1.0);
    let phi = r.acos() / 3.0;
    q + 2.0 * p * (phi + 2.0 * core::f64::consts::PI / 3.0).cos()
}
