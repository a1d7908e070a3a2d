use alloc::format;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::{Error, Result};

/// Least-squares box-dimension fit.
#[derive(Debug, Clone, PartialEq)]
pub struct DimensionEstimate {
    /// `(ε, count)` pairs sorted by decreasing ε.
    pub points: Vec<(f64, usize)>,
    /// Slope of `ln count` against `|ln ε|`, clamped to `[0, d]`.
    pub slope: f64,
    pub intercept: f64,
    /// Root-mean-square residual of the fit, in log units.
    pub residual: f64,
    /// Half-width of the 95% confidence interval on the slope.
    pub ci: f64,
    /// Set when every count is equal, so the zero slope comes from a flat
    /// ladder rather than from the data.
    pub flat_warning: bool,
}

impl DimensionEstimate {
    pub fn lower(&self) -> f64 {
        self.slope - self.ci
    }

    pub fn upper(&self) -> f64 {
        self.slope + self.ci
    }
}

// two-sided 97.5% Student t quantiles, df = 1..20
const T975: [f64; 20] = [
    12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228, 2.201, 2.179, 2.160,
    2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086,
];

fn t_quantile(df: usize) -> f64 {
    match df {
        0 => f64::INFINITY,
        1..=20 => T975[df - 1],
        21..=30 => 2.042,
        _ => 1.96,
    }
}

/// Fits `ln n(ε) ≈ D |ln ε| + b` over the given ladder in ambient dimension `d`.
pub fn box_dimension(points: &[(f64, usize)], d: usize) -> Result<DimensionEstimate> {
    if points.len() < 3 {
        return Err(Error::DegenerateRegression(format!("{} scales, need at least 3", points.len())));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    for &(eps, count) in &pts {
        if !(eps > 0.0 && eps <= 1.0) {
            return Err(Error::InvalidScale(format!("epsilon {eps} outside (0, 1]")));
        }
        if count == 0 {
            return Err(Error::DegenerateRegression(format!("zero count at epsilon {eps}")));
        }
    }
    let span = pts[0].0 / pts[pts.len() - 1].0;
    if span < 8.0 - 1e-9 {
        return Err(Error::DegenerateRegression(format!("scales span a factor {span:.3}, need 8")));
    }
    for w in pts.windows(2) {
        if w[1].1 < w[0].1 {
            return Err(Error::DegenerateRegression(format!(
                "count decreases from {} to {} as epsilon shrinks to {}",
                w[0].1, w[1].1, w[1].0
            )));
        }
    }

    let n = pts.len() as f64;
    let xs: Vec<f64> = pts.iter().map(|p| -p.0.ln()).collect();
    let ys: Vec<f64> = pts.iter().map(|p| (p.1 as f64).ln()).collect();
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let all_equal = pts.iter().all(|p| p.1 == pts[0].1);
    let raw = if all_equal { 0.0 } else { sxy / sxx };
    let intercept = if all_equal { my } else { my - raw * mx };
    let sse: f64 = xs.iter().zip(&ys).map(|(x, y)| (y - intercept - raw * x).powi(2)).sum();
    let residual = (sse / n).sqrt();
    let se = (sse / (n - 2.0) / sxx).sqrt();
    let ci = t_quantile(pts.len() - 2) * se;
    let flat_warning = all_equal;

    Ok(DimensionEstimate {
        points: pts,
        slope: raw.clamp(0.0, d as f64),
        intercept,
        residual,
        ci,
        flat_warning,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn cantor_slope() {
        let pts: Vec<_> = (1..=8).map(|k| (3f64.powi(-k), 1usize << k)).collect();
        let e = box_dimension(&pts, 1).unwrap();
        assert!((e.slope - 2f64.ln() / 3f64.ln()).abs() < 1e-12);
        assert!(e.ci < 1e-9);
    }

    #[test]
    fn interval_and_points() {
        let pts: Vec<_> = (3..=10).map(|k| (0.5f64.powi(k), 1usize << k)).collect();
        assert!((box_dimension(&pts, 1).unwrap().slope - 1.0).abs() < 1e-12);
        let pts: Vec<_> = (3..=10).map(|k| (0.5f64.powi(k), 5)).collect();
        let e = box_dimension(&pts, 1).unwrap();
        assert_eq!(e.slope, 0.0);
        assert!(e.flat_warning);
    }

    #[test]
    fn rejects_short_or_narrow_ladders() {
        assert!(box_dimension(&[(0.5, 2), (0.25, 4)], 1).is_err());
        assert!(box_dimension(&[(0.5, 2), (0.25, 4), (0.125, 8)], 1).is_err());
        assert!(box_dimension(&[(0.5, 2), (0.25, 4), (0.125, 8), (0.0625, 16)], 1).is_ok());
        assert!(box_dimension(&vec![(0.5, 4), (0.25, 2), (0.125, 8), (0.0625, 16)], 1).is_err());
    }
}
