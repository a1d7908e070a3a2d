use rayon::prelude::*;
use serde::Serialize;

use repeller_core::families::{
    DiazVianaFamily, HoleEscape, HopfModel2D, HopfModel3D, PhiParams, Survivors, Trapped, TriplingMap,
    ConformalTorusMap,
};
use repeller_core::geometry::{box_dimension, CoverSampler, MembershipSampler, SampleDensity, Scale};
use repeller_core::holes::MapWithHoles;

use crate::config::{Config, Family};
use crate::output::{Outputs, Verdict};
use crate::svg::{Plot, Series};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimRow {
    pub mu: f64,
    pub mu_f: f64,
    pub rho_inv: f64,
    pub no_hole: bool,
    pub dimension: f64,
    pub ci: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    pub residual: f64,
    pub flat_warning: bool,
    pub trap_verified: bool,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DimReport {
    pub rows: Vec<DimRow>,
    /// `(mu, epsilon, count)` for every row and scale.
    pub counts: Vec<(f64, f64, usize)>,
}

impl DimReport {
    /// Dimension estimates do not increase with `μ` beyond their intervals.
    pub fn trend_holds(&self) -> bool {
        let mut rows: Vec<&DimRow> = self.rows.iter().filter(|r| r.dimension.is_finite()).collect();
        rows.sort_by(|a, b| a.mu.total_cmp(&b.mu));
        rows.windows(2).all(|w| w[1].ci_lo <= w[0].ci_hi)
    }
}

pub const DIM_HEADER: [&str; 12] = [
    "mu", "mu_f", "rho_inv", "no_hole", "dimension", "ci", "ci_lo", "ci_hi", "residual", "flat_warning",
    "trap_verified", "status",
];

pub fn ladder(cfg: &Config) -> anyhow::Result<Vec<Scale>> {
    cfg.eps_exponents
        .iter()
        .map(|&e| Scale::new(cfg.eps_base, e).map_err(|e| crate::config::ConfigError(e.to_string()).into()))
        .collect()
}

fn survivors_estimate<const D: usize, T: Trapped<D>>(
    map: &T,
    cfg: &Config,
    scales: &[Scale],
) -> Result<(repeller_core::geometry::DimensionEstimate, bool), repeller_core::Error> {
    let set = Survivors::new(map, cfg.horizon);
    let verified = set.verified;
    let density = SampleDensity { initial: cfg.density_initial, max: cfg.density_max, ..SampleDensity::default() };
    let sampler = MembershipSampler::new(set, density, cfg.seed);
    let covers = sampler.cover_ladder(scales)?;
    let points: Vec<(f64, usize)> = scales.iter().zip(&covers).map(|(s, c)| (s.side(), c.count())).collect();
    Ok((box_dimension(&points, D)?, verified))
}

fn row_for(cfg: &Config, mu: f64, scales: &[Scale]) -> (DimRow, Vec<(f64, f64, usize)>) {
    let result: Result<(f64, f64, _, bool), repeller_core::Error> = (|| match cfg.family {
        Family::Hopf2d => {
            let params = PhiParams { mu, delta0: cfg.delta0, delta1: cfg.delta1, sigma1: cfg.sigma1, ..PhiParams::planar(mu) };
            let params = PhiParams { sigma: cfg.sigma.unwrap_or(params.sigma), ..params };
            let m = HopfModel2D::with_params(params)?;
            let (est, v) = survivors_estimate::<2, _>(&m, cfg, scales)?;
            Ok((m.mu_f(), m.rho_inv, est, v))
        }
        Family::Hopf3d => {
            let base = HopfModel3D::new(mu)?;
            let params = PhiParams { mu, sigma: base.spectrum.sigma, delta0: cfg.delta0, delta1: cfg.delta1, sigma1: cfg.sigma1 };
            let m = HopfModel3D::with_params(base.spectrum, params)?;
            let (est, v) = survivors_estimate::<3, _>(&m, cfg, scales)?;
            Ok((m.trap_volume(), m.rho_inv, est, v))
        }
        Family::Tripling => {
            let (est, v) = survivors_estimate::<1, _>(&HoleEscape(&TriplingMap), cfg, scales)?;
            Ok((TriplingMap.hole_volume(), 0.0, est, v))
        }
        Family::DiazViana => {
            let m = DiazVianaFamily::new(mu)?;
            let (est, v) = survivors_estimate::<1, _>(&HoleEscape(&m), cfg, scales)?;
            Ok((m.hole_volume(), m.edge, est, v))
        }
        Family::Conformal => {
            let (est, v) = survivors_estimate::<2, _>(&HoleEscape(&ConformalTorusMap), cfg, scales)?;
            Ok((0.0, 0.0, est, v))
        }
    })();
    match result {
        Ok((mu_f, rho_inv, est, verified)) => {
            let no_hole = mu_f == 0.0;
            let status = if no_hole {
                "no hole"
            } else if !verified {
                "advisory: trap unverified"
            } else if est.flat_warning {
                "advisory: flat counts"
            } else {
                "ok"
            };
            let counts = est.points.iter().map(|&(e, c)| (mu, e, c)).collect();
            let row = DimRow {
                mu,
                mu_f,
                rho_inv,
                no_hole,
                dimension: est.slope,
                ci: est.ci,
                ci_lo: est.lower(),
                ci_hi: est.upper(),
                residual: est.residual,
                flat_warning: est.flat_warning,
                trap_verified: verified,
                status: status.into(),
            };
            (row, counts)
        }
        Err(e) => {
            let nan = f64::NAN;
            let row = DimRow {
                mu,
                mu_f: nan,
                rho_inv: nan,
                no_hole: false,
                dimension: nan,
                ci: nan,
                ci_lo: nan,
                ci_hi: nan,
                residual: nan,
                flat_warning: false,
                trap_verified: false,
                status: format!("error: {e}"),
            };
            (row, Vec::new())
        }
    }
}

/// Box dimension of the escape-time survivor set for every `μ` of the grid.
/// Rows are computed in parallel and returned in grid order.
pub fn run_dim(cfg: &Config) -> anyhow::Result<DimReport> {
    let scales = ladder(cfg)?;
    let results: Vec<_> = cfg.mus.par_iter().map(|&mu| row_for(cfg, mu, &scales)).collect();
    let mut rows = Vec::with_capacity(results.len());
    let mut counts = Vec::new();
    for (r, c) in results {
        rows.push(r);
        counts.extend(c);
    }
    Ok(DimReport { rows, counts })
}

pub fn write_dim(report: &DimReport, out: &mut Outputs) -> anyhow::Result<Verdict> {
    out.csv("dim.csv", &DIM_HEADER, &report.rows)?;
    out.csv("dim_counts.csv", &["mu", "epsilon", "count"], &report.counts)?;
    let ok: Vec<&DimRow> = report.rows.iter().filter(|r| r.dimension.is_finite()).collect();
    let log_x = ok.iter().all(|r| r.mu > 0.0) && !ok.is_empty();
    let plot = Plot {
        title: "box dimension of the survivor set".into(),
        x_label: "mu".into(),
        y_label: "dimension".into(),
        log_x,
        log_y: false,
        series: vec![
            Series::new("estimate", ok.iter().map(|r| (r.mu, r.dimension))),
            Series::new("ci low", ok.iter().map(|r| (r.mu, r.ci_lo))).dashed(),
            Series::new("ci high", ok.iter().map(|r| (r.mu, r.ci_hi))).dashed(),
        ],
    };
    out.text("dim.svg", &plot.render())?;
    let advisory = report.rows.iter().any(|r| r.status.starts_with("advisory") || r.status.starts_with("error"));
    Ok(if advisory { Verdict::Advisory } else { Verdict::Pass })
}
