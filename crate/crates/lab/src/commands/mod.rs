pub mod a2;
pub mod bounds;
pub mod dim;
pub mod induced;
pub mod sweep;

use repeller_core::families::{c0_from_grid, ConformalTorusMap, DiazVianaFamily, HopfModel2D, PhiParams, TriplingMap};
use repeller_core::holes::{EnumerationConfig, MapWithHoles, RefineConfig};

use crate::config::{Config, ConfigError, Family};

/// Threshold used for the fixed families, whose holes do not depend on `μ`.
pub const FIXED_THRESHOLD: f64 = 0.1;

/// Work done on one map of the configured family.
pub trait MapTask {
    type Output;

    fn run<const D: usize, M: MapWithHoles<D>>(&self, map: &M, mu: f64, threshold: f64) -> anyhow::Result<Self::Output>;
}

pub fn hopf2d_model(cfg: &Config, mu: f64) -> anyhow::Result<HopfModel2D> {
    let params = PhiParams { mu, delta0: cfg.delta0, delta1: cfg.delta1, sigma1: cfg.sigma1, ..PhiParams::planar(mu) };
    let params = PhiParams { sigma: cfg.sigma.unwrap_or(params.sigma), ..params };
    Ok(HopfModel2D::with_params(params)?)
}

/// `c₀` from the config, else from the whole `μ` grid.
pub fn hopf2d_c0(cfg: &Config) -> anyhow::Result<f64> {
    match cfg.c0 {
        Some(c) => Ok(c),
        None => Ok(c0_from_grid(&cfg.mus)?),
    }
}

pub fn enumeration(cfg: &Config, dim: usize, geometric: bool) -> EnumerationConfig {
    EnumerationConfig {
        cap: cfg.word_cap,
        geometric_terms: geometric,
        refine: RefineConfig::for_dimension(dim, cfg.seed),
    }
}

/// Builds the map for `mu` and hands it to `task`.
pub fn with_map<T: MapTask>(cfg: &Config, mu: f64, task: &T) -> anyhow::Result<T::Output> {
    match cfg.family {
        Family::Hopf2d => {
            let m = hopf2d_model(cfg, mu)?.with_c0(hopf2d_c0(cfg)?);
            task.run(&m, mu, cfg.threshold.unwrap_or(m.threshold()))
        }
        Family::DiazViana => {
            let mut m = DiazVianaFamily::new(mu)?;
            if let Some(c) = cfg.c0 {
                m = m.with_c0(c);
            }
            task.run(&m, mu, cfg.threshold.unwrap_or(m.threshold()))
        }
        Family::Tripling => task.run(&TriplingMap, mu, cfg.threshold.unwrap_or(FIXED_THRESHOLD)),
        Family::Conformal => task.run(&ConformalTorusMap, mu, cfg.threshold.unwrap_or(FIXED_THRESHOLD)),
        Family::Hopf3d => Err(ConfigError("the 3D family supports only the dim command".into()).into()),
    }
}
