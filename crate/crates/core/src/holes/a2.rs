use alloc::vec::Vec;
use core::fmt;

use super::enumerate::{bad_volume_with, EnumerationConfig};
use super::refine::CylinderRefiner;
use super::MapWithHoles;
use crate::bounds::delta_bound;
use crate::Result;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct A2Config {
    /// Depths `n_min..=n_max`.
    pub n_min: usize,
    pub n_max: usize,
    /// Rows with `n < n0` are reported but not judged.
    pub n0: usize,
    pub enumeration: EnumerationConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum A2Status {
    Pass,
    Fail,
    /// The enumeration cap was hit.
    Inconclusive,
    /// `n` is below `n0`.
    OutOfContract,
}

impl fmt::Display for A2Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            A2Status::Pass => "pass",
            A2Status::Fail => "fail",
            A2Status::Inconclusive => "inconclusive",
            A2Status::OutOfContract => "out-of-contract",
        })
    }
}

/// One row of the bad-volume table.
#[derive(Debug, Clone, PartialEq)]
pub struct A2Row {
    pub n: usize,
    pub mu: f64,
    pub mu_f: f64,
    pub threshold: f64,
    pub kept: usize,
    pub pruned: usize,
    pub vol_lo: f64,
    pub vol_hi: f64,
    pub delta: f64,
    pub status: A2Status,
}

/// Checks `Leb(Bₙ(threshold)) < δ(n, ·)` for each depth in the configured
/// range. `δ` is evaluated at the map's `delta_parameter`.
pub fn a2_report<const D: usize, M: MapWithHoles<D> + ?Sized>(
    map: &M,
    mu: f64,
    threshold: f64,
    config: &A2Config,
) -> Result<Vec<A2Row>> {
    let mut refiner = CylinderRefiner::new(map, config.enumeration.refine);
    let mut rows = Vec::new();
    for n in config.n_min.max(1)..=config.n_max {
        let delta = delta_bound(n, map.delta_parameter())?;
        let bad = bad_volume_with(&mut refiner, n, threshold, config.enumeration)?;
        let (vol_lo, vol_hi) = if bad.inconclusive { (0.0, bad.volume_upper) } else { (bad.volume_lower(), bad.volume_upper) };
        let status = if n < config.n0 {
            A2Status::OutOfContract
        } else if bad.inconclusive {
            A2Status::Inconclusive
        } else if vol_hi < delta {
            A2Status::Pass
        } else {
            A2Status::Fail
        };
        rows.push(A2Row {
            n,
            mu,
            mu_f: map.hole_volume(),
            threshold,
            kept: bad.census.kept,
            pruned: bad.census.pruned,
            vol_lo,
            vol_hi,
            delta,
            status,
        });
    }
    Ok(rows)
}
