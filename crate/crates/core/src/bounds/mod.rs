//! Exact checks of the counting and volume inequalities behind the bad-set
//! bound. Binomials are big integers; logarithms of them are enclosed, and an
//! enclosure that straddles a bound counts as a failure.

mod binom;
mod chain;
mod patterns;

pub use binom::{binomial, ln_big, ln_big_mid, BigBinomial, Verdict};
pub use chain::{
    delta_bound, delta_first_below, delta_peak, lemma_cell, lemma_grid, lt_constraints, lt_limits,
    run_density, volume_chain_check, ChainReport, ChainRow, LtFlags,
};
pub use patterns::{
    count_patterns, entropy_bound, entropy_grid, entropy_onset, entropy_probe, kappa0, power_sum_check,
    prefactor_check, stirling_binomial_bound, stirling_grid, BlockPattern, GridSummary, LogCheck, PatternCount,
};
