//! Concrete map families: the radial profile `Φ`, the planar and
//! three-dimensional Hopf models, the tripling toy, the conformal linear map
//! and a circle family whose hole opens at a bifurcation.

mod conformal;
mod diaz_viana;
mod escape;
mod hopf2d;
mod hopf3d;
mod jacobian;
pub mod lattice;
mod phi;
mod tripling;

pub use conformal::ConformalTorusMap;
pub use diaz_viana::DiazVianaFamily;
pub use escape::{escape_time, trap_is_invariant, Escape, HoleEscape, Survivors, Trapped, TRAP_CHECK_SAMPLES};
pub use hopf2d::{c0_from_grid, first_order_radius, invariant_circle_radius, HopfModel2D};
pub use hopf3d::{HopfModel3D, Spectrum, A as MATRIX_3D};
pub use jacobian::{jacobian_bounds_check, JacobianBound, JacobianReport};
pub use phi::{build_phi, PhiParams, PhiProfile, CONDITION_GRID};
pub use tripling::TriplingMap;
