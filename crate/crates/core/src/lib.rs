//! Numerical machinery for expanding maps with holes.
//!
//! The crate is `no_std` (it only needs `alloc`) and contains no IO. It covers:
//!
//! * [`geometry`]: torus points, regions, grid covers, box-counting dimension
//!   estimates and stratified Monte Carlo measure estimates;
//! * [`families`]: the concrete map families (the 2D and 3D Hopf models, the
//!   tripling toy, a conformal linear torus map and a one-dimensional family
//!   whose hole opens at a bifurcation);
//! * [`holes`]: the map-with-holes abstraction with cylinders, average least
//!   expansion profiles, bad-set volumes and the first-good-time partition;
//! * [`induced`]: the induced expanding map built from that partition;
//! * [`bounds`]: exact big-integer checks of the combinatorial volume bounds.
#![no_std]

extern crate alloc;

pub mod bounds;
pub mod error;
pub mod families;
pub mod geometry;
pub mod holes;
pub mod induced;
pub mod linalg;
pub(crate) mod rng;

pub use error::{Error, Result};
