//! Points on the flat torus, regions, grid covers and the two estimators
//! everything else is measured with: box counting and stratified Monte Carlo
//! volume estimation.

mod boxcount;
mod dimension;
mod grid;
mod lebesgue;
mod point;
mod region;

pub use boxcount::{box_count, CoverSampler, MembershipSampler, PointCloud, PointSet, SampleDensity};
pub use dimension::{box_dimension, DimensionEstimate};
pub use grid::{GridCover, Scale};
pub use lebesgue::{binomial_half_width, lebesgue_estimate, MeasureEstimate, RULE_OF_THREE_99, Z_99};
pub use point::TorusPoint;
pub use region::{AxisBox, Ball, BoundingBox, EmptyRegion, FnRegion, Region};
