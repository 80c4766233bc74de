//! Achievable regions: per-allocation polytopes, their exact projection, and the
//! convex closure over an allocation grid.

pub mod frontier;
pub mod lp;
pub mod polytope;
pub mod sweep;

use thiserror::Error;

pub use frontier::{convex_closure, dominance_gap, region_dominates, Frontier, FrontierMeta};
pub use lp::{compare_projection, lp_project, LpVariant, ProjectionCheck, SplitRatePolytope};
pub use polytope::{corollary_region, RegionPolytope};
pub use sweep::{sweep, sweep_frontier, GridSpec, Mask, Sweep, SweepStats};

#[derive(Debug, Error, PartialEq)]
pub enum RegionError {
    #[error("no valid allocation produced a nonempty region")]
    EmptyRegion,
    #[error("no points to close")]
    EmptyInput,
    #[error("region is unbounded")]
    Unbounded,
    #[error("csv: {0}")]
    Csv(String),
}
