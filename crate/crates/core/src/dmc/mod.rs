//! Finite-alphabet channels: mutual information, channel conditions, and the
//! capacity regions of the degraded and semi-deterministic zero-delay channels.

pub mod capacity;
pub mod channel;
pub mod conditions;
pub mod fixtures;
pub mod grid;
pub mod pmf;
pub mod scheme;

pub use capacity::{
    capacity_degraded, capacity_degraded_cor, capacity_semidet, capacity_with_report, family_bounds, formula_region,
    grid_families, FamilyBounds, Formula,
};
pub use channel::{FiniteChannel, InputFamily};
pub use conditions::{check_conditions, Condition, ConditionReport, SampledCheck};
pub use grid::DmcGrid;
pub use pmf::JointPmf;
pub use scheme::{scheme_terms, SchemeAssignment};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DmcError {
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),
    #[error("cannot parse channel: {0}")]
    Parse(String),
    #[error("grid: {0}")]
    Grid(String),
    #[error("condition {} ({}) does not hold", .0.name(), .0.statement())]
    ConditionFailed(Condition),
}
