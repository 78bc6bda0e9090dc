//! Projection-hash ensemble learner with decayed bucket statistics.

mod bucket;
mod config;
mod model;
mod projection;
mod snapshot;

pub use bucket::{decay_factor, BucketState, ClassStats};
pub use config::{make_variant, ConfigIssue, EnhashConfig, Variant};
pub use model::{EnhashModel, Footprint, Prediction};
pub use projection::{CodeOverflow, ProjectionEstimator};
pub use snapshot::{BucketSnapshot, ClassSnapshot, EstimatorSnapshot, ModelSnapshot, SNAPSHOT_FORMAT, SNAPSHOT_VERSION};

use crate::stream::ClassId;

#[derive(Debug, thiserror::Error)]
pub enum EnhashError {
    #[error("invalid learner config: {}", join_issues(.0))]
    InvalidConfig(Vec<ConfigIssue>),
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("expected {expected} features, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("feature {index} is not finite")]
    NonFiniteFeature { index: usize },
    #[error("instance at step {step}: estimator {estimator} projects to {scaled:e} bins, outside the 64-bit code range; reduce feature scale or raise bin_width")]
    HashOverflow { estimator: usize, step: u64, scaled: f64 },
    #[error("out-of-order instance: expected step {expected}, found {found}")]
    OutOfOrder { expected: u64, found: u64 },
    #[error("class {0} is not present in the bucket")]
    AbsentClass(ClassId),
    #[error("bad snapshot: {0}")]
    Snapshot(String),
}

fn join_issues(issues: &[ConfigIssue]) -> String {
    issues.iter().map(ToString::to_string).collect::<Vec<_>>().join("; ")
}
