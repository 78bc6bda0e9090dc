//! Self-describing model snapshots.
//!
//! A snapshot carries the configuration, every estimator's projection and,
//! for each populated bucket, the full per-class statistics. Buckets are
//! listed in ascending code order so that equal models serialise to equal
//! bytes. JSON encoding round-trips every `f64` exactly.

use std::collections::{BTreeMap, HashMap};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::bucket::{BucketState, ClassStats};
use super::projection::ProjectionEstimator;
use super::{EnhashConfig, EnhashError, EnhashModel};
use crate::stream::ClassId;

pub const SNAPSHOT_FORMAT: &str = "enhash-model";
pub const SNAPSHOT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSnapshot {
    pub format: String,
    pub version: u32,
    pub config: EnhashConfig,
    pub dimension: usize,
    pub step: u64,
    pub class_totals: Vec<(ClassId, u64)>,
    pub estimators: Vec<EstimatorSnapshot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimatorSnapshot {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub buckets: Vec<BucketSnapshot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BucketSnapshot {
    pub code: i64,
    pub classes: Vec<ClassSnapshot>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassSnapshot {
    pub class: ClassId,
    pub count: f64,
    pub tstamp: u64,
    pub sample_count: u64,
    pub sample_sum: Vec<f64>,
}

impl EnhashModel {
    pub fn snapshot(&self) -> ModelSnapshot {
        let estimators = self
            .estimators()
            .iter()
            .enumerate()
            .map(|(l, est)| {
                let mut buckets: Vec<BucketSnapshot> = self
                    .buckets(l)
                    .map(|(code, bucket)| BucketSnapshot {
                        code,
                        classes: bucket
                            .iter()
                            .map(|(class, s)| ClassSnapshot {
                                class,
                                count: s.count,
                                tstamp: s.tstamp,
                                sample_count: s.sample_count,
                                sample_sum: s.sample_sum.clone(),
                            })
                            .collect(),
                    })
                    .collect();
                buckets.sort_by_key(|b| b.code);
                EstimatorSnapshot { weights: est.weights().to_vec(), bias: est.bias(), buckets }
            })
            .collect();
        ModelSnapshot {
            format: SNAPSHOT_FORMAT.to_owned(),
            version: SNAPSHOT_VERSION,
            config: self.config().clone(),
            dimension: self.dimension(),
            step: self.step(),
            class_totals: self.class_totals().iter().map(|(c, n)| (*c, *n)).collect(),
            estimators,
        }
    }

    pub fn from_snapshot(snap: ModelSnapshot) -> Result<Self, EnhashError> {
        let bad = |msg: String| Err(EnhashError::Snapshot(msg));
        if snap.format != SNAPSHOT_FORMAT || snap.version != SNAPSHOT_VERSION {
            return bad(format!("unsupported snapshot {} v{}", snap.format, snap.version));
        }
        snap.config.validate()?;
        if snap.dimension == 0 {
            return Err(EnhashError::ZeroDimension);
        }
        if snap.estimators.len() != snap.config.num_estimators {
            return bad(format!(
                "{} estimators recorded, config says {}",
                snap.estimators.len(),
                snap.config.num_estimators
            ));
        }

        let class_totals: BTreeMap<ClassId, u64> = snap.class_totals.into_iter().collect();
        let mut estimators = Vec::with_capacity(snap.estimators.len());
        let mut stores = Vec::with_capacity(snap.estimators.len());
        for (l, est) in snap.estimators.into_iter().enumerate() {
            if est.weights.len() != snap.dimension {
                return bad(format!("estimator {l}: {} weights for dimension {}", est.weights.len(), snap.dimension));
            }
            let Some(projection) = ProjectionEstimator::new(est.weights, est.bias, snap.config.bin_width) else {
                return bad(format!("estimator {l}: invalid weights or bias"));
            };
            estimators.push(projection);

            let mut store = HashMap::with_capacity(est.buckets.len());
            for bucket in est.buckets {
                let mut classes = BTreeMap::new();
                for c in bucket.classes {
                    if c.sample_count == 0 || c.sample_sum.len() != snap.dimension || !(c.count >= 0.0) {
                        return bad(format!("estimator {l}, bucket {}: malformed class {}", bucket.code, c.class));
                    }
                    if c.tstamp > snap.step || !class_totals.contains_key(&c.class) {
                        return bad(format!("estimator {l}, bucket {}: inconsistent class {}", bucket.code, c.class));
                    }
                    classes.insert(
                        c.class,
                        ClassStats { count: c.count, tstamp: c.tstamp, sample_count: c.sample_count, sample_sum: c.sample_sum },
                    );
                }
                if classes.is_empty() {
                    return bad(format!("estimator {l}, bucket {}: no classes", bucket.code));
                }
                if store.insert(bucket.code, BucketState::from_classes(classes)).is_some() {
                    return bad(format!("estimator {l}: duplicate bucket {}", bucket.code));
                }
            }
            stores.push(store);
        }
        let steps: u64 = class_totals.values().sum();
        if steps != snap.step {
            return bad(format!("class totals sum to {steps}, step is {}", snap.step));
        }
        Ok(EnhashModel::from_parts(snap.config, snap.dimension, estimators, stores, class_totals, snap.step))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.snapshot()).expect("snapshot serialisation cannot fail")
    }

    pub fn from_json(json: &str) -> Result<Self, EnhashError> {
        let snap: ModelSnapshot = serde_json::from_str(json).map_err(|e| EnhashError::Snapshot(e.to_string()))?;
        Self::from_snapshot(snap)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<(), EnhashError> {
        std::fs::write(path.as_ref(), self.to_json()).map_err(|e| EnhashError::Snapshot(format!("{}: {e}", path.as_ref().display())))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self, EnhashError> {
        let json = std::fs::read_to_string(path.as_ref())
            .map_err(|e| EnhashError::Snapshot(format!("{}: {e}", path.as_ref().display())))?;
        Self::from_json(&json)
    }
}
