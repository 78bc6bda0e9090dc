use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::EnhashError;
use crate::stream::ClassId;

/// `2^(-decay_rate * dt)`.
#[inline]
pub fn decay_factor(decay_rate: f64, dt: u64) -> f64 {
    (-decay_rate * dt as f64).exp2()
}

/// Per-class statistics held by one bucket.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassStats {
    /// Decayed weight, normalised across the bucket's classes.
    pub count: f64,
    /// Step at which this class last hashed into the bucket.
    pub tstamp: u64,
    /// Raw number of samples of this class seen by the bucket.
    pub sample_count: u64,
    /// Element-wise sum of those samples.
    pub sample_sum: Vec<f64>,
}

impl ClassStats {
    /// Mean of the samples recorded for this class.
    pub fn mean(&self) -> Vec<f64> {
        let n = self.sample_count as f64;
        self.sample_sum.iter().map(|s| s / n).collect()
    }

    /// Euclidean distance from `x` to [`Self::mean`], without allocating.
    pub(crate) fn distance_to_mean(&self, x: &[f64]) -> f64 {
        let n = self.sample_count as f64;
        self.sample_sum
            .iter()
            .zip(x)
            .map(|(s, v)| {
                let diff = v - s / n;
                diff * diff
            })
            .sum::<f64>()
            .sqrt()
    }
}

/// Statistics for every class that has hashed into one bucket.
///
/// A class is either present with all of its statistics or absent, so the
/// decayed counts, timestamps, sample counts and sums always share a key set.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct BucketState {
    classes: BTreeMap<ClassId, ClassStats>,
}

impl BucketState {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn get(&self, class: ClassId) -> Option<&ClassStats> {
        self.classes.get(&class)
    }

    /// Classes in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = (ClassId, &ClassStats)> + '_ {
        self.classes.iter().map(|(c, s)| (*c, s))
    }

    pub fn count(&self, class: ClassId) -> Option<f64> {
        self.classes.get(&class).map(|s| s.count)
    }

    pub fn total_count(&self) -> f64 {
        self.classes.values().map(|s| s.count).sum()
    }

    /// Most recent step at which any class touched the bucket.
    pub fn last_touched(&self) -> Option<u64> {
        self.classes.values().map(|s| s.tstamp).max()
    }

    pub fn class_mean(&self, class: ClassId) -> Result<Vec<f64>, EnhashError> {
        self.classes.get(&class).map(ClassStats::mean).ok_or(EnhashError::AbsentClass(class))
    }

    /// Records one sample of `class` at `step`.
    ///
    /// The class's weight is decayed by the time since it was last seen here,
    /// incremented by one, and the whole bucket is renormalised to sum to one.
    pub fn observe(&mut self, class: ClassId, x: &[f64], step: u64, decay_rate: f64) {
        match self.classes.get_mut(&class) {
            Some(stats) => {
                let dt = step.saturating_sub(stats.tstamp);
                stats.count = 1.0 + decay_factor(decay_rate, dt) * stats.count;
                stats.tstamp = step;
                stats.sample_count += 1;
                for (acc, v) in stats.sample_sum.iter_mut().zip(x) {
                    *acc += v;
                }
            }
            None => {
                self.classes.insert(
                    class,
                    ClassStats { count: 1.0, tstamp: step, sample_count: 1, sample_sum: x.to_vec() },
                );
            }
        }
        let total = self.total_count();
        for stats in self.classes.values_mut() {
            stats.count /= total;
        }
    }

    pub(crate) fn from_classes(classes: BTreeMap<ClassId, ClassStats>) -> Self {
        Self { classes }
    }
}
