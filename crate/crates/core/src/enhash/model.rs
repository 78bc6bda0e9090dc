use std::collections::{BTreeMap, HashMap};
use std::mem::size_of;

use super::bucket::{decay_factor, BucketState, ClassStats};
use super::projection::ProjectionEstimator;
use super::{EnhashConfig, EnhashError};
use crate::stream::{ClassId, LabeledInstance, StreamDescriptor};

/// Output of [`EnhashModel::predict`].
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub label: ClassId,
    /// Accumulated `log(1 + v)` evidence per class. Classes with no evidence are absent.
    pub class_weights: BTreeMap<ClassId, f64>,
}

/// Populated-bucket counts and an estimate of resident bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Footprint {
    pub buckets_per_estimator: Vec<usize>,
    pub total_buckets: usize,
    pub approx_bytes: usize,
}

/// The projection-hash ensemble.
///
/// Each estimator maps a sample to a bucket code; every bucket keeps decayed,
/// normalised class weights plus per-class sample sums so that a query can be
/// scored by `2^(-λ Δt) · count / distance-to-class-mean`, log-compressed and
/// summed over estimators.
#[derive(Debug, Clone, PartialEq)]
pub struct EnhashModel {
    config: EnhashConfig,
    dimension: usize,
    estimators: Vec<ProjectionEstimator>,
    buckets: Vec<HashMap<i64, BucketState>>,
    class_totals: BTreeMap<ClassId, u64>,
    step: u64,
    fallback: ClassId,
}

impl EnhashModel {
    pub fn new(descriptor: &StreamDescriptor, config: EnhashConfig) -> Result<Self, EnhashError> {
        Self::with_dimension(descriptor.dimension, config)
    }

    pub fn with_dimension(dimension: usize, config: EnhashConfig) -> Result<Self, EnhashError> {
        config.validate()?;
        if dimension == 0 {
            return Err(EnhashError::ZeroDimension);
        }
        let estimators = (0..config.num_estimators)
            .map(|l| ProjectionEstimator::sample(dimension, config.bin_width, config.seed, l))
            .collect();
        Ok(Self {
            buckets: vec![HashMap::new(); config.num_estimators],
            estimators,
            config,
            dimension,
            class_totals: BTreeMap::new(),
            step: 0,
            fallback: ClassId(0),
        })
    }

    pub(crate) fn from_parts(
        config: EnhashConfig,
        dimension: usize,
        estimators: Vec<ProjectionEstimator>,
        buckets: Vec<HashMap<i64, BucketState>>,
        class_totals: BTreeMap<ClassId, u64>,
        step: u64,
    ) -> Self {
        let fallback = majority(&class_totals);
        Self { config, dimension, estimators, buckets, class_totals, step, fallback }
    }

    pub fn config(&self) -> &EnhashConfig {
        &self.config
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    /// Number of instances trained on so far.
    pub fn step(&self) -> u64 {
        self.step
    }

    pub fn estimators(&self) -> &[ProjectionEstimator] {
        &self.estimators
    }

    pub fn bucket(&self, estimator: usize, code: i64) -> Option<&BucketState> {
        self.buckets.get(estimator)?.get(&code)
    }

    /// Populated buckets of one estimator, in unspecified order.
    pub fn buckets(&self, estimator: usize) -> impl Iterator<Item = (i64, &BucketState)> + '_ {
        self.buckets[estimator].iter().map(|(c, b)| (*c, b))
    }

    /// Global per-class training counts.
    pub fn class_totals(&self) -> &BTreeMap<ClassId, u64> {
        &self.class_totals
    }

    /// Running majority class (ties to the smallest id), or class 0 before any update.
    pub fn fallback_class(&self) -> ClassId {
        self.fallback
    }

    /// Bucket codes of `x` under every estimator. `step` only labels errors.
    pub fn hash_codes(&self, x: &[f64], step: u64) -> Result<Vec<i64>, EnhashError> {
        self.check_input(x)?;
        self.estimators
            .iter()
            .enumerate()
            .map(|(l, est)| {
                est.hash_code(x)
                    .map_err(|o| EnhashError::HashOverflow { estimator: l, step, scaled: o.scaled })
            })
            .collect()
    }

    /// Scores `x` as if it arrived at the next step. Does not touch the model.
    pub fn predict(&self, x: &[f64]) -> Result<Prediction, EnhashError> {
        let t = self.step + 1;
        let codes = self.hash_codes(x, t)?;
        Ok(self.predict_with_codes(x, &codes, t))
    }

    /// Trains on one labelled sample, advancing the step counter.
    pub fn update(&mut self, x: &[f64], y: ClassId) -> Result<(), EnhashError> {
        let t = self.step + 1;
        let codes = self.hash_codes(x, t)?;
        self.update_with_codes(x, y, &codes, t);
        Ok(())
    }

    /// Interleaved test-then-train on one instance: predict at its step, then learn it.
    pub fn process(&mut self, inst: &LabeledInstance) -> Result<Prediction, EnhashError> {
        let t = self.step + 1;
        if inst.step != t {
            return Err(EnhashError::OutOfOrder { expected: t, found: inst.step });
        }
        let codes = self.hash_codes(&inst.features, t)?;
        let prediction = self.predict_with_codes(&inst.features, &codes, t);
        self.update_with_codes(&inst.features, inst.label, &codes, t);
        Ok(prediction)
    }

    fn check_input(&self, x: &[f64]) -> Result<(), EnhashError> {
        if x.len() != self.dimension {
            return Err(EnhashError::DimensionMismatch { expected: self.dimension, found: x.len() });
        }
        if let Some(j) = x.iter().position(|v| !v.is_finite()) {
            return Err(EnhashError::NonFiniteFeature { index: j });
        }
        Ok(())
    }

    fn predict_with_codes(&self, x: &[f64], codes: &[i64], t: u64) -> Prediction {
        let decay_rate = self.config.effective_decay_rate();
        let use_distance = self.config.uses_distance_weights();
        let eps = self.config.distance_epsilon;

        let mut class_weights: BTreeMap<ClassId, f64> = BTreeMap::new();
        for (store, code) in self.buckets.iter().zip(codes) {
            let Some(bucket) = store.get(code) else { continue };
            let Some(last) = bucket.last_touched() else { continue };
            let decay = decay_factor(decay_rate, t.saturating_sub(last));
            for (class, stats) in bucket.iter() {
                let dist = if use_distance { stats.distance_to_mean(x).max(eps) } else { 1.0 };
                let v = decay * stats.count / dist;
                *class_weights.entry(class).or_insert(0.0) += v.ln_1p();
            }
        }

        let label = argmax(&class_weights).unwrap_or(self.fallback);
        Prediction { label, class_weights }
    }

    fn update_with_codes(&mut self, x: &[f64], y: ClassId, codes: &[i64], t: u64) {
        let decay_rate = self.config.effective_decay_rate();
        for (store, &code) in self.buckets.iter_mut().zip(codes) {
            store.entry(code).or_default().observe(y, x, t, decay_rate);
        }
        let total = self.class_totals.entry(y).or_insert(0);
        *total += 1;
        let total = *total;
        let best = self.class_totals.get(&self.fallback).copied().unwrap_or(0);
        if y != self.fallback && (total > best || (total == best && y < self.fallback)) {
            self.fallback = y;
        }
        self.step = t;
    }

    pub fn footprint(&self) -> Footprint {
        let buckets_per_estimator: Vec<usize> = self.buckets.iter().map(HashMap::len).collect();
        let total_buckets = buckets_per_estimator.iter().sum();

        let per_bucket = size_of::<i64>() + size_of::<BucketState>() + size_of::<usize>();
        let per_class = size_of::<ClassId>() + size_of::<ClassStats>() + 3 * size_of::<usize>();
        let per_feature = size_of::<f64>();
        let buckets: usize = self
            .buckets
            .iter()
            .flat_map(HashMap::values)
            .map(|b| per_bucket + b.len() * (per_class + self.dimension * per_feature))
            .sum();
        let fixed = size_of::<Self>()
            + self.estimators.len() * (size_of::<ProjectionEstimator>() + self.dimension * per_feature)
            + self.class_totals.len() * (size_of::<ClassId>() + size_of::<u64>());
        Footprint { buckets_per_estimator, total_buckets, approx_bytes: fixed + buckets }
    }
}

/// Class with the largest positive weight, smallest id on ties.
fn argmax(weights: &BTreeMap<ClassId, f64>) -> Option<ClassId> {
    let mut best: Option<(ClassId, f64)> = None;
    for (&class, &w) in weights {
        if w > 0.0 && best.is_none_or(|(_, bw)| w > bw) {
            best = Some((class, w));
        }
    }
    best.map(|(c, _)| c)
}

fn majority(totals: &BTreeMap<ClassId, u64>) -> ClassId {
    let mut best = (ClassId(0), 0u64);
    for (&c, &n) in totals {
        if n > best.1 {
            best = (c, n);
        }
    }
    best.0
}
