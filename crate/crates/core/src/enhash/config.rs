use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Learner variants used for ablation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variant {
    /// Decayed counts weighted by inverse distance to the class mean.
    #[default]
    Full,
    /// Forgetting disabled: the decay rate is forced to zero.
    Lambda0,
    /// Distance weighting disabled; equal evidence falls to the smallest class id.
    NoWeights,
}

impl Variant {
    pub const ALL: [Variant; 3] = [Variant::Full, Variant::Lambda0, Variant::NoWeights];

    pub fn as_str(self) -> &'static str {
        match self {
            Variant::Full => "full",
            Variant::Lambda0 => "lambda0",
            Variant::NoWeights => "no_weights",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().replace('-', "_").as_str() {
            "full" => Ok(Variant::Full),
            "lambda0" => Ok(Variant::Lambda0),
            "no_weights" | "noweights" => Ok(Variant::NoWeights),
            other => Err(format!("unknown variant {other:?} (expected full, lambda0 or no_weights)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EnhashConfig {
    pub num_estimators: usize,
    /// Quantisation width of each projection, in the units of `w·x`.
    pub bin_width: f64,
    /// Per-step decay exponent; stale statistics are scaled by `2^(-decay_rate * dt)`.
    pub decay_rate: f64,
    pub seed: u64,
    pub variant: Variant,
    /// Lower clamp applied to distances before they divide a class weight.
    pub distance_epsilon: f64,
}

impl Default for EnhashConfig {
    fn default() -> Self {
        Self {
            num_estimators: 10,
            bin_width: 0.1,
            decay_rate: 0.015,
            seed: 0,
            variant: Variant::Full,
            distance_epsilon: 1e-9,
        }
    }
}

/// A single invalid configuration field.
#[derive(Debug, Clone, PartialEq)]
pub enum ConfigIssue {
    NoEstimators,
    BinWidth(f64),
    DecayRate(f64),
    DistanceEpsilon(f64),
}

impl fmt::Display for ConfigIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConfigIssue::NoEstimators => write!(f, "num_estimators must be at least 1"),
            ConfigIssue::BinWidth(v) => write!(f, "bin_width must be finite and > 0 (got {v})"),
            ConfigIssue::DecayRate(v) => write!(f, "decay_rate must be finite and >= 0 (got {v})"),
            ConfigIssue::DistanceEpsilon(v) => write!(f, "distance_epsilon must be finite and > 0 (got {v})"),
        }
    }
}

impl EnhashConfig {
    /// Returns every invalid field, not just the first.
    pub fn issues(&self) -> Vec<ConfigIssue> {
        let mut issues = Vec::new();
        if self.num_estimators == 0 {
            issues.push(ConfigIssue::NoEstimators);
        }
        if !(self.bin_width.is_finite() && self.bin_width > 0.0) {
            issues.push(ConfigIssue::BinWidth(self.bin_width));
        }
        if !(self.decay_rate.is_finite() && self.decay_rate >= 0.0) {
            issues.push(ConfigIssue::DecayRate(self.decay_rate));
        }
        if !(self.distance_epsilon.is_finite() && self.distance_epsilon > 0.0) {
            issues.push(ConfigIssue::DistanceEpsilon(self.distance_epsilon));
        }
        issues
    }

    pub fn validate(&self) -> Result<(), super::EnhashError> {
        let issues = self.issues();
        if issues.is_empty() {
            Ok(())
        } else {
            Err(super::EnhashError::InvalidConfig(issues))
        }
    }

    /// Decay rate actually applied, after the variant has had its say.
    pub fn effective_decay_rate(&self) -> f64 {
        match self.variant {
            Variant::Lambda0 => 0.0,
            Variant::Full | Variant::NoWeights => self.decay_rate,
        }
    }

    pub fn uses_distance_weights(&self) -> bool {
        self.variant != Variant::NoWeights
    }

    pub fn with_variant(mut self, variant: Variant) -> Self {
        self.variant = variant;
        self
    }
}

/// Derives the ablation variant of `config`. `Variant::Full` leaves it unchanged.
pub fn make_variant(config: &EnhashConfig, variant: Variant) -> EnhashConfig {
    config.clone().with_variant(variant)
}
