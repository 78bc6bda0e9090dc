use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

/// Lower bound of the representable code range, as an `f64`.
const CODE_MIN: f64 = i64::MIN as f64;
/// `2^63`: the first value past `i64::MAX`.
const CODE_END: f64 = -(i64::MIN as f64);

/// One quantised random projection: `floor((w·x + bias) / bin_width)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProjectionEstimator {
    weights: Vec<f64>,
    bias: f64,
    bin_width: f64,
}

/// The scaled projection fell outside the `i64` code range (or was not finite).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodeOverflow {
    pub scaled: f64,
}

impl ProjectionEstimator {
    /// Builds an estimator from explicit parameters. Returns `None` if they break
    /// the estimator invariants.
    pub fn new(weights: Vec<f64>, bias: f64, bin_width: f64) -> Option<Self> {
        let valid = !weights.is_empty()
            && weights.iter().all(|w| w.is_finite())
            && bin_width.is_finite()
            && bin_width > 0.0
            && bias.is_finite()
            && bias.abs() <= bin_width;
        valid.then_some(Self { weights, bias, bin_width })
    }

    /// Draws estimator `index` of the ensemble seeded with `seed`.
    ///
    /// Each estimator reads its own ChaCha stream, so estimator `i` does not
    /// depend on how many estimators precede it.
    pub fn sample(dimension: usize, bin_width: f64, seed: u64, index: usize) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index as u64);
        let weights = (0..dimension).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let bias = rng.random_range(-bin_width..=bin_width);
        Self { weights, bias, bin_width }
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn bias(&self) -> f64 {
        self.bias
    }

    pub fn bin_width(&self) -> f64 {
        self.bin_width
    }

    /// `(w·x + bias) / bin_width`, before flooring.
    pub fn scaled_projection(&self, x: &[f64]) -> f64 {
        let dot: f64 = self.weights.iter().zip(x).map(|(w, v)| w * v).sum();
        (dot + self.bias) / self.bin_width
    }

    /// Bucket code of `x`. The caller guarantees `x.len() == weights.len()`.
    pub fn hash_code(&self, x: &[f64]) -> Result<i64, CodeOverflow> {
        let scaled = self.scaled_projection(x).floor();
        if (CODE_MIN..CODE_END).contains(&scaled) {
            Ok(scaled as i64)
        } else {
            Err(CodeOverflow { scaled })
        }
    }
}
