use serde::{Deserialize, Serialize};

use super::MetricsError;
use crate::stream::ClassId;

/// One predict-then-train result.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Outcome {
    pub step: u64,
    pub true_label: ClassId,
    pub predicted_label: ClassId,
}

impl Outcome {
    pub fn is_correct(&self) -> bool {
        self.true_label == self.predicted_label
    }
}

pub fn correct_count(outcomes: &[Outcome]) -> usize {
    outcomes.iter().filter(|o| o.is_correct()).count()
}

/// Fraction of misclassified outcomes.
pub fn error_rate(outcomes: &[Outcome]) -> Result<f64, MetricsError> {
    if outcomes.is_empty() {
        return Err(MetricsError::Empty);
    }
    let wrong = outcomes.len() - correct_count(outcomes);
    Ok(wrong as f64 / outcomes.len() as f64)
}

/// `(p0 - p_ref) / (1 - p_ref)` from counts, which keeps ratios like 3/4 exact.
pub fn kappa_from_counts(n: usize, correct: usize, reference_correct: usize, reference: &'static str) -> Result<f64, MetricsError> {
    if n == 0 {
        return Err(MetricsError::Empty);
    }
    if reference_correct >= n {
        return Err(MetricsError::UndefinedKappa { reference });
    }
    Ok((correct as f64 - reference_correct as f64) / (n - reference_correct) as f64)
}

/// Kappa against the majority-class reference. `baseline_correct` is how many of
/// the same instances the prequential majority classifier got right.
pub fn kappa_m(outcomes: &[Outcome], baseline_correct: usize) -> Result<f64, MetricsError> {
    kappa_from_counts(outcomes.len(), correct_count(outcomes), baseline_correct, "majority-class")
}

/// Kappa against the no-change (previous label) reference.
pub fn kappa_t(outcomes: &[Outcome], nochange_correct: usize) -> Result<f64, MetricsError> {
    kappa_from_counts(outcomes.len(), correct_count(outcomes), nochange_correct, "no-change")
}

/// Prequential majority-class reference: predicts the most frequent label seen
/// strictly before the current step, ties to the smallest id, class 0 when cold.
#[derive(Debug, Clone, Default)]
pub struct MajorityBaseline {
    counts: std::collections::BTreeMap<ClassId, u64>,
    best: Option<(ClassId, u64)>,
}

impl MajorityBaseline {
    pub fn predict(&self) -> ClassId {
        self.best.map_or(ClassId(0), |(c, _)| c)
    }

    pub fn learn(&mut self, y: ClassId) {
        let n = self.counts.entry(y).or_insert(0);
        *n += 1;
        let n = *n;
        let replace = match self.best {
            None => true,
            Some((c, m)) => c == y || n > m || (n == m && y < c),
        };
        if replace {
            self.best = Some((y, n));
        }
    }
}

/// Predicts the previous true label; has no prediction for the first instance.
#[derive(Debug, Clone, Default)]
pub struct NoChangeBaseline {
    last: Option<ClassId>,
}

impl NoChangeBaseline {
    pub fn predict(&self) -> Option<ClassId> {
        self.last
    }

    pub fn learn(&mut self, y: ClassId) {
        self.last = Some(y);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn outcomes(pairs: &[(u32, u32)]) -> Vec<Outcome> {
        pairs
            .iter()
            .enumerate()
            .map(|(i, &(t, p))| Outcome { step: i as u64 + 1, true_label: ClassId(t), predicted_label: ClassId(p) })
            .collect()
    }

    #[test]
    fn error_rates() {
        assert_eq!(error_rate(&outcomes(&[(0, 0), (1, 1), (2, 2), (1, 1)])).unwrap(), 0.0);
        assert_eq!(error_rate(&outcomes(&[(0, 0), (1, 0), (2, 2), (1, 1)])).unwrap(), 0.25);
        assert!(matches!(error_rate(&[]), Err(MetricsError::Empty)));
    }

    #[test]
    fn kappa_arithmetic() {
        // p0 = 1, p_M = 0.6
        assert_eq!(kappa_from_counts(10, 10, 6, "m").unwrap(), 1.0);
        // parity
        assert_eq!(kappa_from_counts(10, 6, 6, "m").unwrap(), 0.0);
        // p0 = 0.9, p_M = 0.6
        assert_eq!(kappa_from_counts(10, 9, 6, "m").unwrap(), 0.75);
        // p0 = 0.8, p_T = 0.5
        assert_eq!(kappa_from_counts(10, 8, 5, "t").unwrap(), 0.6);
        // p0 = 1, p_T = 0.5
        assert_eq!(kappa_from_counts(4, 4, 2, "t").unwrap(), 1.0);
        // underperforming the reference goes negative
        assert!(kappa_from_counts(10, 3, 5, "t").unwrap() < 0.0);
        assert!(matches!(kappa_from_counts(10, 3, 10, "t"), Err(MetricsError::UndefinedKappa { .. })));
    }

    #[test]
    fn majority_baseline_ties_and_cold_start() {
        let mut m = MajorityBaseline::default();
        assert_eq!(m.predict(), ClassId(0));
        m.learn(ClassId(3));
        assert_eq!(m.predict(), ClassId(3));
        m.learn(ClassId(1));
        assert_eq!(m.predict(), ClassId(1));
        m.learn(ClassId(3));
        assert_eq!(m.predict(), ClassId(3));
        m.learn(ClassId(5));
        m.learn(ClassId(5));
        assert_eq!(m.predict(), ClassId(3));
        m.learn(ClassId(5));
        assert_eq!(m.predict(), ClassId(5));
    }

    proptest! {
        #[test]
        fn error_rate_matches_recount(pairs in prop::collection::vec((0u32..4, 0u32..4), 1..300)) {
            let o = outcomes(&pairs);
            let wrong = pairs.iter().filter(|(a, b)| a != b).count();
            prop_assert_eq!(error_rate(&o).unwrap(), wrong as f64 / pairs.len() as f64);
        }

        // The majority prediction at each step equals a fresh recount of the prefix.
        #[test]
        fn majority_baseline_matches_prefix_recount(labels in prop::collection::vec(0u32..5, 0..200)) {
            let mut m = MajorityBaseline::default();
            for (t, &y) in labels.iter().enumerate() {
                let mut counts = [0u32; 5];
                for &p in &labels[..t] {
                    counts[p as usize] += 1;
                }
                let max = counts.iter().copied().max().unwrap();
                let expected = if t == 0 { 0 } else { counts.iter().position(|&c| c == max).unwrap() as u32 };
                prop_assert_eq!(m.predict(), ClassId(expected));
                m.learn(ClassId(y));
            }
        }
    }
}
