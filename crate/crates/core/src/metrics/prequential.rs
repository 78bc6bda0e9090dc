use super::meter::{Meter, MeterOptions};
use super::report::{RunMetrics, RunReport, WindowPoint};
use super::scores::{correct_count, kappa_from_counts, MajorityBaseline, NoChangeBaseline, Outcome};
use super::MetricsError;
use crate::enhash::EnhashModel;
use crate::stream::{ClassId, LabeledInstance};

/// Anything that can be evaluated interleaved test-then-train.
pub trait OnlineClassifier {
    /// Predicts `instance`, then trains on it. Returns the prediction.
    fn predict_then_train(&mut self, instance: &LabeledInstance) -> crate::Result<ClassId>;
}

impl OnlineClassifier for EnhashModel {
    fn predict_then_train(&mut self, instance: &LabeledInstance) -> crate::Result<ClassId> {
        Ok(self.process(instance)?.label)
    }
}

#[derive(Debug, Clone, Default)]
pub struct RunOptions {
    /// Non-overlapping window size for the error trace.
    pub window: Option<usize>,
    /// `None` measures wall time only.
    pub meter: Option<MeterOptions>,
}

/// Runs `classifier` over `stream` in prequential order and scores it against
/// the majority-class and no-change references.
pub fn prequential_run<C: OnlineClassifier + ?Sized>(
    classifier: &mut C,
    stream: &[LabeledInstance],
    options: &RunOptions,
) -> crate::Result<RunReport> {
    if stream.is_empty() {
        return Err(MetricsError::EmptyStream.into());
    }
    if options.window == Some(0) {
        return Err(MetricsError::ZeroWindow.into());
    }

    let meter = Meter::start(options.meter.unwrap_or(MeterOptions { sample_memory: false, ..Default::default() }));
    let mut majority = MajorityBaseline::default();
    let mut nochange = NoChangeBaseline::default();
    let (mut majority_correct, mut nochange_correct) = (0usize, 0usize);
    let mut outcomes = Vec::with_capacity(stream.len());

    for inst in stream {
        let predicted = classifier.predict_then_train(inst)?;
        majority_correct += usize::from(majority.predict() == inst.label);
        nochange_correct += usize::from(nochange.predict() == Some(inst.label));
        majority.learn(inst.label);
        nochange.learn(inst.label);
        outcomes.push(Outcome { step: inst.step, true_label: inst.label, predicted_label: predicted });
    }
    let reading = meter.finish();

    let n = outcomes.len();
    let correct = correct_count(&outcomes);
    let mut diagnostics = Vec::new();
    let mut kappa = |reference_correct, name| match kappa_from_counts(n, correct, reference_correct, name) {
        Ok(k) => k,
        Err(e) => {
            diagnostics.push(e.to_string());
            f64::NAN
        }
    };
    let kappa_m = kappa(majority_correct, "majority-class");
    let kappa_t = kappa(nochange_correct, "no-change");
    if options.meter.is_some_and(|m| m.sample_memory) && reading.memory.is_none() {
        diagnostics.push("memory sampling unavailable on this platform; ram_hours not reported".into());
    }

    let window_trace = options.window.map(|w| window_errors(&outcomes, w));
    Ok(RunReport {
        metrics: RunMetrics {
            n,
            correct,
            majority_correct,
            nochange_correct,
            error: (n - correct) as f64 / n as f64,
            kappa_m,
            kappa_t,
            wall_time_secs: reading.wall_time.as_secs_f64(),
            ram_hours: reading.ram_hours(),
            peak_resident_gb: reading.peak_resident_gb(),
        },
        window_trace,
        outcomes,
        diagnostics,
    })
}

/// Error per consecutive block of `window` outcomes; the last block may be short.
pub fn window_errors(outcomes: &[Outcome], window: usize) -> Vec<WindowPoint> {
    outcomes
        .chunks(window)
        .map(|chunk| WindowPoint {
            step: chunk.last().map_or(0, |o| o.step),
            error: (chunk.len() - correct_count(chunk)) as f64 / chunk.len() as f64,
        })
        .collect()
}
