//! Prequential evaluation, Kappa statistics and resource metering.

mod meter;
mod prequential;
mod report;
mod scores;

pub use meter::{ram_hours, resident_bytes, MemorySample, Meter, MeterOptions, MeterReading, BYTES_PER_GB};
pub use prequential::{prequential_run, window_errors, OnlineClassifier, RunOptions};
pub use report::{RunMetrics, RunReport, WindowPoint};
pub use scores::{
    correct_count, error_rate, kappa_from_counts, kappa_m, kappa_t, MajorityBaseline, NoChangeBaseline, Outcome,
};

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("no outcomes to score")]
    Empty,
    #[error("cannot evaluate an empty stream")]
    EmptyStream,
    #[error("trace window must be at least 1")]
    ZeroWindow,
    #[error("kappa undefined: the {reference} reference classifier is perfect")]
    UndefinedKappa { reference: &'static str },
    #[error("memory series is not time-ordered at sample {index}")]
    UnorderedSeries { index: usize },
    #[error("cannot parse run report: {0}")]
    Parse(String),
}
