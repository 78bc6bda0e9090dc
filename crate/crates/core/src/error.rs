use crate::{bench::BenchError, enhash::EnhashError, generators::GeneratorError, metrics::MetricsError, stream::StreamError};

/// Top-level error wrapping the per-module failures.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Stream(#[from] StreamError),
    #[error(transparent)]
    Enhash(#[from] EnhashError),
    #[error(transparent)]
    Generator(#[from] GeneratorError),
    #[error(transparent)]
    Metrics(#[from] MetricsError),
    #[error(transparent)]
    Bench(#[from] BenchError),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
