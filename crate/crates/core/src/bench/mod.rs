//! Experiment orchestration: repeated runs over seeds, parameter sweeps and
//! table rendering.

mod run;
mod sweep;
mod table;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

pub use run::{run, summary_csv, ExperimentResult, RunRecord, SummaryRow};
pub use sweep::{sweep, SweepParam, SweepRow, SweepTable};
pub use table::{emit_report, format_error_percent, format_ram_hours, ReportFormat};

use crate::enhash::EnhashConfig;
use crate::generators::{generate, GeneratorSpec};
use crate::stream::{load_csv_stream, LabelColumn, LabeledInstance, StreamDescriptor};

/// Environment variable that overrides the default seed list.
pub const SEED_ENV: &str = "DRIFTSTREAM_SEED";

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid experiment config: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("run with bin_width={bin_width}, seed={seed} failed: {source}")]
    Run {
        bin_width: f64,
        seed: u64,
        #[source]
        source: Box<crate::Error>,
    },
    #[error("sweep aborted at {param}={value} after {completed} completed points (partial results kept): {source}")]
    SweepAborted {
        param: SweepParam,
        value: f64,
        completed: usize,
        #[source]
        source: Box<crate::Error>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum StreamSource {
    Csv {
        path: PathBuf,
        #[serde(default)]
        label_column: LabelColumn,
        #[serde(default)]
        has_header: bool,
    },
    Generator {
        spec: GeneratorSpec,
    },
}

impl StreamSource {
    pub fn load(&self) -> crate::Result<(StreamDescriptor, Vec<LabeledInstance>)> {
        match self {
            StreamSource::Csv { path, label_column, has_header } => {
                let loaded = load_csv_stream(path, *label_column, *has_header)?;
                Ok((loaded.descriptor, loaded.instances))
            }
            StreamSource::Generator { spec } => Ok(generate(spec)?),
        }
    }

    /// Short name for tables: the file stem or the generator kind.
    pub fn label(&self) -> String {
        match self {
            StreamSource::Csv { path, .. } => {
                path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_else(|| "csv".into())
            }
            StreamSource::Generator { spec } => spec.kind.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Row label in reports; defaults to the source label.
    pub name: Option<String>,
    pub source: Option<StreamSource>,
    pub learner: EnhashConfig,
    /// Bin widths to run side by side. Empty means just `learner.bin_width`.
    pub bin_widths: Vec<f64>,
    /// One run per seed; each seed drives the learner's projections.
    pub seeds: Vec<u64>,
    pub output: Option<PathBuf>,
    pub window: Option<usize>,
    pub jobs: usize,
    pub meter: bool,
    pub meter_period_ms: u64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            name: None,
            source: None,
            learner: EnhashConfig::default(),
            bin_widths: Vec::new(),
            seeds: Vec::new(),
            output: None,
            window: None,
            jobs: 1,
            meter: true,
            meter_period_ms: 100,
        }
    }
}

/// Seeds used when none are configured: `DRIFTSTREAM_SEED` if set, else 0.
pub fn default_seeds() -> Result<Vec<u64>, BenchError> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(|s| vec![s])
            .map_err(|_| BenchError::Config(format!("{SEED_ENV}={v:?} is not an unsigned integer"))),
        Err(_) => Ok(vec![0]),
    }
}

impl ExperimentConfig {
    pub fn from_toml(text: &str) -> Result<Self, BenchError> {
        toml::from_str(text).map_err(|e| BenchError::Config(e.to_string()))
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self, BenchError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("experiment config always serialises")
    }

    pub fn display_name(&self) -> String {
        self.name.clone().or_else(|| self.source.as_ref().map(StreamSource::label)).unwrap_or_else(|| "stream".into())
    }

    pub fn bin_widths(&self) -> Vec<f64> {
        if self.bin_widths.is_empty() {
            vec![self.learner.bin_width]
        } else {
            self.bin_widths.clone()
        }
    }

    pub fn seeds(&self) -> Result<Vec<u64>, BenchError> {
        if self.seeds.is_empty() {
            default_seeds()
        } else {
            Ok(self.seeds.clone())
        }
    }

    pub fn validate(&self) -> Result<(), BenchError> {
        if self.source.is_none() {
            return Err(BenchError::Config("no stream source (csv path or generator)".into()));
        }
        for bw in self.bin_widths() {
            let cfg = EnhashConfig { bin_width: bw, ..self.learner.clone() };
            cfg.validate().map_err(|e| BenchError::Config(e.to_string()))?;
        }
        if self.jobs == 0 {
            return Err(BenchError::Config("jobs must be at least 1".into()));
        }
        if self.window == Some(0) {
            return Err(BenchError::Config("window must be at least 1".into()));
        }
        if self.meter && self.meter_period_ms == 0 {
            return Err(BenchError::Config("meter_period_ms must be at least 1".into()));
        }
        let seeds = self.seeds()?;
        let mut sorted = seeds.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != seeds.len() {
            return Err(BenchError::Config("seeds must be distinct".into()));
        }
        Ok(())
    }
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), BenchError> {
    if let Some(dir) = path.parent() {
        std::fs::create_dir_all(dir).map_err(|source| BenchError::Io { path: dir.to_path_buf(), source })?;
    }
    std::fs::write(path, contents).map_err(|source| BenchError::Io { path: path.to_path_buf(), source })
}

/// Median, ignoring NaNs; `NaN` if nothing is left.
pub(crate) fn median(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut v: Vec<f64> = values.into_iter().filter(|x| !x.is_nan()).collect();
    if v.is_empty() {
        return f64::NAN;
    }
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        (v[mid - 1] + v[mid]) / 2.0
    }
}

pub(crate) fn mean(values: impl IntoIterator<Item = f64>) -> f64 {
    let (sum, n) = values.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    if n == 0 {
        f64::NAN
    } else {
        sum / n as f64
    }
}
