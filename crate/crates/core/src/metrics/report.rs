use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::scores::Outcome;
use super::MetricsError;

/// Error over one window of the trace; `step` is the window's last step.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WindowPoint {
    pub step: u64,
    pub error: f64,
}

/// Scalar results of one prequential run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetrics {
    pub n: usize,
    pub correct: usize,
    pub majority_correct: usize,
    pub nochange_correct: usize,
    /// Fraction in `[0, 1]`.
    pub error: f64,
    /// `NaN` when the majority reference is perfect.
    pub kappa_m: f64,
    /// `NaN` when the no-change reference is perfect.
    pub kappa_t: f64,
    pub wall_time_secs: f64,
    pub ram_hours: Option<f64>,
    pub peak_resident_gb: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub metrics: RunMetrics,
    pub window_trace: Option<Vec<WindowPoint>>,
    pub outcomes: Vec<Outcome>,
    pub diagnostics: Vec<String>,
}

const CSV_FIELDS: [&str; 10] = [
    "n",
    "correct",
    "majority_correct",
    "nochange_correct",
    "error",
    "kappa_m",
    "kappa_t",
    "wall_time_secs",
    "ram_hours",
    "peak_resident_gb",
];

fn opt(v: Option<f64>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

impl RunMetrics {
    fn values(&self) -> [String; 10] {
        [
            self.n.to_string(),
            self.correct.to_string(),
            self.majority_correct.to_string(),
            self.nochange_correct.to_string(),
            self.error.to_string(),
            self.kappa_m.to_string(),
            self.kappa_t.to_string(),
            self.wall_time_secs.to_string(),
            opt(self.ram_hours),
            opt(self.peak_resident_gb),
        ]
    }

    pub fn csv_header() -> String {
        CSV_FIELDS.join(",")
    }

    /// Floats use their shortest exact representation, so rows reload bit-for-bit.
    pub fn to_csv_row(&self) -> String {
        self.values().join(",")
    }

    pub fn from_csv_row(row: &str) -> Result<Self, MetricsError> {
        let cells: Vec<&str> = row.trim_end().split(',').collect();
        if cells.len() != CSV_FIELDS.len() {
            return Err(MetricsError::Parse(format!("expected {} fields, found {}", CSV_FIELDS.len(), cells.len())));
        }
        Self::from_pairs(CSV_FIELDS.iter().copied().zip(cells))
    }

    /// One `key=value` line per field; unavailable values are written as `unavailable`.
    pub fn to_record(&self) -> String {
        let mut out = String::new();
        for (key, value) in CSV_FIELDS.iter().zip(self.values()) {
            let value = if value.is_empty() { "unavailable".to_owned() } else { value };
            let _ = writeln!(out, "{key}={value}");
        }
        out
    }

    pub fn from_record(text: &str) -> Result<Self, MetricsError> {
        let pairs = text
            .lines()
            .filter(|l| !l.trim().is_empty())
            .map(|l| l.split_once('=').ok_or_else(|| MetricsError::Parse(format!("not a key=value line: {l:?}"))))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_pairs(pairs.into_iter().map(|(k, v)| (k.trim(), if v == "unavailable" { "" } else { v })))
    }

    fn from_pairs<'a>(pairs: impl IntoIterator<Item = (&'a str, &'a str)>) -> Result<Self, MetricsError> {
        let mut m = RunMetrics {
            n: 0,
            correct: 0,
            majority_correct: 0,
            nochange_correct: 0,
            error: f64::NAN,
            kappa_m: f64::NAN,
            kappa_t: f64::NAN,
            wall_time_secs: f64::NAN,
            ram_hours: None,
            peak_resident_gb: None,
        };
        let mut seen = 0;
        for (key, value) in pairs {
            let value = value.trim();
            let int = || value.parse::<usize>().map_err(|e| MetricsError::Parse(format!("{key}: {e}")));
            let float = || value.parse::<f64>().map_err(|e| MetricsError::Parse(format!("{key}: {e}")));
            let maybe = || if value.is_empty() { Ok(None) } else { float().map(Some) };
            match key {
                "n" => m.n = int()?,
                "correct" => m.correct = int()?,
                "majority_correct" => m.majority_correct = int()?,
                "nochange_correct" => m.nochange_correct = int()?,
                "error" => m.error = float()?,
                "kappa_m" => m.kappa_m = float()?,
                "kappa_t" => m.kappa_t = float()?,
                "wall_time_secs" => m.wall_time_secs = float()?,
                "ram_hours" => m.ram_hours = maybe()?,
                "peak_resident_gb" => m.peak_resident_gb = maybe()?,
                other => return Err(MetricsError::Parse(format!("unknown field {other:?}"))),
            }
            seen += 1;
        }
        if seen != CSV_FIELDS.len() {
            return Err(MetricsError::Parse(format!("expected {} fields, found {seen}", CSV_FIELDS.len())));
        }
        Ok(m)
    }
}

impl RunReport {
    /// `step,windowed_error` CSV, or `None` when no trace was recorded.
    pub fn trace_csv(&self) -> Option<String> {
        let trace = self.window_trace.as_ref()?;
        let mut out = String::from("step,windowed_error\n");
        for p in trace {
            let _ = writeln!(out, "{},{}", p.step, p.error);
        }
        Some(out)
    }
}
