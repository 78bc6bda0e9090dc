use std::fmt;
use std::str::FromStr;

use super::run::SummaryRow;
use super::sweep::SweepTable;
use super::BenchError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReportFormat {
    Csv,
    Markdown,
    #[default]
    Plain,
}

impl ReportFormat {
    pub fn extension(self) -> &'static str {
        match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "md",
            ReportFormat::Plain => "txt",
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Markdown => "markdown",
            ReportFormat::Plain => "plain",
        })
    }
}

impl FromStr for ReportFormat {
    type Err = BenchError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "csv" => Ok(ReportFormat::Csv),
            "markdown" | "md" => Ok(ReportFormat::Markdown),
            "plain" | "text" | "txt" => Ok(ReportFormat::Plain),
            other => Err(BenchError::Usage(format!("unknown report format {other:?} (expected csv, markdown or plain)"))),
        }
    }
}

/// Error fraction as a percentage with two decimals: `0.12875` -> `"12.88"`.
pub fn format_error_percent(error: f64) -> String {
    if error.is_nan() {
        return "n/a".into();
    }
    format!("{:.2}", error * 100.0)
}

/// RAM-hours in short scientific notation: `0.0000123` -> `"1.2e-5"`.
pub fn format_ram_hours(ram_hours: Option<f64>) -> String {
    match ram_hours {
        Some(v) if v.is_finite() => format!("{v:.1e}"),
        _ => "n/a".into(),
    }
}

fn format_kappa(k: f64) -> String {
    if k.is_nan() {
        "n/a".into()
    } else {
        format!("{k:.2}")
    }
}

const HEADER: [&str; 7] = ["dataset", "error_pct", "kappa_m", "kappa_t", "time_s", "ram_hours", "buckets"];

fn cells(row: &SummaryRow) -> [String; 7] {
    [
        row.label.clone(),
        format_error_percent(row.error),
        format_kappa(row.kappa_m),
        format_kappa(row.kappa_t),
        format!("{:.3}", row.wall_time_secs),
        format_ram_hours(row.ram_hours),
        format!("{:.0}", row.buckets),
    ]
}

/// Renders summary rows as a results table for humans. Use
/// [`super::summary_csv`] when the values need to be reloaded exactly.
pub fn emit_report(rows: &[SummaryRow], format: ReportFormat) -> String {
    let body: Vec<[String; 7]> = rows.iter().map(cells).collect();
    let header = HEADER.map(String::from);
    let mut out = String::new();
    match format {
        ReportFormat::Csv => {
            for line in std::iter::once(&header).chain(&body) {
                let quoted: Vec<String> = line
                    .iter()
                    .map(|c| if c.contains([',', '"']) { format!("\"{}\"", c.replace('"', "\"\"")) } else { c.clone() })
                    .collect();
                out.push_str(&quoted.join(","));
                out.push('\n');
            }
        }
        ReportFormat::Markdown => {
            let line = |c: &[String; 7]| format!("| {} |\n", c.iter().map(|s| s.replace('|', "\\|")).collect::<Vec<_>>().join(" | "));
            out.push_str(&line(&header));
            out.push_str(&format!("|{}\n", "---|".repeat(HEADER.len())));
            for row in &body {
                out.push_str(&line(row));
            }
        }
        ReportFormat::Plain => {
            let mut widths = [0usize; 7];
            for row in std::iter::once(&header).chain(&body) {
                for (w, c) in widths.iter_mut().zip(row) {
                    *w = (*w).max(c.chars().count());
                }
            }
            for row in std::iter::once(&header).chain(&body) {
                let padded: Vec<String> = row
                    .iter()
                    .zip(widths)
                    .enumerate()
                    .map(|(i, (c, w))| if i == 0 { format!("{c:<w$}") } else { format!("{c:>w$}") })
                    .collect();
                out.push_str(padded.join("  ").trim_end());
                out.push('\n');
            }
        }
    }
    out
}

impl SweepTable {
    /// One row per swept value, labelled `param=value`, for [`emit_report`].
    pub fn summary_rows(&self, bin_width: f64) -> Vec<SummaryRow> {
        self.rows
            .iter()
            .map(|r| SummaryRow {
                label: format!("{}={}", self.param, r.value),
                bin_width,
                runs: 0,
                error: r.error,
                kappa_m: r.kappa_m,
                kappa_t: r.kappa_t,
                wall_time_secs: r.wall_time_secs,
                ram_hours: r.ram_hours,
                buckets: r.buckets,
            })
            .collect()
    }
}
