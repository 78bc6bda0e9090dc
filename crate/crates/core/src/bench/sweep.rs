use std::fmt;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::run::{build_pool, run_one, run_options, summarize, RunRecord};
use super::{write_file, BenchError, ExperimentConfig};
use crate::enhash::EnhashConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParam {
    #[serde(rename = "L")]
    NumEstimators,
    BinWidth,
    Lambda,
}

impl SweepParam {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepParam::NumEstimators => "L",
            SweepParam::BinWidth => "bin_width",
            SweepParam::Lambda => "lambda",
        }
    }

    fn apply(self, base: &EnhashConfig, value: f64) -> Result<EnhashConfig, BenchError> {
        let mut cfg = base.clone();
        match self {
            SweepParam::NumEstimators => {
                if !(value >= 1.0 && value.fract() == 0.0 && value <= u32::MAX as f64) {
                    return Err(BenchError::Usage(format!("L must be a positive integer, got {value}")));
                }
                cfg.num_estimators = value as usize;
            }
            SweepParam::BinWidth => cfg.bin_width = value,
            SweepParam::Lambda => cfg.decay_rate = value,
        }
        cfg.validate().map_err(|e| BenchError::Usage(format!("{}={value}: {e}", self.as_str())))?;
        Ok(cfg)
    }
}

impl fmt::Display for SweepParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepParam {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "L" | "l" | "num_estimators" => Ok(SweepParam::NumEstimators),
            "bin_width" | "bin-width" | "bw" => Ok(SweepParam::BinWidth),
            "lambda" | "decay_rate" => Ok(SweepParam::Lambda),
            other => Err(format!("unknown sweep parameter {other:?} (expected L, bin_width or lambda)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub error: f64,
    pub kappa_m: f64,
    pub kappa_t: f64,
    pub wall_time_secs: f64,
    pub ram_hours: Option<f64>,
    pub buckets: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub param: SweepParam,
    /// Sorted by `value`.
    pub rows: Vec<SweepRow>,
}

const COLUMNS: &str = "value,error,kappa_m,kappa_t,wall_time_secs,ram_hours,buckets";

impl SweepTable {
    /// First line names the parameter; values are written at full precision.
    pub fn to_csv(&self) -> String {
        let mut out = format!("# param={}\n{COLUMNS}\n", self.param);
        for r in &self.rows {
            let ram = r.ram_hours.map(|v| v.to_string()).unwrap_or_default();
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                r.value, r.error, r.kappa_m, r.kappa_t, r.wall_time_secs, ram, r.buckets
            );
        }
        out
    }

    pub fn from_csv(text: &str) -> Result<Self, BenchError> {
        let bad = |msg: String| BenchError::Config(format!("sweep table: {msg}"));
        let mut lines = text.lines();
        let param = lines
            .next()
            .and_then(|l| l.strip_prefix("# param="))
            .ok_or_else(|| bad("missing '# param=' line".into()))?
            .parse::<SweepParam>()
            .map_err(bad)?;
        if lines.next() != Some(COLUMNS) {
            return Err(bad("unexpected column header".into()));
        }
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let cells: Vec<&str> = line.split(',').collect();
            if cells.len() != 7 {
                return Err(bad(format!("expected 7 fields in {line:?}")));
            }
            let f = |i: usize| cells[i].parse::<f64>().map_err(|e| bad(format!("{line:?}: {e}")));
            rows.push(SweepRow {
                value: f(0)?,
                error: f(1)?,
                kappa_m: f(2)?,
                kappa_t: f(3)?,
                wall_time_secs: f(4)?,
                ram_hours: if cells[5].is_empty() { None } else { Some(f(5)?) },
                buckets: f(6)?,
            });
        }
        Ok(Self { param, rows })
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    param: SweepParam,
    values: &'a [f64],
    completed: Vec<f64>,
}

/// Runs the experiment once per value of `param`, aggregating over seeds.
///
/// With `output` set, `sweep.csv` and `sweep_manifest.toml` are rewritten
/// after every completed value, so an interrupted sweep keeps its rows. When
/// `resume` is true, values already present in an existing `sweep.csv` for
/// the same parameter are not rerun.
pub fn sweep(config: &ExperimentConfig, param: SweepParam, values: &[f64], resume: bool) -> crate::Result<SweepTable> {
    if values.is_empty() {
        return Err(BenchError::Usage(format!("no values given for sweep over {param}")).into());
    }
    let mut values = values.to_vec();
    values.sort_by(f64::total_cmp);
    if values.windows(2).any(|w| w[0] == w[1]) {
        return Err(BenchError::Usage(format!("duplicate values in sweep over {param}")).into());
    }
    let configs = values.iter().map(|&v| param.apply(&config.learner, v)).collect::<Result<Vec<_>, _>>()?;
    config.validate()?;

    let mut table = SweepTable { param, rows: Vec::new() };
    if let (true, Some(dir)) = (resume, &config.output) {
        let path = dir.join("sweep.csv");
        if path.exists() {
            let text = std::fs::read_to_string(&path).map_err(|source| BenchError::Io { path: path.clone(), source })?;
            let previous = SweepTable::from_csv(&text)?;
            if previous.param != param {
                return Err(BenchError::Usage(format!(
                    "cannot resume: {} sweeps {}, not {param}",
                    path.display(),
                    previous.param
                ))
                .into());
            }
            table.rows = previous.rows.into_iter().filter(|r| values.contains(&r.value)).collect();
        }
    }

    let (descriptor, stream) = config.source.as_ref().expect("validated").load()?;
    let seeds = config.seeds()?;
    let options = run_options(config);
    let pool = build_pool(config.jobs)?;

    for (&value, learner) in values.iter().zip(configs) {
        if table.rows.iter().any(|r| r.value == value) {
            continue;
        }
        let results: Vec<crate::Result<RunRecord>> = pool.install(|| {
            seeds
                .par_iter()
                .map(|&seed| {
                    let learner = EnhashConfig { seed, ..learner.clone() };
                    let bin_width = learner.bin_width;
                    run_one(&descriptor, &stream, learner, &options)
                        .map(|(report, footprint)| RunRecord { bin_width, seed, report, footprint })
                })
                .collect()
        });
        let runs = match results.into_iter().collect::<crate::Result<Vec<_>>>() {
            Ok(runs) => runs,
            Err(e) => {
                return Err(BenchError::SweepAborted {
                    param,
                    value,
                    completed: table.rows.len(),
                    source: Box::new(e),
                }
                .into())
            }
        };
        let s = summarize(String::new(), learner.bin_width, runs.iter());
        table.rows.push(SweepRow {
            value,
            error: s.error,
            kappa_m: s.kappa_m,
            kappa_t: s.kappa_t,
            wall_time_secs: s.wall_time_secs,
            ram_hours: s.ram_hours,
            buckets: s.buckets,
        });
        table.rows.sort_by(|a, b| a.value.total_cmp(&b.value));
        if let Some(dir) = &config.output {
            checkpoint(dir, &table, &values)?;
        }
    }
    Ok(table)
}

fn checkpoint(dir: &Path, table: &SweepTable, values: &[f64]) -> Result<(), BenchError> {
    write_file(&dir.join("sweep.csv"), &table.to_csv())?;
    let manifest = Manifest { param: table.param, values, completed: table.rows.iter().map(|r| r.value).collect() };
    write_file(&dir.join("sweep_manifest.toml"), &toml::to_string(&manifest).expect("manifest serialises"))
}
