use std::fmt::Write as _;
use std::path::Path;
use std::time::Duration;

use rayon::prelude::*;

use super::{mean, median, write_file, BenchError, ExperimentConfig};
use crate::enhash::{EnhashConfig, EnhashModel, Footprint};
use crate::metrics::{prequential_run, MeterOptions, RunMetrics, RunOptions, RunReport};
use crate::stream::{LabeledInstance, StreamDescriptor};

#[derive(Debug, Clone)]
pub struct RunRecord {
    pub bin_width: f64,
    pub seed: u64,
    pub report: RunReport,
    pub footprint: Footprint,
}

/// Aggregate over the seeds of one configuration: medians for error and the
/// kappas, means for the resource figures.
#[derive(Debug, Clone, PartialEq)]
pub struct SummaryRow {
    pub label: String,
    pub bin_width: f64,
    pub runs: usize,
    pub error: f64,
    pub kappa_m: f64,
    pub kappa_t: f64,
    pub wall_time_secs: f64,
    pub ram_hours: Option<f64>,
    pub buckets: f64,
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub runs: Vec<RunRecord>,
    /// One row per bin width, plus a trailing best-of row when several were run.
    pub summary: Vec<SummaryRow>,
}

impl ExperimentResult {
    pub fn best(&self) -> Option<&SummaryRow> {
        self.summary.last()
    }
}

pub(crate) fn build_pool(jobs: usize) -> Result<rayon::ThreadPool, BenchError> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| BenchError::Config(format!("cannot start {jobs} worker threads: {e}")))
}

pub(crate) fn run_options(config: &ExperimentConfig) -> RunOptions {
    RunOptions {
        window: config.window,
        meter: config
            .meter
            .then(|| MeterOptions { period: Duration::from_millis(config.meter_period_ms), sample_memory: true }),
    }
}

pub(crate) fn run_one(
    descriptor: &StreamDescriptor,
    stream: &[LabeledInstance],
    learner: EnhashConfig,
    options: &RunOptions,
) -> crate::Result<(RunReport, Footprint)> {
    let mut model = EnhashModel::new(descriptor, learner)?;
    let report = prequential_run(&mut model, stream, options)?;
    Ok((report, model.footprint()))
}

/// Runs every (bin width, seed) pair on the configured stream. The stream is
/// loaded once and shared; seeds only change the learner's projections.
///
/// With `output` set, writes `summary.csv`, one `run_bw{w}_seed{s}.txt`
/// record per run and, when a window is configured, matching `trace_*.csv`.
pub fn run(config: &ExperimentConfig) -> crate::Result<ExperimentResult> {
    config.validate()?;
    let source = config.source.as_ref().expect("validated");
    let (descriptor, stream) = source.load()?;
    let seeds = config.seeds()?;
    let widths = config.bin_widths();
    let options = run_options(config);

    let jobs: Vec<(f64, u64)> = widths.iter().flat_map(|&bw| seeds.iter().map(move |&s| (bw, s))).collect();
    let pool = build_pool(config.jobs)?;
    let results: Vec<Result<RunRecord, BenchError>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(bin_width, seed)| {
                let learner = EnhashConfig { bin_width, seed, ..config.learner.clone() };
                run_one(&descriptor, &stream, learner, &options)
                    .map(|(report, footprint)| RunRecord { bin_width, seed, report, footprint })
                    .map_err(|e| BenchError::Run { bin_width, seed, source: Box::new(e) })
            })
            .collect()
    });
    let runs = results.into_iter().collect::<Result<Vec<_>, _>>()?;

    let name = config.display_name();
    let mut summary: Vec<SummaryRow> = widths
        .iter()
        .map(|&bw| {
            let label = if widths.len() > 1 { format!("{name} (bin_width={bw})") } else { name.clone() };
            summarize(label, bw, runs.iter().filter(|r| r.bin_width == bw))
        })
        .collect();
    if summary.len() > 1 {
        let best = summary
            .iter()
            .min_by(|a, b| a.error.total_cmp(&b.error))
            .cloned()
            .expect("at least two rows");
        summary.push(SummaryRow { label: format!("{name} best-of (bin_width={})", best.bin_width), ..best });
    }

    let result = ExperimentResult { runs, summary };
    if let Some(dir) = &config.output {
        write_outputs(dir, config, &result)?;
    }
    Ok(result)
}

pub(crate) fn summarize<'a>(label: String, bin_width: f64, runs: impl Iterator<Item = &'a RunRecord> + Clone) -> SummaryRow {
    let metrics = runs.clone().map(|r| &r.report.metrics);
    let ram: Vec<f64> = metrics.clone().filter_map(|m| m.ram_hours).collect();
    SummaryRow {
        label,
        bin_width,
        runs: metrics.clone().count(),
        error: median(metrics.clone().map(|m| m.error)),
        kappa_m: median(metrics.clone().map(|m| m.kappa_m)),
        kappa_t: median(metrics.clone().map(|m| m.kappa_t)),
        wall_time_secs: mean(metrics.clone().map(|m| m.wall_time_secs)),
        ram_hours: (!ram.is_empty() && ram.len() == metrics.count()).then(|| mean(ram)),
        buckets: mean(runs.map(|r| r.footprint.total_buckets as f64)),
    }
}

fn write_outputs(dir: &Path, config: &ExperimentConfig, result: &ExperimentResult) -> crate::Result<()> {
    let mut csv = format!("bin_width,seed,buckets,{}\n", RunMetrics::csv_header());
    for r in &result.runs {
        let _ = writeln!(csv, "{},{},{},{}", r.bin_width, r.seed, r.footprint.total_buckets, r.report.metrics.to_csv_row());
        let stem = format!("bw{}_seed{}", r.bin_width, r.seed);
        let mut record = r.report.metrics.to_record();
        for d in &r.report.diagnostics {
            let _ = writeln!(record, "# {d}");
        }
        write_file(&dir.join(format!("run_{stem}.txt")), &record)?;
        if let Some(trace) = r.report.trace_csv() {
            write_file(&dir.join(format!("trace_{stem}.csv")), &trace)?;
        }
    }
    write_file(&dir.join("runs.csv"), &csv)?;
    write_file(&dir.join("summary.csv"), &summary_csv(&result.summary))?;
    write_file(&dir.join("experiment.toml"), &config.to_toml())?;
    Ok(())
}

/// Full-precision summary rows, suitable for reloading.
pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut out = String::from("label,bin_width,runs,error,kappa_m,kappa_t,wall_time_secs,ram_hours,buckets\n");
    for r in rows {
        let ram = r.ram_hours.map(|v| v.to_string()).unwrap_or_default();
        let _ = writeln!(
            out,
            "\"{}\",{},{},{},{},{},{},{},{}",
            r.label.replace('"', "\"\""),
            r.bin_width,
            r.runs,
            r.error,
            r.kappa_m,
            r.kappa_t,
            r.wall_time_secs,
            ram,
            r.buckets
        );
    }
    out
}
