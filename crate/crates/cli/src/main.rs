use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use driftstream::bench::{
    emit_report, run, sweep, ExperimentConfig, ReportFormat, StreamSource, SweepParam,
};
use driftstream::generators::{generate, GeneratorKind, GeneratorSpec};
use driftstream::stream::{write_csv_stream, LabelColumn};
use driftstream::Variant;

/// Evaluate the Enhash streaming classifier on drifting data streams.
#[derive(Parser)]
#[command(name = "driftstream", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prequential evaluation over one or more seeds.
    Run {
        #[command(flatten)]
        experiment: ExperimentArgs,
    },
    /// Repeat the evaluation for each value of one learner parameter.
    Sweep {
        #[command(flatten)]
        experiment: ExperimentArgs,
        /// L, bin_width or lambda.
        #[arg(long)]
        param: SweepParam,
        /// Comma-separated values.
        #[arg(long, value_delimiter = ',', num_args = 1.., required = true)]
        values: Vec<f64>,
        /// Skip values already recorded in <out>/sweep.csv.
        #[arg(long)]
        resume: bool,
    },
    /// Write a synthetic stream to CSV.
    Generate {
        /// rotating_hyperplane, moving_squares, interchanging_rbf, transient_chessboard or mixed_drift.
        #[arg(long, required_unless_present = "spec")]
        generator: Option<GeneratorKind>,
        /// Read the full generator spec from a TOML file instead.
        #[arg(long, conflicts_with = "generator")]
        spec: Option<PathBuf>,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use the large stream sizes (200k samples, 600k for mixed_drift).
        #[arg(long, conflicts_with_all = ["samples", "spec"])]
        full_scale: bool,
        #[arg(long)]
        out: PathBuf,
        /// Write an `x1,...,label` header row.
        #[arg(long)]
        header: bool,
    },
}

#[derive(Args)]
struct ExperimentArgs {
    /// TOML experiment file; other flags override it.
    #[arg(long)]
    config: Option<PathBuf>,
    /// CSV stream (features then label, unless --label-column says otherwise).
    #[arg(long, conflicts_with = "generator")]
    stream: Option<PathBuf>,
    /// Zero-based label column of the CSV stream.
    #[arg(long, requires = "stream")]
    label_column: Option<usize>,
    /// The CSV stream has a header row.
    #[arg(long, requires = "stream")]
    header: bool,
    /// Synthetic stream kind.
    #[arg(long)]
    generator: Option<GeneratorKind>,
    /// Synthetic stream length.
    #[arg(long)]
    samples: Option<usize>,
    /// Synthetic stream seed (the learner seeds are --seeds).
    #[arg(long)]
    stream_seed: Option<u64>,
    /// Dataset label used in reports.
    #[arg(long)]
    name: Option<String>,
    /// Number of projection estimators.
    #[arg(long = "L", id = "num_estimators")]
    num_estimators: Option<usize>,
    /// Bin width; a comma-separated list runs each and adds a best-of row.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    bin_width: Vec<f64>,
    /// Decay rate.
    #[arg(long)]
    lambda: Option<f64>,
    /// full, lambda0 or no_weights.
    #[arg(long)]
    variant: Option<Variant>,
    /// Comma-separated learner seeds; defaults to $DRIFTSTREAM_SEED or 0.
    #[arg(long, value_delimiter = ',', num_args = 1..)]
    seeds: Vec<u64>,
    /// Window size for the windowed-error trace.
    #[arg(long)]
    window: Option<usize>,
    /// Directory for reports and traces.
    #[arg(long)]
    out: Option<PathBuf>,
    /// csv, markdown or plain.
    #[arg(long, default_value = "plain")]
    format: String,
    /// Worker threads. Keep at 1 when timings matter.
    #[arg(long)]
    jobs: Option<usize>,
    /// Skip memory sampling (wall time is still measured).
    #[arg(long)]
    no_meter: bool,
}

impl ExperimentArgs {
    fn into_config(self) -> Result<(ExperimentConfig, ReportFormat)> {
        let format: ReportFormat = self.format.parse()?;
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        if let Some(path) = self.stream {
            let label_column = self.label_column.map_or(LabelColumn::Last, LabelColumn::Index);
            cfg.source = Some(StreamSource::Csv { path, label_column, has_header: self.header });
        } else if let Some(kind) = self.generator {
            let spec = GeneratorSpec::analogue(kind, self.samples.unwrap_or(20_000), self.stream_seed.unwrap_or(0));
            cfg.source = Some(StreamSource::Generator { spec });
        } else if let Some(StreamSource::Generator { spec }) = &mut cfg.source {
            if let Some(n) = self.samples {
                spec.num_samples = n;
            }
            if let Some(s) = self.stream_seed {
                spec.seed = s;
            }
        } else if cfg.source.is_some() && (self.samples.is_some() || self.stream_seed.is_some()) {
            bail!("--samples and --stream-seed only apply to generated streams");
        }
        if cfg.source.is_none() {
            bail!("no stream given: use --stream <csv>, --generator <kind> or a --config file with a [source]");
        }
        if let Some(name) = self.name {
            cfg.name = Some(name);
        }
        if let Some(l) = self.num_estimators {
            cfg.learner.num_estimators = l;
        }
        match self.bin_width.as_slice() {
            [] => {}
            [bw] => {
                cfg.learner.bin_width = *bw;
                cfg.bin_widths.clear();
            }
            many => cfg.bin_widths = many.to_vec(),
        }
        if let Some(lambda) = self.lambda {
            cfg.learner.decay_rate = lambda;
        }
        if let Some(v) = self.variant {
            cfg.learner.variant = v;
        }
        if !self.seeds.is_empty() {
            cfg.seeds = self.seeds;
        }
        if let Some(w) = self.window {
            cfg.window = Some(w);
        }
        if let Some(out) = self.out {
            cfg.output = Some(out);
        }
        if let Some(jobs) = self.jobs {
            cfg.jobs = jobs;
        }
        if self.no_meter {
            cfg.meter = false;
        }
        Ok((cfg, format))
    }
}

fn write_table(cfg: &ExperimentConfig, format: ReportFormat, table: &str, stem: &str) -> Result<()> {
    print!("{table}");
    if let Some(dir) = &cfg.output {
        let path = dir.join(format!("{stem}.{}", format.extension()));
        std::fs::write(&path, table).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Run { experiment } => {
            let (cfg, format) = experiment.into_config()?;
            let result = run(&cfg)?;
            for r in &result.runs {
                for d in &r.report.diagnostics {
                    eprintln!("warning (seed {}, bin_width {}): {d}", r.seed, r.bin_width);
                }
            }
            write_table(&cfg, format, &emit_report(&result.summary, format), "table")?;
        }
        Command::Sweep { experiment, param, values, resume } => {
            let (cfg, format) = experiment.into_config()?;
            if resume && cfg.output.is_none() {
                bail!("--resume needs --out (the directory holding sweep.csv)");
            }
            let table = sweep(&cfg, param, &values, resume)?;
            let rows = table.summary_rows(cfg.learner.bin_width);
            write_table(&cfg, format, &emit_report(&rows, format), "sweep_table")?;
        }
        Command::Generate { generator, spec, samples, seed, full_scale, out, header } => {
            let spec = match (spec, generator) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))?;
                    GeneratorSpec::from_toml(&text)?
                }
                (None, Some(kind)) if full_scale => GeneratorSpec::full_scale(kind, seed),
                (None, Some(kind)) => GeneratorSpec::analogue(kind, samples, seed),
                (None, None) => unreachable!("clap requires one of --generator/--spec"),
            };
            let (descriptor, instances) = generate(&spec)?;
            write_csv_stream(&out, &instances, header)?;
            eprintln!(
                "wrote {} instances, {} features, {} classes to {}",
                instances.len(),
                descriptor.dimension,
                descriptor.known_classes.len(),
                out.display()
            );
        }
    }
    Ok(())
}
