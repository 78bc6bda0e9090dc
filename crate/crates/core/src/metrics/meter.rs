use std::sync::mpsc::{self, RecvTimeoutError, Sender};
use std::thread::JoinHandle;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use super::MetricsError;

pub const BYTES_PER_GB: f64 = (1u64 << 30) as f64;

/// Resident memory observed at some offset from the start of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MemorySample {
    pub elapsed_secs: f64,
    pub resident_gb: f64,
}

/// Time integral of resident memory (trapezoidal), in GB·hours.
pub fn ram_hours(samples: &[MemorySample]) -> Result<f64, MetricsError> {
    if let Some(i) = samples.windows(2).position(|w| !(w[1].elapsed_secs >= w[0].elapsed_secs)) {
        return Err(MetricsError::UnorderedSeries { index: i + 1 });
    }
    let gb_secs: f64 = samples
        .windows(2)
        .map(|w| (w[1].elapsed_secs - w[0].elapsed_secs) * (w[0].resident_gb + w[1].resident_gb) / 2.0)
        .sum();
    Ok(gb_secs / 3600.0)
}

/// Resident set size of this process, if the platform exposes it.
pub fn resident_bytes() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with("VmRSS:"))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeterOptions {
    pub period: Duration,
    pub sample_memory: bool,
}

impl Default for MeterOptions {
    fn default() -> Self {
        Self { period: Duration::from_millis(100), sample_memory: true }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeterReading {
    pub wall_time: Duration,
    /// `None` when memory sampling was off or unsupported.
    pub memory: Option<Vec<MemorySample>>,
}

impl MeterReading {
    pub fn ram_hours(&self) -> Option<f64> {
        self.memory.as_deref().and_then(|m| ram_hours(m).ok())
    }

    pub fn peak_resident_gb(&self) -> Option<f64> {
        self.memory.as_ref()?.iter().map(|s| s.resident_gb).reduce(f64::max)
    }
}

/// Wall clock plus a background resident-memory sampler.
///
/// The sampler thread only appends to its own series and never synchronises
/// with the measured work; the series is handed back on [`Meter::finish`].
pub struct Meter {
    start: Instant,
    sampler: Option<(Sender<()>, JoinHandle<Vec<MemorySample>>)>,
}

impl Meter {
    pub fn start(options: MeterOptions) -> Self {
        let start = Instant::now();
        let sampler = (options.sample_memory && resident_bytes().is_some()).then(|| {
            let (stop, stopped) = mpsc::channel::<()>();
            let period = options.period;
            let handle = std::thread::spawn(move || {
                let mut series = Vec::new();
                let record = |series: &mut Vec<MemorySample>| {
                    if let Some(bytes) = resident_bytes() {
                        series.push(MemorySample {
                            elapsed_secs: start.elapsed().as_secs_f64(),
                            resident_gb: bytes as f64 / BYTES_PER_GB,
                        });
                    }
                };
                record(&mut series);
                while let Err(RecvTimeoutError::Timeout) = stopped.recv_timeout(period) {
                    record(&mut series);
                }
                record(&mut series);
                series
            });
            (stop, handle)
        });
        Self { start, sampler }
    }

    pub fn finish(self) -> MeterReading {
        let wall_time = self.start.elapsed();
        let memory = self.sampler.and_then(|(stop, handle)| {
            let _ = stop.send(());
            handle.join().ok()
        });
        MeterReading { wall_time, memory }
    }
}
