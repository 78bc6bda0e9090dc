//! Deterministic synthetic streams with scheduled concept drift.
//!
//! Five families are provided, shaped after common drift benchmarks:
//!
//! | kind                   | d   | classes | drift       |
//! |------------------------|-----|---------|-------------|
//! | `rotating_hyperplane`  | ≥ 2 | 2       | abrupt      |
//! | `moving_squares`       | 2   | ≥ 2     | incremental |
//! | `interchanging_rbf`    | ≥ 1 | ≥ 2     | abrupt      |
//! | `transient_chessboard` | 2   | ≥ 2     | virtual     |
//! | `mixed_drift`          | 2   | ≥ 8     | all three   |
//!
//! Every generator exposes its ground-truth concept through
//! [`Generator::concept_label`], which is a pure function of position and step.
//!
//! Schedule semantics per kind (`DriftPoint { start_step, jump, rate }`):
//!
//! * hyperplane: the normal turns by `jump` radians at `start_step` and then
//!   rotates at `rate` radians per step until the next point;
//! * squares: the formation's phase jumps by `jump` and then turns at `rate`;
//! * RBF: each point swaps the classes of two blobs (picked from the seed);
//! * chessboard: each point starts the next phase. Phase `p < k²` samples only
//!   field `p` (row-major), later phases sample the whole board.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::stream::{ClassId, LabeledInstance, StreamDescriptor};

const BOARD_SIZE: usize = 4;
const SQUARE_ORBIT: f64 = 0.3;
const MIXED_OFFSETS: [f64; 3] = [0.0, 2.0, 4.0];
const MIXED_SQUARE_CLASSES: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GeneratorKind {
    RotatingHyperplane,
    MovingSquares,
    InterchangingRbf,
    TransientChessboard,
    MixedDrift,
}

impl GeneratorKind {
    pub const ALL: [GeneratorKind; 5] = [
        GeneratorKind::RotatingHyperplane,
        GeneratorKind::MovingSquares,
        GeneratorKind::InterchangingRbf,
        GeneratorKind::TransientChessboard,
        GeneratorKind::MixedDrift,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GeneratorKind::RotatingHyperplane => "rotating_hyperplane",
            GeneratorKind::MovingSquares => "moving_squares",
            GeneratorKind::InterchangingRbf => "interchanging_rbf",
            GeneratorKind::TransientChessboard => "transient_chessboard",
            GeneratorKind::MixedDrift => "mixed_drift",
        }
    }
}

impl fmt::Display for GeneratorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GeneratorKind {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('-', "_");
        GeneratorKind::ALL
            .into_iter()
            .find(|k| k.as_str() == norm || k.as_str().replace('_', "") == norm)
            .ok_or_else(|| GeneratorError::UnknownKind(s.to_owned()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriftPoint {
    pub start_step: u64,
    #[serde(default)]
    pub jump: f64,
    #[serde(default)]
    pub rate: f64,
}

impl DriftPoint {
    pub fn at(start_step: u64) -> Self {
        Self { start_step, jump: 0.0, rate: 0.0 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub num_samples: usize,
    pub dimension: usize,
    pub num_classes: usize,
    #[serde(default)]
    pub drift_schedule: Vec<DriftPoint>,
    #[serde(default)]
    pub seed: u64,
    /// Probability of replacing a label with a uniformly chosen other class.
    #[serde(default)]
    pub label_noise: f64,
    /// Standard deviation of the RBF blobs.
    #[serde(default = "default_spread")]
    pub spread: f64,
}

fn default_spread() -> f64 {
    0.03
}

#[derive(Debug, thiserror::Error)]
pub enum GeneratorError {
    #[error("unknown generator kind {0:?}")]
    UnknownKind(String),
    #[error("invalid {kind} spec: {reason}")]
    InvalidSpec { kind: GeneratorKind, reason: String },
    #[error("cannot parse generator spec: {0}")]
    Parse(String),
}

impl GeneratorSpec {
    /// Desk-scale analogue of a benchmark family with its default drift schedule.
    pub fn analogue(kind: GeneratorKind, num_samples: usize, seed: u64) -> Self {
        let (dimension, num_classes) = match kind {
            GeneratorKind::RotatingHyperplane => (10, 2),
            GeneratorKind::MovingSquares => (2, 4),
            GeneratorKind::InterchangingRbf => (2, 15),
            GeneratorKind::TransientChessboard => (2, 8),
            GeneratorKind::MixedDrift => (2, 15),
        };
        Self {
            kind,
            num_samples,
            dimension,
            num_classes,
            drift_schedule: default_schedule(kind, num_samples),
            seed,
            label_noise: 0.0,
            spread: default_spread(),
        }
    }

    /// Full benchmark-size shape of a family.
    pub fn full_scale(kind: GeneratorKind, seed: u64) -> Self {
        let n = match kind {
            GeneratorKind::MixedDrift => 600_000,
            _ => 200_000,
        };
        Self::analogue(kind, n, seed)
    }

    /// The 20-dimensional interchanging-RBF shape (201,000 × 20, 15 classes).
    pub fn inter_rbf_20d(seed: u64) -> Self {
        let mut spec = Self::analogue(GeneratorKind::InterchangingRbf, 201_000, seed);
        spec.dimension = 20;
        spec
    }

    pub fn validate(&self) -> Result<(), GeneratorError> {
        let fail = |reason: String| Err(GeneratorError::InvalidSpec { kind: self.kind, reason });
        if self.num_samples == 0 {
            return fail("num_samples must be at least 1".into());
        }
        if !(0.0..1.0).contains(&self.label_noise) {
            return fail(format!("label_noise must be in [0, 1), got {}", self.label_noise));
        }
        let (d, c) = (self.dimension, self.num_classes);
        match self.kind {
            GeneratorKind::RotatingHyperplane if d < 2 || c != 2 => {
                return fail(format!("needs dimension >= 2 and 2 classes, got {d} x {c}"))
            }
            GeneratorKind::MovingSquares | GeneratorKind::TransientChessboard if d != 2 || c < 2 => {
                return fail(format!("needs dimension 2 and at least 2 classes, got {d} x {c}"))
            }
            GeneratorKind::InterchangingRbf if d < 1 || c < 2 => {
                return fail(format!("needs dimension >= 1 and at least 2 classes, got {d} x {c}"))
            }
            GeneratorKind::MixedDrift if d != 2 || c < 8 => {
                return fail(format!("needs dimension 2 and at least 8 classes, got {d} x {c}"))
            }
            GeneratorKind::MixedDrift if !self.drift_schedule.is_empty() => {
                return fail("mixed_drift derives its schedules from its parts; drift_schedule must be empty".into())
            }
            _ => {}
        }
        if self.kind == GeneratorKind::InterchangingRbf && !(self.spread.is_finite() && self.spread >= 0.0) {
            return fail(format!("spread must be finite and >= 0, got {}", self.spread));
        }
        let mut prev = 0;
        for p in &self.drift_schedule {
            if p.start_step <= prev {
                return fail("drift_schedule start steps must be >= 1 and strictly increasing".into());
            }
            if !(p.jump.is_finite() && p.rate.is_finite()) {
                return fail(format!("non-finite drift parameters at step {}", p.start_step));
            }
            prev = p.start_step;
        }
        Ok(())
    }

    /// Renders the spec as a TOML record.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("generator spec always serialises")
    }

    pub fn from_toml(text: &str) -> Result<Self, GeneratorError> {
        let spec: Self = toml::from_str(text).map_err(|e| GeneratorError::Parse(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }
}

/// Default schedule for `kind` over `n` samples.
pub fn default_schedule(kind: GeneratorKind, n: usize) -> Vec<DriftPoint> {
    let n = n as u64;
    let evenly = |count: u64| -> Vec<u64> {
        (1..=count).map(|i| 1 + i * n / (count + 1)).filter(|&s| s > 1 && s <= n).collect()
    };
    match kind {
        GeneratorKind::RotatingHyperplane => evenly(4)
            .into_iter()
            .map(|s| DriftPoint { start_step: s, jump: PI / 4.0, rate: 0.0 })
            .collect(),
        GeneratorKind::MovingSquares => {
            vec![DriftPoint { start_step: 1, jump: 0.0, rate: 4.0 * PI / n.max(1) as f64 }]
        }
        GeneratorKind::InterchangingRbf => evenly(4).into_iter().map(DriftPoint::at).collect(),
        GeneratorKind::TransientChessboard => {
            let fields = (BOARD_SIZE * BOARD_SIZE) as u64;
            let phase = (n / 2 / fields).max(1);
            (1..=fields).map(|p| 1 + p * phase).filter(|&s| s <= n).map(DriftPoint::at).collect()
        }
        GeneratorKind::MixedDrift => Vec::new(),
    }
}

/// Generates the whole stream described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<(StreamDescriptor, Vec<LabeledInstance>), GeneratorError> {
    let generator = Generator::new(spec.clone())?;
    let descriptor = generator.descriptor();
    let instances = generator.collect();
    Ok((descriptor, instances))
}

/// Streaming generator; yields exactly `num_samples` instances.
#[derive(Debug, Clone)]
pub struct Generator {
    spec: GeneratorSpec,
    source: Source,
    noise_rng: ChaCha8Rng,
    next_step: u64,
}

#[derive(Debug, Clone)]
enum Source {
    Single { concept: Concept, rng: ChaCha8Rng },
    Mixed { parts: Vec<Generator>, class_offsets: [u32; 3] },
}

#[derive(Debug, Clone)]
enum Concept {
    Hyperplane { u: Vec<f64>, v: Vec<f64>, schedule: Vec<DriftPoint> },
    Squares { count: usize, side: f64, schedule: Vec<DriftPoint> },
    Rbf { centers: Vec<Vec<f64>>, spread: f64, assignments: Vec<(u64, Vec<ClassId>)> },
    Chessboard { classes: usize, phase_starts: Vec<u64> },
}

fn rng_stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

impl Generator {
    pub fn new(spec: GeneratorSpec) -> Result<Self, GeneratorError> {
        spec.validate()?;
        let source = if spec.kind == GeneratorKind::MixedDrift {
            let chess = (spec.num_classes - MIXED_SQUARE_CLASSES) / 2;
            let rbf = spec.num_classes - MIXED_SQUARE_CLASSES - chess;
            let part_len = spec.num_samples.div_ceil(3);
            let kinds = [
                (GeneratorKind::MovingSquares, MIXED_SQUARE_CLASSES),
                (GeneratorKind::TransientChessboard, chess),
                (GeneratorKind::InterchangingRbf, rbf),
            ];
            let parts = kinds
                .iter()
                .enumerate()
                .map(|(i, &(kind, classes))| {
                    let mut part = GeneratorSpec::analogue(kind, part_len, spec.seed.wrapping_add(i as u64 + 1));
                    part.num_classes = classes;
                    part.spread = spec.spread;
                    Generator::new(part)
                })
                .collect::<Result<Vec<_>, _>>()?;
            let class_offsets = [0, MIXED_SQUARE_CLASSES as u32, (MIXED_SQUARE_CLASSES + chess) as u32];
            Source::Mixed { parts, class_offsets }
        } else {
            Source::Single { concept: Concept::build(&spec), rng: rng_stream(spec.seed, 1) }
        };
        Ok(Self { noise_rng: rng_stream(spec.seed, 2), source, spec, next_step: 1 })
    }

    pub fn spec(&self) -> &GeneratorSpec {
        &self.spec
    }

    pub fn descriptor(&self) -> StreamDescriptor {
        StreamDescriptor {
            dimension: self.spec.dimension,
            known_classes: (0..self.spec.num_classes as u32).map(ClassId).collect(),
            length_hint: Some(self.spec.num_samples),
        }
    }

    /// Noise-free label of position `x` under the concept active at `step`.
    pub fn concept_label(&self, x: &[f64], step: u64) -> ClassId {
        match &self.source {
            Source::Single { concept, .. } => concept.label(x, step),
            Source::Mixed { parts, class_offsets } => {
                let part = mixed_region(x[0]);
                let mut local = x.to_vec();
                local[0] -= MIXED_OFFSETS[part];
                let local_step = mixed_local_step(part, step).max(1);
                ClassId(parts[part].concept_label(&local, local_step).0 + class_offsets[part])
            }
        }
    }

    fn draw(&mut self, step: u64) -> (Vec<f64>, ClassId) {
        match &mut self.source {
            Source::Single { concept, rng } => {
                let x = concept.sample(rng, step);
                let label = concept.label(&x, step);
                (x, label)
            }
            Source::Mixed { parts, class_offsets } => {
                let part = ((step - 1) % 3) as usize;
                let local_step = mixed_local_step(part, step);
                let (mut x, label) = parts[part].draw(local_step);
                x[0] += MIXED_OFFSETS[part];
                (x, ClassId(label.0 + class_offsets[part]))
            }
        }
    }
}

fn mixed_region(x0: f64) -> usize {
    if x0 < 1.5 {
        0
    } else if x0 < 3.5 {
        1
    } else {
        2
    }
}

/// Number of global steps `<= step` served by `part` in the round-robin interleave.
fn mixed_local_step(part: usize, step: u64) -> u64 {
    let part = part as u64;
    if step > part {
        (step - 1 - part) / 3 + 1
    } else {
        0
    }
}

impl Iterator for Generator {
    type Item = LabeledInstance;

    fn next(&mut self) -> Option<LabeledInstance> {
        let step = self.next_step;
        if step > self.spec.num_samples as u64 {
            return None;
        }
        self.next_step += 1;
        let (x, mut label) = self.draw(step);
        let flip: f64 = self.noise_rng.random();
        if flip < self.spec.label_noise {
            let other = self.noise_rng.random_range(0..self.spec.num_classes as u32 - 1);
            label = ClassId(if other >= label.0 { other + 1 } else { other });
        }
        Some(LabeledInstance::new(x, label, step))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.spec.num_samples as u64 + 1).saturating_sub(self.next_step) as usize;
        (left, Some(left))
    }
}

/// Angle accumulated by a schedule of jumps and piecewise-constant rates.
fn schedule_angle(schedule: &[DriftPoint], step: u64) -> f64 {
    let mut angle = 0.0;
    for (k, p) in schedule.iter().enumerate() {
        if p.start_step > step {
            break;
        }
        let end = schedule.get(k + 1).map_or(step, |next| next.start_step.min(step));
        angle += p.jump + p.rate * (end - p.start_step) as f64;
    }
    angle
}

fn nearest(centers: impl Iterator<Item = Vec<f64>>, x: &[f64]) -> usize {
    let mut best = (0, f64::INFINITY);
    for (k, c) in centers.enumerate() {
        let d: f64 = c.iter().zip(x).map(|(a, b)| (a - b) * (a - b)).sum();
        if d < best.1 {
            best = (k, d);
        }
    }
    best.0
}

/// Odd vertical class stride so that horizontally and vertically adjacent fields differ.
fn board_stride(classes: usize) -> usize {
    (3..).step_by(2).find(|s| s % classes != 0).unwrap_or(3)
}

impl Concept {
    fn build(spec: &GeneratorSpec) -> Self {
        let mut rng = rng_stream(spec.seed, 0);
        let d = spec.dimension;
        let schedule = spec.drift_schedule.clone();
        match spec.kind {
            GeneratorKind::RotatingHyperplane => {
                let gauss = |rng: &mut ChaCha8Rng| -> Vec<f64> { (0..d).map(|_| rng.sample(StandardNormal)).collect() };
                let normalize = |v: &mut Vec<f64>| {
                    let n = v.iter().map(|a| a * a).sum::<f64>().sqrt();
                    v.iter_mut().for_each(|a| *a /= n);
                };
                let mut u = gauss(&mut rng);
                normalize(&mut u);
                let mut v = gauss(&mut rng);
                let proj: f64 = u.iter().zip(&v).map(|(a, b)| a * b).sum();
                v.iter_mut().zip(&u).for_each(|(b, a)| *b -= proj * a);
                normalize(&mut v);
                Concept::Hyperplane { u, v, schedule }
            }
            GeneratorKind::MovingSquares => {
                let k = spec.num_classes;
                let chord = 2.0 * SQUARE_ORBIT * (PI / k as f64).sin();
                let side = (0.9 * chord / 2f64.sqrt()).min(0.2);
                Concept::Squares { count: k, side, schedule }
            }
            GeneratorKind::InterchangingRbf => {
                let k = spec.num_classes;
                let min_sep = 0.5 / (k as f64).powf(1.0 / d as f64);
                let mut centers: Vec<Vec<f64>> = Vec::with_capacity(k);
                let mut attempts = 0;
                while centers.len() < k {
                    let c: Vec<f64> = (0..d).map(|_| rng.random_range(0.1..0.9)).collect();
                    attempts += 1;
                    let far = centers
                        .iter()
                        .all(|o| o.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt() >= min_sep);
                    if far || attempts > 10_000 {
                        centers.push(c);
                    }
                }
                let mut current: Vec<ClassId> = (0..k as u32).map(ClassId).collect();
                let mut assignments = vec![(1, current.clone())];
                for p in &schedule {
                    let a = rng.random_range(0..k);
                    let b = (a + rng.random_range(1..k)) % k;
                    current.swap(a, b);
                    assignments.push((p.start_step, current.clone()));
                }
                Concept::Rbf { centers, spread: spec.spread, assignments }
            }
            GeneratorKind::TransientChessboard => {
                let mut phase_starts = vec![1];
                phase_starts.extend(schedule.iter().map(|p| p.start_step));
                Concept::Chessboard { classes: spec.num_classes, phase_starts }
            }
            GeneratorKind::MixedDrift => unreachable!("mixed streams are composed from parts"),
        }
    }

    fn square_centers(count: usize, schedule: &[DriftPoint], step: u64) -> impl Iterator<Item = Vec<f64>> {
        let phase = schedule_angle(schedule, step);
        (0..count).map(move |k| {
            let a = phase + 2.0 * PI * k as f64 / count as f64;
            vec![0.5 + SQUARE_ORBIT * a.cos(), 0.5 + SQUARE_ORBIT * a.sin()]
        })
    }

    fn label(&self, x: &[f64], step: u64) -> ClassId {
        match self {
            Concept::Hyperplane { u, v, schedule } => {
                let (s, c) = schedule_angle(schedule, step).sin_cos();
                let side: f64 = u.iter().zip(v).zip(x).map(|((a, b), xi)| (c * a + s * b) * (xi - 0.5)).sum();
                ClassId(u32::from(side > 0.0))
            }
            Concept::Squares { count, schedule, .. } => {
                ClassId(nearest(Self::square_centers(*count, schedule, step), x) as u32)
            }
            Concept::Rbf { centers, assignments, .. } => {
                let k = nearest(centers.iter().cloned(), x);
                let idx = assignments.partition_point(|(s, _)| *s <= step).max(1) - 1;
                assignments[idx].1[k]
            }
            Concept::Chessboard { classes, .. } => {
                let cell = |v: f64| ((v * BOARD_SIZE as f64).floor().max(0.0) as usize).min(BOARD_SIZE - 1);
                let (i, j) = (cell(x[0]), cell(x[1]));
                ClassId(((i + board_stride(*classes) * j) % classes) as u32)
            }
        }
    }

    fn sample(&self, rng: &mut ChaCha8Rng, step: u64) -> Vec<f64> {
        match self {
            Concept::Hyperplane { u, .. } => (0..u.len()).map(|_| rng.random::<f64>()).collect(),
            Concept::Squares { count, side, schedule } => {
                let k = rng.random_range(0..*count);
                let center = Self::square_centers(*count, schedule, step).nth(k).expect("k < count");
                center.iter().map(|c| c + side * (rng.random::<f64>() - 0.5)).collect()
            }
            Concept::Rbf { centers, spread, .. } => {
                let k = rng.random_range(0..centers.len());
                centers[k]
                    .iter()
                    .map(|c| (c + spread * rng.sample::<f64, _>(StandardNormal)).clamp(0.0, 1.0))
                    .collect()
            }
            Concept::Chessboard { phase_starts, .. } => {
                let phase = phase_starts.partition_point(|s| *s <= step).max(1) - 1;
                let fields = BOARD_SIZE * BOARD_SIZE;
                let (a, b): (f64, f64) = (rng.random(), rng.random());
                if phase < fields {
                    let (i, j) = (phase % BOARD_SIZE, phase / BOARD_SIZE);
                    let w = 1.0 / BOARD_SIZE as f64;
                    vec![(i as f64 + a) * w, (j as f64 + b) * w]
                } else {
                    vec![a, b]
                }
            }
        }
    }
}
