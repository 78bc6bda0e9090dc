//! Instances, stream descriptors and CSV ingestion.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

/// Dense class identifier.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ClassId(pub u32);

impl fmt::Display for ClassId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl From<u32> for ClassId {
    fn from(v: u32) -> Self {
        ClassId(v)
    }
}

/// One labelled sample of a stream. `step` starts at 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabeledInstance {
    pub features: Vec<f64>,
    pub label: ClassId,
    pub step: u64,
}

impl LabeledInstance {
    pub fn new(features: Vec<f64>, label: ClassId, step: u64) -> Self {
        Self { features, label, step }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StreamDescriptor {
    pub dimension: usize,
    /// May be empty: classes are allowed to appear mid-stream.
    pub known_classes: BTreeSet<ClassId>,
    pub length_hint: Option<usize>,
}

impl StreamDescriptor {
    pub fn new(dimension: usize) -> Result<Self, StreamError> {
        if dimension == 0 {
            return Err(StreamError::ZeroDimension);
        }
        Ok(Self { dimension, known_classes: BTreeSet::new(), length_hint: None })
    }

    /// Builds a descriptor that covers every class and the length of `instances`.
    pub fn describe(dimension: usize, instances: &[LabeledInstance]) -> Result<Self, StreamError> {
        let mut desc = Self::new(dimension)?;
        desc.known_classes = instances.iter().map(|i| i.label).collect();
        desc.length_hint = Some(instances.len());
        Ok(desc)
    }

    /// Checks the per-instance invariants: dimension, finiteness and step continuity.
    pub fn validate(&self, instances: &[LabeledInstance]) -> Result<(), StreamError> {
        let mut expected_step = instances.first().map(|i| i.step).unwrap_or(1);
        for inst in instances {
            if inst.features.len() != self.dimension {
                return Err(StreamError::DimensionMismatch {
                    step: inst.step,
                    expected: self.dimension,
                    found: inst.features.len(),
                });
            }
            if let Some(col) = inst.features.iter().position(|v| !v.is_finite()) {
                return Err(StreamError::NonFinite { step: inst.step, column: col + 1 });
            }
            if inst.step != expected_step {
                return Err(StreamError::StepGap { expected: expected_step, found: inst.step });
            }
            expected_step += 1;
        }
        Ok(())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum StreamError {
    #[error("stream dimension must be at least 1")]
    ZeroDimension,
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: row {row}: {source}")]
    Csv {
        path: PathBuf,
        row: usize,
        #[source]
        source: csv::Error,
    },
    #[error("{path}: no data rows")]
    NoDataRows { path: PathBuf },
    #[error("{path}: row {row}, column {column}: cannot parse {cell:?} as a finite real")]
    BadFeature { path: PathBuf, row: usize, column: usize, cell: String },
    #[error("{path}: row {row} has {found} columns, expected {expected}")]
    RaggedRow { path: PathBuf, row: usize, expected: usize, found: usize },
    #[error("{path}: row {row}, column {column}: empty label")]
    EmptyLabel { path: PathBuf, row: usize, column: usize },
    #[error("{path}: label column {column} out of range for {width} columns")]
    LabelColumnOutOfRange { path: PathBuf, column: usize, width: usize },
    #[error("{path}: need at least one feature column besides the label")]
    NoFeatureColumns { path: PathBuf },
    #[error("instance at step {step}: expected {expected} features, found {found}")]
    DimensionMismatch { step: u64, expected: usize, found: usize },
    #[error("instance at step {step}: feature {column} is not finite")]
    NonFinite { step: u64, column: usize },
    #[error("expected step {expected}, found {found}")]
    StepGap { expected: u64, found: u64 },
}

/// Which CSV column holds the class label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LabelColumn {
    #[default]
    Last,
    /// Zero-based column index.
    Index(usize),
}

impl LabelColumn {
    fn resolve(self, width: usize) -> Option<usize> {
        match self {
            LabelColumn::Last => width.checked_sub(1),
            LabelColumn::Index(i) if i < width => Some(i),
            LabelColumn::Index(_) => None,
        }
    }
}

/// How raw label cells were turned into [`ClassId`]s.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LabelEncoding {
    /// Every label cell was a non-negative integer and is used as-is.
    Numeric,
    /// Tokens in first-appearance order; `tokens[id]` is the token for class `id`.
    Tokens(Vec<String>),
}

#[derive(Debug, Clone)]
pub struct LoadedStream {
    pub descriptor: StreamDescriptor,
    pub instances: Vec<LabeledInstance>,
    pub labels: LabelEncoding,
}

/// Reads a comma-separated stream. Steps follow file order starting at 1.
pub fn load_csv_stream(
    path: impl AsRef<Path>,
    label_column: LabelColumn,
    has_header: bool,
) -> Result<LoadedStream, StreamError> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| StreamError::Io { path: path.to_path_buf(), source })?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(has_header)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(std::io::BufReader::new(file));

    let mut width = None;
    let mut label_idx = 0;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut raw_labels: Vec<String> = Vec::new();

    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|source| StreamError::Csv { path: path.to_path_buf(), row, source })?;
        // A completely blank line (e.g. trailing newline noise) carries no data.
        if record.len() == 1 && record[0].is_empty() {
            continue;
        }
        let expected = *width.get_or_insert_with(|| record.len());
        if rows.is_empty() {
            label_idx = label_column.resolve(expected).ok_or_else(|| StreamError::LabelColumnOutOfRange {
                path: path.to_path_buf(),
                column: match label_column {
                    LabelColumn::Index(c) => c,
                    LabelColumn::Last => 0,
                },
                width: expected,
            })?;
            if expected < 2 {
                return Err(StreamError::NoFeatureColumns { path: path.to_path_buf() });
            }
        }
        if record.len() != expected {
            return Err(StreamError::RaggedRow { path: path.to_path_buf(), row, expected, found: record.len() });
        }

        let mut features = Vec::with_capacity(expected - 1);
        for (col, cell) in record.iter().enumerate() {
            if col == label_idx {
                if cell.is_empty() {
                    return Err(StreamError::EmptyLabel { path: path.to_path_buf(), row, column: col + 1 });
                }
                raw_labels.push(cell.to_owned());
                continue;
            }
            match cell.parse::<f64>() {
                Ok(v) if v.is_finite() => features.push(v),
                _ => {
                    return Err(StreamError::BadFeature {
                        path: path.to_path_buf(),
                        row,
                        column: col + 1,
                        cell: cell.to_owned(),
                    })
                }
            }
        }
        rows.push(features);
    }

    if rows.is_empty() {
        return Err(StreamError::NoDataRows { path: path.to_path_buf() });
    }

    let (labels, encoding) = encode_labels(&raw_labels);
    let instances: Vec<LabeledInstance> = rows
        .into_iter()
        .zip(labels)
        .enumerate()
        .map(|(i, (features, label))| LabeledInstance::new(features, label, i as u64 + 1))
        .collect();
    let descriptor = StreamDescriptor::describe(width.unwrap_or(1) - 1, &instances)?;
    Ok(LoadedStream { descriptor, instances, labels: encoding })
}

fn encode_labels(raw: &[String]) -> (Vec<ClassId>, LabelEncoding) {
    let numeric: Option<Vec<ClassId>> = raw.iter().map(|s| s.parse::<u32>().ok().map(ClassId)).collect();
    if let Some(ids) = numeric {
        return (ids, LabelEncoding::Numeric);
    }
    let mut index: HashMap<&str, ClassId> = HashMap::new();
    let mut tokens = Vec::new();
    let ids = raw
        .iter()
        .map(|tok| {
            *index.entry(tok.as_str()).or_insert_with(|| {
                tokens.push(tok.clone());
                ClassId(tokens.len() as u32 - 1)
            })
        })
        .collect();
    (ids, LabelEncoding::Tokens(tokens))
}

/// Writes instances as `x1,...,xd,label`. Floats use the shortest representation
/// that parses back to the same bits.
pub fn write_csv_stream(
    path: impl AsRef<Path>,
    instances: &[LabeledInstance],
    with_header: bool,
) -> Result<(), StreamError> {
    let path = path.as_ref();
    let io_err = |source: std::io::Error| StreamError::Io { path: path.to_path_buf(), source };
    let mut writer = csv::Writer::from_path(path).map_err(|e| StreamError::Csv { path: path.to_path_buf(), row: 0, source: e })?;
    let dim = instances.first().map(|i| i.features.len()).unwrap_or(0);
    if with_header {
        let mut header: Vec<String> = (1..=dim).map(|j| format!("x{j}")).collect();
        header.push("label".into());
        writer
            .write_record(&header)
            .map_err(|e| StreamError::Csv { path: path.to_path_buf(), row: 0, source: e })?;
    }
    let mut cells = Vec::with_capacity(dim + 1);
    for (i, inst) in instances.iter().enumerate() {
        cells.clear();
        cells.extend(inst.features.iter().map(|v| v.to_string()));
        cells.push(inst.label.to_string());
        writer
            .write_record(&cells)
            .map_err(|e| StreamError::Csv { path: path.to_path_buf(), row: i + 1, source: e })?;
    }
    writer.flush().map_err(io_err)
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct StreamStats {
    pub count: usize,
    pub class_counts: BTreeMap<ClassId, usize>,
    pub feature_min: Vec<f64>,
    pub feature_max: Vec<f64>,
}

pub fn stream_stats(instances: &[LabeledInstance]) -> StreamStats {
    let mut stats = StreamStats::default();
    for inst in instances {
        stats.count += 1;
        *stats.class_counts.entry(inst.label).or_insert(0) += 1;
        if stats.feature_min.is_empty() {
            stats.feature_min = inst.features.clone();
            stats.feature_max = inst.features.clone();
            continue;
        }
        for ((lo, hi), &v) in stats.feature_min.iter_mut().zip(stats.feature_max.iter_mut()).zip(&inst.features) {
            *lo = lo.min(v);
            *hi = hi.max(v);
        }
    }
    stats
}
