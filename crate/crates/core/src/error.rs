use std::path::PathBuf;

/// Errors produced by the pipeline library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("count {value} at row {row}, col {col} is outside [0, 2046]")]
    CountOutOfRange { row: usize, col: usize, value: i32 },

    #[error("{op}: shape mismatch between {lhs:?} and {rhs:?}")]
    ShapeMismatch {
        op: &'static str,
        lhs: Vec<usize>,
        rhs: Vec<usize>,
    },

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{path}: malformed header: expected {expected:?}, got {got:?}")]
    MalformedHeader {
        path: PathBuf,
        expected: String,
        got: String,
    },

    #[error("{path}, line {line}: expected {expected} values, got {got}")]
    ValueCount {
        path: PathBuf,
        line: usize,
        expected: usize,
        got: usize,
    },

    #[error("{path}, line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("timestamps not strictly increasing at index {index} ({prev} -> {next})")]
    NonMonotoneTimestamps { index: usize, prev: f64, next: f64 },

    #[error("missing manifest entry for {0}")]
    MissingManifestEntry(String),

    #[error("no occupancy detected on {section} stream")]
    NoOccupancy { section: &'static str },

    #[error("no overlapping frames between upper and lower streams")]
    EmptyOverlap,

    #[error("transient label not allowed here")]
    TransientLabel,

    #[error("infeasible pose schedule: dwell total {total_s} s exceeds occupancy window {window_s} s")]
    InfeasibleSchedule { total_s: f64, window_s: f64 },

    #[error("patients present in both train and test split: {0:?}")]
    PatientOverlap(Vec<String>),

    #[error("label {label} out of range for {classes} classes")]
    LabelOutOfRange { label: usize, classes: usize },

    #[error("gradient missing for parameter {0}")]
    MissingGradient(String),

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("checkpoint format error: {0}")]
    Checkpoint(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
