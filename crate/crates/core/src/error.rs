use thiserror::Error;

use crate::runner::Stroke;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported matrix dimension {0} (only 2 and 4 are supported)")]
    UnsupportedDimension(usize),

    #[error("expected {expected} entries, found {found}")]
    EntryCount { expected: usize, found: usize },

    #[error("matrix is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("Kraus set is not complete (max deviation {deviation:e})")]
    IncompleteKraus { deviation: f64 },

    #[error("Kraus set is empty")]
    EmptyKraus,

    #[error("relative entropy diverges: first state has weight {weight:e} outside the support of the second")]
    SupportViolation { weight: f64 },

    #[error("{name} = {value} is out of range ({expected})")]
    OutOfRange {
        name: &'static str,
        value: f64,
        expected: &'static str,
    },

    #[error("{0}")]
    Tomography(String),

    #[error("golden data is corrupt at line {line}: {message}")]
    GoldenData { line: usize, message: String },

    #[error("{} parse error(s); first: {}", .0.len(), .0.first().map(|e| e.to_string()).unwrap_or_default())]
    Parse(Vec<crate::circuit::ParseError>),

    #[error("compile error at line {line}: {message}")]
    Compile { line: usize, message: String },

    #[error("{block} block has no {realization} realization")]
    MissingRealization {
        block: String,
        realization: &'static str,
    },

    #[error("config error: {0}")]
    Config(String),

    #[error("{stroke} stroke failed: {source}")]
    Stroke {
        stroke: Stroke,
        #[source]
        source: Box<Error>,
    },

    #[error("{0}")]
    Report(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn out_of_range(name: &'static str, value: f64, expected: &'static str) -> Self {
        Error::OutOfRange {
            name,
            value,
            expected,
        }
    }
}
