use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid data: {0}")]
    InvalidData(String),

    #[error("too few samples: need at least 4 rows, got {0}")]
    TooFewSamples(usize),

    #[error("classification labels must be 0 or 1 (row {row} has {value})")]
    InvalidLabels { row: usize, value: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("degenerate data: {0}")]
    DegenerateData(String),

    #[error("the retained regularization grid is empty")]
    EmptyGrid,

    #[error("estimated model size {q} exceeds the number of features {p}")]
    InvalidModelSize { q: f64, p: usize },

    #[error("invalid stability threshold tau = {tau}: {reason}")]
    InvalidTau { tau: f64, reason: String },

    #[error(
        "target E(FP) {target} is infeasible for f_delta (delta = {delta}): required threshold {tau} exceeds 1"
    )]
    FdInfeasible { target: f64, delta: f64, tau: f64 },

    #[error("source matrix is {rows}x{cols} but {need_rows}x{need_cols} was requested")]
    SourceTooSmall {
        rows: usize,
        cols: usize,
        need_rows: usize,
        need_cols: usize,
    },

    #[error(
        "signal X'beta is identically zero; noise variance for the requested SNR is undefined"
    )]
    DegenerateSignal,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{failed} of {total} trials failed (limit is 5%)")]
    TooManyFailures { failed: usize, total: usize },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Csv {
        path: PathBuf,
        #[source]
        source: csv::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Whether the error stems from bad user input rather than a failure
    /// during computation. The CLI maps this onto its exit status.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::InvalidData(_)
                | Error::TooFewSamples(_)
                | Error::InvalidLabels { .. }
                | Error::ShapeMismatch(_)
                | Error::InvalidTau { .. }
                | Error::FdInfeasible { .. }
                | Error::SourceTooSmall { .. }
                | Error::Config(_)
                | Error::Csv { .. }
                | Error::Io { .. }
        )
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn csv(path: impl Into<PathBuf>, source: csv::Error) -> Self {
        Error::Csv {
            path: path.into(),
            source,
        }
    }
}
