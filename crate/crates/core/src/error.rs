//! Crate-wide error type.

use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid schema: {0}")]
    InvalidSchema(String),

    /// A project row that fails validation. `row` is 1-based over data rows
    /// (the header is row 0).
    #[error("row {row}, column {column}: {reason}")]
    InvalidRecord {
        row: usize,
        column: String,
        reason: String,
    },

    #[error("dataset: {0}")]
    InvalidDataset(String),

    #[error("factor {factor:?} has zero range over the dataset")]
    ZeroRange { factor: String },

    #[error("invalid topology: {0}")]
    InvalidTopology(String),

    #[error("invalid training config: {0}")]
    InvalidConfig(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("training diverged at epoch {epoch}: loss is not finite")]
    TrainingDiverged { epoch: usize },

    #[error("metric input lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },

    #[error("metric input is empty")]
    EmptyInput,

    #[error("actual value is zero; relative difference is undefined")]
    ZeroActual,

    #[error("every sweep trial diverged; nothing to select")]
    AllTrialsDiverged,

    #[error("model file: {0}")]
    InvalidModel(String),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
