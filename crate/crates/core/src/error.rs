use std::path::PathBuf;

use crate::diagnostics::InvariantRecord;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("input shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("grid mismatch: {left} vs {right}")]
    GridMismatch { left: String, right: String },

    #[error("index out of range: {what} = {index} (limit {limit})")]
    IndexOutOfRange {
        what: &'static str,
        index: usize,
        limit: usize,
    },

    #[error("contract violation: {what} (residual {residual:.3e})")]
    ContractViolation { what: String, residual: f64 },

    /// Every violated constraint, one entry each.
    #[error("configuration error: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("numerical blow-up after t = {t_last} ({} records kept)", .records.len())]
    BlowUp {
        t_last: f64,
        records: Vec<InvariantRecord>,
    },

    #[error(
        "magnetic helicity is gauge dependent for a field with nonzero mean (|mean| = {mean:.3e})"
    )]
    GaugeAmbiguity { mean: f64 },

    #[error("magnetic helicity requires a 3D grid, got dim = {0}")]
    NotThreeDimensional(usize),

    #[error("snapshot format: {0}")]
    Snapshot(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(vec![msg.into()])
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// Process exit code used by the CLI and mirrored by the C API status codes.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidGrid(_) => 2,
            Error::BlowUp { .. } => 3,
            _ => 1,
        }
    }
}
