use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A distribution or estimator parameter is outside its domain.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("circuit with {n_qubits} qubits and depth {depth} is outside the supported range (1..=20 qubits, depth >= 1)")]
    Capacity { n_qubits: usize, depth: usize },

    #[error("shape mismatch: expected {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    /// Factorization met a pivot at or below tolerance.
    #[error("matrix is not positive definite: pivot {index} = {pivot:e}")]
    Conditioning { index: usize, pivot: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("trial {trial} failed: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("cell [{cell}] failed: {source}")]
    Cell {
        cell: String,
        #[source]
        source: Box<Error>,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },
}

impl Error {
    /// True when the root cause is numerical (conditioning, capacity) rather
    /// than a bad configuration or I/O problem.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Conditioning { .. } | Error::Capacity { .. } => true,
            Error::Trial { source, .. } | Error::Cell { source, .. } => source.is_numerical(),
            _ => false,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
