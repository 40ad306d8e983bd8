use std::path::PathBuf;

use thiserror::Error;

/// Errors produced by the modelling and analysis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-physical input: {0}")]
    NonPhysical(String),

    #[error("invalid correlation matrix: {0}")]
    InvalidMatrix(String),

    #[error("efficiency {0} outside [0, 1]")]
    InvalidEfficiency(f64),

    #[error("degenerate: quadrature at or below shot noise ({0})")]
    Degenerate(String),

    #[error("bias parameter inconsistent between quadratures (k+ = {k_plus}, k- = {k_minus}); matrix is not in standard form")]
    InconsistentBias { k_plus: f64, k_minus: f64 },

    #[error("correlation matrix is not of the symmetric two-beam form; symmetrize it or reduce it to standard form first")]
    NotSymmetricForm,

    #[error("photon budget {budget} is below the {required} photons needed to prepare the state")]
    InsufficientBudget { budget: f64, required: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unknown token '{token}' (expected one of: {expected})")]
    UnknownToken {
        token: String,
        expected: &'static str,
    },

    #[error("row {row}, column '{column}': {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// True for errors caused by the filesystem rather than by the inputs.
    pub fn is_io(&self) -> bool {
        matches!(self, Error::Io { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
