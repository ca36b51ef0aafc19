use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the engine.
#[derive(Debug, Error)]
pub enum Error {
    /// An electron sits exactly on the nucleus or on another electron.
    #[error("Coulomb singularity: {0}")]
    Singularity(String),

    /// The trial function vanishes at the requested point.
    #[error("trial function vanishes at the walker (node)")]
    Node,

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("dimension mismatch: expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// No admissible step was found within the resampling cap.
    #[error("no admissible step after {attempts} resampling attempts at step {step}")]
    GuardExhausted { attempts: u32, step: u64 },

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("singular least-squares system: {0}")]
    SingularFit(String),

    #[error("nonlinear fit did not converge within {iterations} iterations")]
    NonConvergence { iterations: usize },

    #[error("config field `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
