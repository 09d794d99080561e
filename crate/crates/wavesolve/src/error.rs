//! Error type shared across the library.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("assembly error: {0}")]
    Assembly(String),

    #[error("element {element}: local Gram/Schur factorization failed ({detail})")]
    IllConditioned { element: usize, detail: String },

    #[error("global system singular at pivot {pivot}: dof {dof}")]
    Singular { pivot: usize, dof: String },

    #[error("evaluation at the source singularity r = 0")]
    Singularity,

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}

impl SolverError {
    /// Machine-readable category used for CLI exit codes and FFI status.
    pub fn category(&self) -> &'static str {
        match self {
            SolverError::Domain(_) | SolverError::Argument(_) => "argument",
            SolverError::Config(_) => "config",
            SolverError::Assembly(_)
            | SolverError::IllConditioned { .. }
            | SolverError::Singular { .. }
            | SolverError::Singularity => "numerical",
            SolverError::Io(_) => "io",
            SolverError::Serde(_) => "serde",
        }
    }
}

pub type Result<T> = std::result::Result<T, SolverError>;
