use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("non-finite value in {context} (index {index})")]
    NonFinite { context: String, index: usize },

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("unknown problem id `{id}`; valid ids: {valid}")]
    UnknownProblem { id: String, valid: String },

    #[error("training diverged at epoch {epoch}: {message}")]
    Training { epoch: usize, message: String },

    #[error("outer iteration {iteration} aborted: {message}")]
    Aborted { iteration: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
