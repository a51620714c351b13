use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors shared by all modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid media: {0}")]
    InvalidMedia(String),

    #[error("operation not applicable for class {class}: {reason}")]
    NotApplicable { class: &'static str, reason: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("grid too small: need N >= {needed}, got {got}")]
    GridTooSmall { needed: usize, got: usize },

    #[error("eigensolver failed: {0}")]
    Eigensolver(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("construction failed: {0}")]
    BuildFailure(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("serialization error: {0}")]
    Serde(#[from] serde_json::Error),
}
