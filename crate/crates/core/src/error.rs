use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CoreError {
    #[error("mode mismatch between operands")]
    ModeMismatch,
    #[error("invalid mode: {0}")]
    InvalidMode(String),
    #[error("weight mismatch: {0}")]
    WeightMismatch(String),
    #[error("pole: {0}")]
    Pole(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("more than one formal parameter")]
    MultipleParams,
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl CoreError {
    /// Internal errors indicate an engine bug; all others are caller-facing
    /// mathematical domain errors.
    pub fn is_internal(&self) -> bool {
        matches!(self, CoreError::Internal(_))
    }
}

pub type Result<T> = std::result::Result<T, CoreError>;
