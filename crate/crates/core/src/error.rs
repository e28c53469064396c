use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LuError {
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    /// Elimination without pivoting hit an exact zero pivot at `step` (zero-based).
    #[error("zero pivot at elimination step {}", step + 1)]
    ZeroPivot { step: usize },
    #[error("factorization is singular")]
    Singular,
    #[error("growth factor undefined for a zero input")]
    UndefinedGrowth,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("matrix market parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T> = std::result::Result<T, LuError>;

impl From<std::io::Error> for LuError {
    fn from(e: std::io::Error) -> Self {
        LuError::Io(e.to_string())
    }
}

pub(crate) fn arg<T>(msg: impl Into<String>) -> Result<T> {
    Err(LuError::Argument(msg.into()))
}
