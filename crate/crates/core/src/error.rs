use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("variable context mismatch")]
    ContextMismatch,
    #[error("elements belong to different Lie algebras")]
    AlgebraMismatch,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("subspace is not closed under the bracket")]
    NotASubalgebra,
    #[error("invalid functional: {0}")]
    InvalidFunctional(String),
    #[error("invalid Jordan data: {0}")]
    InvalidJordanData(String),
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
