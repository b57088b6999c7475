use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field modulus {0}: must be a prime below 65536")]
    InvalidField(u32),

    #[error("invalid poset: {0}")]
    InvalidPoset(String),

    #[error("not an interval: {0}")]
    NotAnInterval(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("resolution did not terminate within {max_depth} steps")]
    DepthExceeded { max_depth: usize },

    #[error("join of {0} does not exist in the interval poset")]
    JoinMissing(String),

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("malformed input: {0}")]
    Input(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Input(e.to_string())
    }
}
