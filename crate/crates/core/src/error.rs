use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("too large for exhaustive mode: {what} has size {size}, limit is {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("too large for exact mode: {size} vertices, limit is {limit}")]
    TooLargeForExact { size: usize, limit: usize },

    #[error("invalid tree decomposition: {0}")]
    InvalidDecomposition(String),

    #[error("ill-formed equation: {0}")]
    IllFormedEquation(String),

    #[error("mismatched index sets: {0}")]
    MismatchedIndex(String),

    #[error("malformed linear program: {0}")]
    MalformedLp(String),

    #[error("unsupported clause {clause}: {reason}")]
    UnsupportedClause { clause: String, reason: String },

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("json error: {0}")]
    Json(String),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
