use thiserror::Error;

/// Errors produced by graph construction, queries and estimators.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("node `{id}` has a non-finite time")]
    NonFiniteTime { id: String },

    #[error("node `{id}` is listed more than once")]
    DuplicateNode { id: String },

    #[error("unknown node `{0}`")]
    UnknownNode(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("line {line}: timestamp kind differs from earlier lines (floats and dates cannot be mixed)")]
    MixedTimestamps { line: usize },

    #[error("equal-time edges form a cycle through node `{id}`")]
    EqualTimeCycle { id: String },

    #[error("source and target are the same node `{0}`")]
    SameEndpoints(String),

    #[error("interval between `{from}` and `{to}` is empty")]
    EmptyInterval { from: String, to: String },

    #[error("dimension estimate undefined: {0}")]
    Undefined(String),

    #[error("relation ratio {ratio} lies below f(10) = {floor}; dimension out of range")]
    DimensionOutOfRange { ratio: f64, floor: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("closure would contain more than {budget} edges")]
    EdgeBudgetExceeded { budget: u64 },

    #[error("i/o failure: {0}")]
    Io(String),

    #[error("graph invariant violated: {0}")]
    Invariant(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
