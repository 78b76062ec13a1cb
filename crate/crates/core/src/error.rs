use thiserror::Error;

/// Errors raised across the library.
///
/// Resource caps are kept distinct from domain failures: an infeasible LP or a
/// separated matrix is an answer, never an error.
#[derive(Debug, Error)]
pub enum CpsdError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("division by zero")]
    DivisionByZero,

    #[error("matrix is not symmetric at ({row}, {col})")]
    NotSymmetric { row: usize, col: usize },

    #[error("invalid tuple: {0}")]
    InvalidTuple(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource cap exceeded: {what} (limit {limit})")]
    ResourceCap { what: String, limit: u64 },

    #[error("pivot limit of {0} exceeded")]
    PivotLimit(u64),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("improper coloring: {0}")]
    ImproperColoring(String),

    #[error("certificate rejected: {0}")]
    Certificate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CpsdError {
    /// True for failures caused by enumeration or pivot caps rather than by the input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(
            self,
            CpsdError::ResourceCap { .. } | CpsdError::PivotLimit(_)
        )
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        CpsdError::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T, E = CpsdError> = std::result::Result<T, E>;
