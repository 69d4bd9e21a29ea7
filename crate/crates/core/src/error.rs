use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error)]
pub enum JnrError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported matrix size {0} (expected {1})")]
    UnsupportedSize(usize, &'static str),

    #[error("non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not hermitian: asymmetry {asymmetry:.3e} exceeds {limit:.3e}")]
    NotHermitian { asymmetry: f64, limit: f64 },

    #[error("invalid index set {0:?}")]
    InvalidIndexSet(Vec<usize>),

    #[error("basis columns are not orthonormal (defect {0:.3e})")]
    NotOrthonormal(f64),

    #[error("not a density matrix: {0}")]
    NotDensity(String),

    #[error("invalid direction: {0}")]
    InvalidDirection(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("point is not in the joint numerical range (violation {0:.3e})")]
    NotInRange(f64),

    #[error("face has fewer than two independent traceless directions (rank {0})")]
    FaceTooThin(usize),

    #[error("no common eigenvector found for a pair judged reducible")]
    NoCommonEigenvector,

    #[error("block structure violated at joint eigenvector (defect {0:.3e})")]
    BlockStructure(f64),

    #[error("class counts {0:?} match no column of the fifteen-class table")]
    CountsNotInTable([usize; 4]),

    #[error("barrier solver failed at mu = {mu:.3e}: {reason}")]
    SolverFailure { mu: f64, reason: String },

    #[error("invalid segments: {0}")]
    InvalidSegments(String),

    #[error("unknown example id {0:?}")]
    UnknownExample(String),

    #[error("malformed input: {0}")]
    Parse(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, JnrError>;
