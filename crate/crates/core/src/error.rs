use thiserror::Error;

/// Errors raised by the library. Parse errors have their own type in
/// [`crate::parse`] because they carry source positions.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("Euler characteristic is {chi}, a determinant requires 0")]
    NonZeroEuler { chi: i64 },

    #[error("no minor sizes exist for dims {dims:?}: alternating partial sum at term {term} is negative")]
    NegativePartialSum { dims: Vec<usize>, term: usize },

    #[error("complex is degenerate: no nonzero minor at differential d{stage}")]
    Degenerate { stage: usize },

    #[error("denominator minor M{index} vanishes for this selection")]
    ZeroDenominator { index: usize },

    #[error("selection size mismatch at sigma{index}: expected {expected}, got {got}")]
    SelectionSize {
        index: usize,
        expected: usize,
        got: usize,
    },

    #[error("nilpotency violated: (d{diff} * d{next})[{row}, {col}] != 0", next = diff + 1)]
    NotNilpotent { diff: usize, row: usize, col: usize },

    #[error("invariant violated: {0}")]
    Anomaly(String),
}

pub type Result<T> = std::result::Result<T, Error>;
