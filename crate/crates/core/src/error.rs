use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("eigensolver did not converge after {0} iterations")]
    NoConvergence(usize),

    #[error("breakdown: projected norm {norm:e} below threshold {threshold:e}")]
    Breakdown { norm: f64, threshold: f64 },

    #[error("requested {requested} eigenpairs but only {available} are available")]
    NotEnoughPairs { requested: usize, available: usize },

    #[error("spectral gap too small: filter degree would exceed {cap}")]
    GapTooSmall { cap: usize },

    #[error("shifted system singular for pole with imaginary part {imag:e}")]
    SingularShift { imag: f64 },

    #[error("no compression possible: {0}")]
    NoCompressionPossible(String),

    #[error("memory budget exceeded: need {needed} bytes, cap is {cap} bytes")]
    MemoryBudget { needed: usize, cap: usize },

    #[error("matrix is not symmetric: entry ({row}, {col}) differs by {diff:e}")]
    NotSymmetric { row: usize, col: usize, diff: f64 },

    #[error("matrix market parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
