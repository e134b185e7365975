use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("dimension must be at least 1")]
    ZeroDimension,

    #[error("group of order {p}^{n} exceeds the coefficient budget of {budget}")]
    OverBudget { p: u32, n: usize, budget: usize },

    #[error("vector has {got} coordinates, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("coordinate {value} is out of range for p = {p}")]
    CoordinateOutOfRange { value: u32, p: u32 },

    #[error("axis {axis} is out of range for dimension {n}")]
    AxisOutOfRange { axis: usize, n: usize },

    #[error("operands live in different group contexts")]
    ContextMismatch,

    #[error("operands live in different coefficient rings")]
    RingMismatch,

    #[error("operation requires coefficients in {0}")]
    WrongRing(&'static str),

    #[error("integer coefficient overflow")]
    Overflow,

    #[error("element is not in the ideal generated by 1 - g^e_{axis}")]
    NotInIdeal { axis: usize },

    #[error("matrix is singular mod {p}")]
    Singular { p: u32 },

    #[error("matrix must be square, got {rows} rows with a row of length {cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("{0}")]
    Infeasible(String),

    #[error("malformed matrix text: {0}")]
    Parse(String),

    #[error("checkpoint rejected: {0}")]
    Checkpoint(String),

    #[error("cannot merge reports: {0}")]
    Merge(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
