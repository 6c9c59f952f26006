use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid denominator: m must be nonzero")]
    InvalidDenominator,
    #[error("index {index} out of range 0..{len}")]
    IndexOutOfRange { index: i64, len: i64 },
    #[error("truncation order must be at least {min}, got {got}")]
    InvalidOrder { min: usize, got: usize },
    #[error("operator spectrum is empty")]
    EmptySpectrum,
    #[error("spectral window radius {radius} does not cover eigenvalue {eigenvalue}")]
    WindowTooSmall { radius: i64, eigenvalue: i64 },
    #[error("{nodes} quadrature nodes alias the integrand; at least {required} are needed")]
    InsufficientNodes { nodes: usize, required: usize },
    #[error("regularization exponent must exceed 1, got {0}")]
    InvalidRegularization(f64),
    #[error("matrix is not Hermitian (defect {0:.3e})")]
    NotHermitian(f64),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("sphere dimension {0} is not supported here (need d >= 2, odd where integer shifted spectrum is required)")]
    UnsupportedDimension(usize),
    #[error("invalid window: {0}")]
    InvalidWindow(String),
    #[error("need at least {min} truncation points, got {got}")]
    TooFewPoints { min: usize, got: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
