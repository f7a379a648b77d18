use thiserror::Error;

/// Errors raised by the exact engine, the witness builders and the I/O layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    #[error("the zero polynomial is not allowed here")]
    ZeroPolynomial,

    #[error("polynomial is not square-free")]
    NotSquareFree,

    #[error("matrix is not nilpotent")]
    NotNilpotent,

    #[error("polynomial {0} does not divide the characteristic polynomial")]
    NotADivisor(String),

    #[error("roots of {0} do not share one Jordan structure")]
    NonUniformFactor(String),

    #[error("eigenvalue is a primitive {k}-th root of unity")]
    RootOfUnity { k: u64 },

    #[error("matrix is singular")]
    Singular,

    #[error("no real logarithm: {0}")]
    NoRealLog(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

impl Error {
    /// Stable machine-readable code.
    pub fn code(&self) -> &'static str {
        match self {
            Error::NotSquare { .. } => "NOT_SQUARE",
            Error::DimensionMismatch(_) => "DIMENSION_MISMATCH",
            Error::FieldMismatch(_) => "FIELD_MISMATCH",
            Error::ZeroPolynomial => "ZERO_POLYNOMIAL",
            Error::NotSquareFree => "NOT_SQUARE_FREE",
            Error::NotNilpotent => "NOT_NILPOTENT",
            Error::NotADivisor(_) => "NOT_A_DIVISOR",
            Error::NonUniformFactor(_) => "NON_UNIFORM_FACTOR",
            Error::RootOfUnity { .. } => "ROOT_OF_UNITY_PRECONDITION",
            Error::Singular => "SINGULAR",
            Error::NoRealLog(_) => "NO_REAL_LOG",
            Error::InvalidArgument(_) => "INVALID_ARGUMENT",
            Error::Unsupported(_) => "UNSUPPORTED",
            Error::Parse(_) => "PARSE_ERROR",
            Error::Internal(_) => "INTERNAL",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
