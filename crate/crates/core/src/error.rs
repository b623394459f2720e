use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid discriminant {0}: {1}")]
    InvalidDiscriminant(i64, &'static str),

    #[error("factorization too large: |{value}| exceeds bound {bound}")]
    FactorizationTooLarge { value: String, bound: u64 },

    #[error("{0} must be nonzero")]
    Zero(&'static str),

    #[error("{value} is not a {p}-unit")]
    NotPUnit { value: String, p: u64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("modulus {b} exceeds enumeration bound {bound}")]
    EnumerationBound { b: u64, bound: u64 },

    #[error(
        "ideal is not coprime to the ramified prime {0}; replace it by a coprime \
         representative of the same genus"
    )]
    NeedGenusRepresentative(u64),

    #[error("no coprime representative found within search radius {0}")]
    SearchFailed(i64),

    #[error("numerical residual {residual:e} exceeds {tolerance:e}")]
    NumericalResidual { residual: f64, tolerance: f64 },

    #[error("internal consistency failure: {0}")]
    Inconsistency(String),

    #[error("arithmetic overflow in {0}")]
    Overflow(&'static str),

    #[error("parse error: {0}")]
    Parse(String),
}
