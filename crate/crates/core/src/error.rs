use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument `{field}`: {reason}")]
    InvalidArgument { field: &'static str, reason: String },

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("unsupported field degree {0}: only the rationals and real quadratic fields are implemented")]
    UnsupportedDegree(u32),

    #[error("periodization residual {residual:e} beyond degree {degree} exceeds tolerance")]
    DegreeResidual { degree: usize, residual: f64 },

    #[error("repeated prime ideal in product (norm {0})")]
    RepeatedIdeal(u64),

    #[error("guard violated: {0}")]
    Guard(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidArgument {
        field,
        reason: reason.into(),
    }
}
