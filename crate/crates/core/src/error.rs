use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("series has a non-positive constant term ({0}); log is undefined")]
    ZeroConstantTerm(f64),

    #[error("law puts no mass at the origin (p_0 = {0})")]
    ZeroAtOrigin(f64),

    #[error("invalid pmf: {0}")]
    InvalidPmf(String),

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("Laplace transform evaluated at negative argument {0}")]
    NegativeArgument(f64),

    #[error("coefficient extraction failed at index {index} (value {value})")]
    CoefficientExtractionFailure { index: usize, value: f64 },

    #[error("operation not applicable: {0}")]
    NotApplicable(String),

    #[error("argument {0} is outside the support of the limit law")]
    DomainError(f64),

    #[error("normalizing operator has non-zero off-diagonal entries")]
    UnsupportedOffDiagonal,

    #[error("empirical distribution has no samples")]
    EmptySample,

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },
}

pub(crate) fn check_param(name: &'static str, value: f64, ok: bool, reason: &'static str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { name, value, reason })
    }
}
