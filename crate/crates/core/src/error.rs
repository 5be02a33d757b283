use thiserror::Error;

/// Failure modes shared by every numerical routine in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("pole of the Gamma function at x = {0}")]
    Pole(f64),

    #[error("argument {value} outside the supported range {range}")]
    OutOfRange { value: f64, range: &'static str },

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("{what} did not converge: {detail}")]
    NonConvergence { what: &'static str, detail: String },

    #[error("singular {0}")]
    Singular(String),

    #[error("vanishing denominator: {0}")]
    DenominatorZero(String),

    #[error("size guard violated: {0}")]
    SizeGuard(String),

    #[error("imaginary residual {residual:e} too large in {what}")]
    ImaginaryResidual { what: &'static str, residual: f64 },

    #[error("rejection budget of {budget} proposals exhausted; try a smaller N_f*t")]
    RejectionBudget { budget: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Invalid(msg.into())
    }
}
