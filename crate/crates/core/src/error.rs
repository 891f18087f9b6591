use thiserror::Error;

/// Domain errors raised by the library. Each variant carries a stable code
/// used in machine-readable output.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("discriminant vanishes identically")]
    SingularModel,
    #[error("cannot classify fibre at {place}: {detail}")]
    Unclassifiable { place: String, detail: String },
    #[error("Euler number {0} is not divisible by 12")]
    EulerNotDivisible(i64),
    #[error("inconsistent data: {0}")]
    Inconsistent(String),
    #[error("construction rejected: {0}")]
    Construction(String),
    #[error("bound violated: {0}")]
    BoundViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("indeterminate: {0}")]
    Indeterminate(String),
}

impl Error {
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidInput(_) => "invalid_input",
            Error::DivisionByZero => "division_by_zero",
            Error::SingularModel => "singular_model",
            Error::Unclassifiable { .. } => "unclassifiable_fibre",
            Error::EulerNotDivisible(_) => "euler_not_divisible",
            Error::Inconsistent(_) => "inconsistent",
            Error::Construction(_) => "construction_rejected",
            Error::BoundViolation(_) => "bound_violated",
            Error::Unsupported(_) => "unsupported",
            Error::Indeterminate(_) => "indeterminate",
        }
    }

    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
