use thiserror::Error;

/// Errors shared across the whole crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty input: a ground set needs at least one element")]
    EmptySet,
    #[error("division by zero: 0 occurs in a denominator set")]
    DivisionByZero,
    #[error("zero dilation factor")]
    ZeroDilation,
    #[error("zero element: the operation requires 0 to be absent from the set")]
    ZeroElement,
    #[error("non-positive element: the operation requires strictly positive elements")]
    NonPositiveElement,
    #[error("set too small: the refinement needs at least two elements")]
    TooSmall,
    #[error("invalid witness: constraint `{0}` violated")]
    InvalidWitness(&'static str),
    #[error("certificate failed independent recheck: {0}")]
    CertificateInvalid(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("nonpositive denominator in crossover exponent")]
    NonpositiveDenominator,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("exact inequality `{spec}` violated on {instance}")]
    ExactInequalityViolated { spec: String, instance: String },
    #[error("per-instance time budget exceeded ({0} ms)")]
    BudgetExceeded(u64),
    #[error("two image values closer than the separation tolerance: {0} vs {1}")]
    FloatSeparation(f64, f64),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Name of the violated precondition, for CLI exit-3 diagnostics.
    pub fn precondition_name(&self) -> Option<&'static str> {
        match self {
            Error::EmptySet => Some("non-empty input"),
            Error::DivisionByZero => Some("0 not in denominator set"),
            Error::ZeroDilation => Some("nonzero dilation factor"),
            Error::ZeroElement => Some("0 not in set"),
            Error::NonPositiveElement => Some("strictly positive elements"),
            Error::TooSmall => Some("set size at least 2"),
            Error::PreconditionViolated(_) => Some("operation precondition"),
            Error::NonpositiveDenominator => Some("positive crossover denominator"),
            _ => None,
        }
    }
}
