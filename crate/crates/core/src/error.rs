use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("point is not in the lattice: {0}")]
    NotInLattice(String),
    #[error("invalid lattice: {0}")]
    Lattice(String),
    #[error("invalid cone: {0}")]
    Cone(String),
    #[error("{0} is not a face of the cone")]
    NotAFace(String),
    #[error("degenerate form set: {0}")]
    Degenerate(String),
    #[error("derived sequence check failed: {0}")]
    InvalidDerivedSequence(String),
    #[error("precondition violated in {rule}: {detail}")]
    Precondition { rule: &'static str, detail: String },
    #[error("divergent sum: {0}")]
    Divergent(String),
    #[error("form is not positive on the open cone: {0}")]
    Positivity(String),
    #[error("validation failed: {0}")]
    Validation(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("numerical budget exhausted: {0}")]
    Budget(String),
    #[error("regularization failed: {0}")]
    Regularization(String),
    #[error("internal invariant broken: {0}")]
    Internal(String),
}

impl Error {
    /// Machine-readable code used in reports and by the command-line exit status.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Divergent(_) => "DIVERGENT",
            Error::Positivity(_) => "POSITIVITY",
            Error::Parse(_) => "PARSE",
            Error::Validation(_) | Error::Cone(_) | Error::Lattice(_) => "VALIDATION",
            Error::Budget(_) => "BUDGET",
            _ => "INTERNAL",
        }
    }

    pub(crate) fn precondition(rule: &'static str, detail: impl Into<String>) -> Self {
        Error::Precondition { rule, detail: detail.into() }
    }
}
