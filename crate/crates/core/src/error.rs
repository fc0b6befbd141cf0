use thiserror::Error;

/// Errors raised by the library. Domain errors map to CLI exit code 1.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("arrangement is not essential/non-central (rank of [b | A] is {rank}, need {needed})")]
    NotEssential { rank: usize, needed: usize },

    #[error("not essential/non-central: form {0} has zero linear part")]
    DegenerateForm(usize),

    #[error("repeated hyperplane {0},{1}")]
    RepeatedHyperplane(usize, usize),

    #[error("size cap exceeded: {0}")]
    SizeCap(String),

    #[error("evaluation point has arity {got}, polynomial has {expected} variables")]
    Arity { expected: usize, got: usize },

    #[error("point lies on hyperplane {0}")]
    OnHyperplane(usize),

    #[error("resultant undefined: both inputs are constant in {0}")]
    ConstantInMainVar(String),

    #[error("degree of {var} is {degree}, need at least {needed}")]
    DegreeTooLow { var: String, degree: usize, needed: usize },

    #[error("zero polynomial has no canonical form")]
    ZeroPolynomial,

    #[error("rank deficiency: {0}")]
    RankDeficient(String),

    #[error("invalid input: {0}")]
    Invalid(String),

    #[error("computation failed: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(location: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Parse { location: location.into(), message: message.into() }
    }
}
