use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("syntax error at offset {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("line {line}: {message}")]
    Problem { line: usize, message: String },
    #[error("line {line}, column {column}: {inner}")]
    At { line: usize, column: usize, inner: Box<Error> },
    #[error("variable `{0}` declared twice")]
    DuplicateVariable(String),
    #[error("registry already has a time variable; cannot add `{0}`")]
    SecondTimeVariable(String),
    #[error("no section entry for variable `{0}`")]
    MissingSection(String),
    #[error("expected a polynomial, found `{0}`")]
    NotPolynomial(String),
    #[error("denominator `{0}` vanishes on the variety")]
    DenominatorVanishesOnVariety(String),
    #[error("the ideal is inconsistent (contains 1)")]
    InconsistentIdeal,
    #[error("no time variable in the registry")]
    NoTimeVariable,
    #[error("malformed right-hand side: {0}")]
    MalformedRhs(String),
    #[error("the equation does not depend on its top derivative")]
    DegenerateLeadingDerivative,
    #[error("top-derivative coefficient `{0}` vanishes on the variety; differentiate further by hand")]
    NotSolvable(String),
    #[error("wrong problem mode: {0}")]
    WrongMode(String),
    #[error("initial condition is off the variety (residual {residual:e})")]
    InitialConditionOffVariety { residual: f64 },
    #[error("pole encountered; last good time {last_t}")]
    PoleEncountered { last_t: f64 },
    #[error("denominator of the integral is near zero on the trajectory at t = {t}")]
    DenominatorNearZeroOnTrajectory { t: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    /// The underlying error with any position wrapper removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { inner, .. } => inner.root(),
            other => other,
        }
    }
}
