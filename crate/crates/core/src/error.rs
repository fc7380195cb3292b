use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(String),

    #[error("information content must be non-negative, got {0} bits")]
    NegativeInformation(f64),

    #[error("information value is NaN")]
    NanBits,

    #[error("malformed probability literal {0:?}")]
    BadProbabilityLiteral(String),

    #[error("distribution must contain at least one event")]
    EmptyDistribution,

    #[error("{what}: expected {expected} entries, found {found}")]
    LengthMismatch {
        what: String,
        expected: usize,
        found: usize,
    },

    #[error("duplicate label {0:?}")]
    DuplicateLabel(String),

    #[error("{context} sums to {sum}, expected 1")]
    NotNormalized { context: String, sum: String },

    #[error("unknown observation label {0:?}")]
    UnknownObservation(String),

    #[error("unknown model label {0:?}")]
    UnknownModel(String),

    #[error("impossible observation {0:?}: evidence is zero")]
    ImpossibleObservation(String),

    #[error("bayes factor ratio undefined: P({observation}|{model}) is zero")]
    DivisionByZero { observation: String, model: String },

    #[error("bayes factor undefined: both likelihoods of {0:?} are zero")]
    IndeterminateBayesFactor(String),

    #[error("model {0:?} has zero prior probability, log ratio undefined")]
    ZeroPrior(String),

    #[error("oracle requires exact rationals")]
    NonRational,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{field}: {message}")]
    Field { field: String, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
