use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("invalid grid axis: {0}")]
    InvalidGrid(String),

    #[error("magnetic field must be {expected}, got {value} T")]
    InvalidField { value: f64, expected: &'static str },

    #[error("unknown config key `{0}`")]
    UnknownConfigKey(String),

    #[error("config parse error: {0}")]
    Config(String),

    #[error("no B samples match the requested filling-factor slice (tol = {tol})")]
    EmptySlice { tol: f64 },

    #[error("need at least {required} peaks to fit, got {actual}")]
    TooFewPoints { required: usize, actual: usize },

    #[error("fit did not converge: {0}")]
    NonConvergence(String),

    #[error("wrong file header: expected `{expected}`, found `{found}`")]
    WrongHeader { expected: &'static str, found: String },

    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: usize, reason: String },

    #[error("line {line}: B axis is not strictly increasing")]
    NonMonotoneAxis { line: usize },

    #[error("row count mismatch: expected {expected}, got {actual}")]
    CountMismatch { expected: usize, actual: usize },

    #[error("missing metadata `{0}`")]
    MissingMetadata(&'static str),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
