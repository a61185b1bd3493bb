use thiserror::Error;

/// Errors raised anywhere in the simulator.
#[derive(Debug, Error)]
pub enum HbacError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("polarization {0} outside [-1, 1]")]
    PolarizationDomain(f64),

    #[error("division by zero: {0}")]
    DivideByZero(&'static str),

    #[error("qubit index {index} out of range for width {width}")]
    IndexOutOfRange { index: usize, width: usize },

    #[error("width mismatch: expected {expected}, got {got}")]
    WidthMismatch { expected: usize, got: usize },

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("no spin with role Reset")]
    MissingReset,

    #[error("steady state not reached after {cycles} cycles (last change {last_delta:e})")]
    NonConvergence { cycles: usize, last_delta: f64 },

    #[error("circuit parse error on line {line}: {message}")]
    CircuitParse { line: usize, message: String },

    #[error("config parse error: {0}")]
    ConfigParse(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, HbacError>;

impl HbacError {
    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        HbacError::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}
