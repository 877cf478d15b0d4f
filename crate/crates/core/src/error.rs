use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("invalid cyclotomic order {0}: must be positive")]
    InvalidOrder(u64),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("matrix is singular")]
    Singular,

    #[error("contraction pattern error: {0}")]
    Pattern(String),

    #[error("not a group: {0}")]
    NotAGroup(String),

    #[error("not convolution invertible")]
    NotConvolutionInvertible,

    #[error("not a cocycle: {0}")]
    NotACocycle(String),

    #[error("yetter-drinfeld violation: {0}")]
    YetterDrinfeld(String),

    #[error("degenerate metric")]
    DegenerateMetric,

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("host mismatch: {0}")]
    HostMismatch(String),

    #[error("unknown instance {0:?}")]
    UnknownInstance(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("{field}: {message}")]
    Validation { field: String, message: String },

    /// A construction that the theory guarantees has failed.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub fn validation(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            field: field.into(),
            message: message.into(),
        }
    }
}
