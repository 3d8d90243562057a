use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("config line {line}: {msg}")]
    ConfigLine { line: usize, msg: String },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("unsupported receiver variant: {0}")]
    UnsupportedVariant(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("singular update on subcarrier {subcarrier}: {what}")]
    SingularUpdate { subcarrier: usize, what: String },

    #[error("division by zero at {0}")]
    Division(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("unsupported covariance case: {0}")]
    UnsupportedCase(String),

    #[error("singular system at subcarrier {subcarrier}, time {time}")]
    SingularSystem { subcarrier: usize, time: usize },

    #[error("zero-norm reference channel")]
    ZeroNorm,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
