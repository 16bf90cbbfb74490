use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("angular momentum domain error: {0}")]
    Domain(String),

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("spin state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("linear system is singular or badly solved (relative residual {0:e})")]
    Singular(f64),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
