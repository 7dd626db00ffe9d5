use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("shooting failure: {0}")]
    Shooting(String),
    #[error(transparent)]
    Core(#[from] radial_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
