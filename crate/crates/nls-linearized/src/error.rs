use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("invalid bracket: {0}")]
    InvalidBracket(String),
    #[error("singular solve: {0}")]
    SingularSolve(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error(transparent)]
    Core(#[from] radial_core::Error),
    #[error(transparent)]
    Soliton(#[from] solitons::Error),
    #[error(transparent)]
    Spectral(#[from] halfline_spectral::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
