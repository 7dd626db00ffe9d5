use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error("tail window too small: fit residual {0:.3e} (enlarge r_max)")]
    TailWindowTooSmall(f64),
    #[error(transparent)]
    Core(#[from] radial_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
