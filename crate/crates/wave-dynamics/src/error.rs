use thiserror::Error;

use crate::evolve::Outcome;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("CFL violated: dt = {dt} > 0.9·h = {limit}")]
    Cfl { dt: f64, limit: f64 },
    #[error("bracket too small: both ends give {0:?}")]
    BracketTooSmall(Outcome),
    #[error("numeric failure: {0}")]
    NumericFailure(String),
    #[error(transparent)]
    Core(#[from] radial_core::Error),
    #[error(transparent)]
    Soliton(#[from] solitons::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
