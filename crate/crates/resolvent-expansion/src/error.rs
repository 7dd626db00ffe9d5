use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not invertible: {0}")]
    NotInvertible(String),
    /// The inner operator `U + vR₀v` is singular: zero energy carries an
    /// eigenvalue or a resonance.
    #[error("zero-energy obstruction: inner operator has relative singular value {0:.3e}")]
    ZeroEnergyObstruction(f64),
    #[error("ill-conditioned Laurent fit (condition {0:.3e}); widen the sample set")]
    IllConditionedFit(f64),
    #[error("three-dimensional kernel is singular on the diagonal")]
    OnDiagonalSingularity,
    #[error("not a zero mode: relative residual {0:.3e}")]
    NotAZeroMode(f64),
    #[error(transparent)]
    Core(#[from] radial_core::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
