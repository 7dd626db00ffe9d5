//! Half-line building blocks: uniform radial grids, trapezoid quadrature,
//! the tridiagonal channel operator `-d²/dr² + ℓ(ℓ+1)/r² + V(r)` with
//! Dirichlet ends, and the tridiagonal eigen-machinery built on Sturm counts.

pub mod error;
pub mod fit;
pub mod grid;
pub mod numerov;
pub mod operator;
pub mod tridiag;

pub use error::{Error, Result};
pub use grid::{inner_3d, integrate, make_grid, RadialGrid};
pub use operator::{apply_operator, assemble_channel_operator, ChannelOperator};
