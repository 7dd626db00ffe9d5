//! Static solutions: the explicit Aubin family `φ(x,a) = (3a)^{1/4}(1+a|x|²)^{-1/2}`
//! of `-Δφ = φ⁵` in three dimensions, and positive radial ground states of
//! `(α² - Δ)φ = φ^{2σ+1}` obtained by shooting.

mod aubin;
mod error;
mod nls;

pub use aubin::{aubin_values, AubinSamples, AubinSoliton};
pub use error::{Error, Result};
pub use nls::{alpha_derivative, mass, nls_ground_state, rescale_ground_state, NlsGroundState};
