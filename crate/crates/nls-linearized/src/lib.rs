//! The self-adjoint pair `L₋ = -Δ + α² - φ^{2σ}`, `L₊ = -Δ + α² - (2σ+1)φ^{2σ}`
//! around an NLS ground state, reduced to angular-momentum channels.
//!
//! Spectral questions at and below the edge `α²` are answered on the
//! half-line continuum (Numerov shooting matched to the exact exterior
//! solution), not on the box, so a truncated domain cannot fake eigenvalues.

mod count;
mod error;
mod gap;
mod pair;
mod weinstein;

pub use count::{continuum_count, decaying_log_derivative};
pub use error::{Error, Result};
pub use gap::{gap_crossings, gap_scan, gap_scan_sigmas, sigma_star, ChannelGap, GapReport, PairConfig, SigmaStar};
pub use pair::{assemble_linearized_pair, LinearizedPair, Sign};
pub use weinstein::{
    h0_from_alpha_derivative, instability_criterion, mu0, sqrt_form_min_eigenvalue, weinstein_h, Instability,
};
