//! Low-energy resolvent machinery: the Jensen–Nenciu inversion of
//! `A(z) = A₀ + zA₁(z)` with singular `A₀`, the symmetric resolvent identity,
//! entrywise Laurent fits of `(H - z²)^{-1}` near `z = 0`, closed-form free
//! kernels, and classification of zero modes by `∫V f`.

mod classify;
mod error;
mod family;
mod kernels;
mod laurent;
mod symmetric;

pub use classify::{classify_zero_mode, ZeroModeReport};
pub use error::{Error, Result};
pub use family::{
    condition_number, condition_pair, degenerate_family, jensen_nenciu_invert, random_family, run_jn_suite, A1Map,
    JnInverse, JnSuiteReport, SingularFamily,
};
pub use kernels::{free_resolvent_kernel, halfline_free_kernel, zero_energy_green};
pub use laurent::{laurent_fit, ray_samples, LaurentCoefficients};
pub use symmetric::{
    halfline_resolvent_block, halfline_zero_energy_block, imaginary_axis_kernel, symmetric_resolvent,
    DEFAULT_OBSTRUCTION_TOL,
};

pub use num_complex::Complex64;
