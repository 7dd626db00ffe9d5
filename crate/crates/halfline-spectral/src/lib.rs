//! Spectral analysis of half-line channel operators: negative eigenpairs by
//! Sturm bisection, node counts, the regular zero-energy solution with its
//! resonance/eigenvalue classification, and Birman–Schwinger counting.

mod birman;
mod eigen;
mod error;
mod zero_energy;

pub use birman::{birman_schwinger_count, bs_kernel_eigenvalues, BsChannel, BsCount};
pub use eigen::{count_nodes, negative_eigenpairs, EigenPair};
pub use error::{Error, Result};
pub use zero_energy::{
    free_tail_diagnosis_at, zero_energy_diagnosis, zero_energy_diagnosis_at, ZeroEnergyDiagnosis, ZeroModeKind,
    DEFAULT_THRESHOLD,
};
