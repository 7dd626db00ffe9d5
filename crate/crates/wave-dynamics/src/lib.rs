//! Radial dynamics of the quintic focusing wave equation `□ψ = ψ⁵` in three
//! dimensions near the static Aubin soliton: leapfrog evolution in both the
//! full and the perturbation frame, the unstable-mode decomposition and its
//! scalar ODE, the stable-manifold bisection, and the linear propagators of
//! `H = -Δ - 5φ⁴`.

pub mod background;
pub mod error;
pub mod evolve;
pub mod manifold;
pub mod modeode;
pub mod modes;
pub mod nonlinearity;
pub mod propagator;
pub mod state;

pub use background::StaticBackground;
pub use error::{Error, Result};
pub use evolve::{evolve_nlw, EvolveOptions, Exit, Outcome, Trajectory};
pub use manifold::{find_stable_h, StableManifoldConfig, StableManifoldResult};
pub use modeode::{evolve_unstable_mode, stability_initial_condition, ModeSeries, StabilityValue};
pub use modes::{mode_decompose, project_out_unstable, ModeDecomposition};
pub use nonlinearity::nonlinearity_n;
pub use propagator::{fit_decay, sine_split, LinearPropagator, SineSplit};
pub use state::{Frame, RadialState};
