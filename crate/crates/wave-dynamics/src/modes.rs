use radial_core::inner_3d;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::state::{Frame, RadialState};

/// `U = n₊G₊ + n₋G₋ + Ũ` with `G± = (g, ±kg)` and `Ũ ⊥ g` in both slots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeDecomposition {
    pub n_plus: f64,
    pub n_minus: f64,
    pub u_tilde: RadialState,
    pub k: f64,
    pub g: Vec<f64>,
}

/// Splits a perturbation-frame state along the unstable/stable pair of the
/// ground state `g` (`Hg = -k²g`, unit in the 3-D radial measure).
pub fn mode_decompose(state: &RadialState, g: &[f64], k: f64) -> Result<ModeDecomposition> {
    if state.frame != Frame::Perturbation {
        return Err(Error::InvalidArgument("mode decomposition needs a perturbation-frame state".into()));
    }
    if !(k > 0.0) {
        return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
    }
    let grid = &state.grid;
    let norm = inner_3d(grid, g, g)?;
    if (norm - 1.0).abs() > 1e-8 {
        return Err(Error::InvalidArgument(format!("g is not unit: ⟨g,g⟩ = {norm}")));
    }
    let a = inner_3d(grid, &state.u, g)?;
    let b = inner_3d(grid, &state.ut, g)?;
    let u: Vec<f64> = state.u.iter().zip(g).map(|(u, g)| u - a * g).collect();
    let ut: Vec<f64> = state.ut.iter().zip(g).map(|(u, g)| u - b * g).collect();
    Ok(ModeDecomposition {
        n_plus: 0.5 * (a + b / k),
        n_minus: 0.5 * (a - b / k),
        u_tilde: RadialState { u, ut, ..state.clone() },
        k,
        g: g.to_vec(),
    })
}

impl ModeDecomposition {
    /// `n₊G₊ + n₋G₋ + Ũ`.
    pub fn reconstruct(&self) -> RadialState {
        let (p, q) = (self.n_plus + self.n_minus, self.k * (self.n_plus - self.n_minus));
        let u = self.u_tilde.u.iter().zip(&self.g).map(|(u, g)| u + p * g).collect();
        let ut = self.u_tilde.ut.iter().zip(&self.g).map(|(u, g)| u + q * g).collect();
        RadialState { u, ut, ..self.u_tilde.clone() }
    }
}

/// `f₁ - (⟨kf₁ + f₂, g⟩/k)·g`: removes the unstable coordinate so that
/// `(f₁, f₂)` satisfies `⟨kf₁ + f₂, g⟩ = 0`.
pub fn project_out_unstable(state: &RadialState, g: &[f64], k: f64) -> Result<RadialState> {
    let d = mode_decompose(state, g, k)?;
    let c = 2.0 * d.n_plus;
    let u = state.u.iter().zip(g).map(|(u, g)| u - c * g).collect();
    Ok(RadialState { u, ..state.clone() })
}
