use radial_core::fit::lstsq;
use radial_core::numerov::regular_solution;
use radial_core::ChannelOperator;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const DEFAULT_THRESHOLD: f64 = 1e-3;
const MAX_FIT_RESIDUAL: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ZeroModeKind {
    None,
    Resonance,
    Eigenvalue,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroEnergyDiagnosis {
    pub kind: ZeroModeKind,
    /// Regular solution `w`, scaled to `max|w| = 1`.
    pub solution: Vec<f64>,
    /// Coefficient of the growing tail `r^{ℓ+1}`.
    pub tail_slope: f64,
    /// Coefficient of the constant tail.
    pub tail_const: f64,
    /// `4π∫V (w/r) r² dr`; vanishes identically for `ℓ ≥ 1` after angular integration.
    pub v_integral: f64,
    /// `|tail_slope|·r_max^{ℓ+1}` and `|tail_const|`, relative to `max|w|` on the window.
    pub slope_rel: f64,
    pub const_rel: f64,
    pub threshold: f64,
    pub fit_residual: f64,
}

/// Diagnosis at zero energy with the default threshold.
pub fn zero_energy_diagnosis(op: &ChannelOperator) -> Result<ZeroEnergyDiagnosis> {
    zero_energy_diagnosis_at(op, 0.0, DEFAULT_THRESHOLD)
}

/// Integrates `(op - energy) w = 0` from the origin (Numerov) and fits the
/// tail on `[0.7 r_max, r_max]` against `{r^{ℓ+1}, 1, r^{-p}, r^{-p-1}, r^{-p-2}}`,
/// `p = max(ℓ,1)`. The two extra decaying powers absorb the potential's
/// tail corrections, which otherwise leak into the growth coefficient.
pub fn zero_energy_diagnosis_at(op: &ChannelOperator, energy: f64, threshold: f64) -> Result<ZeroEnergyDiagnosis> {
    let grid = op.grid();
    let ell = op.ell();
    let sol = regular_solution(grid, ell, op.potential(), energy)?;
    let peak = sol.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::NumericFailure("zero-energy integration degenerated".into()));
    }
    let w: Vec<f64> = sol.values.iter().map(|x| x / peak).collect();

    let r = grid.nodes();
    let r_max = grid.r_max();
    let start = grid.index_at(0.7 * r_max);
    let xs = &r[start..];
    let ys = &w[start..];
    let decay = ell.max(1) as i32;
    let cols = vec![
        xs.iter().map(|x| x.powi(ell as i32 + 1)).collect(),
        vec![1.0; xs.len()],
        xs.iter().map(|x| x.powi(-decay)).collect(),
        xs.iter().map(|x| x.powi(-decay - 1)).collect(),
        xs.iter().map(|x| x.powi(-decay - 2)).collect(),
    ];
    let (c, fit_residual) = lstsq(&cols, ys)?;
    if fit_residual > MAX_FIT_RESIDUAL {
        return Err(Error::TailWindowTooSmall(fit_residual));
    }
    Ok(classify(op, w, start, c[0], c[1], threshold, fit_residual))
}

/// Like [`zero_energy_diagnosis_at`], but for potentials (after subtracting
/// `energy`) that are negligible near `r_max`: `w` and `w'` at the last node
/// are matched exactly to the free pair `{r^{ℓ+1}, r^{-ℓ}}`. Far better
/// conditioned than a multi-term fit, so it converges cleanly under refinement.
/// `fit_residual` reports how far `w` strays from the matched pair on the
/// outer tenth of the grid.
pub fn free_tail_diagnosis_at(op: &ChannelOperator, energy: f64, threshold: f64) -> Result<ZeroEnergyDiagnosis> {
    let grid = op.grid();
    let ell = op.ell() as i32;
    let sol = regular_solution(grid, op.ell(), op.potential(), energy)?;
    let peak = sol.values.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::NumericFailure("zero-energy integration degenerated".into()));
    }
    let w: Vec<f64> = sol.values.iter().map(|x| x / peak).collect();
    let n = w.len();
    let h = grid.h();
    let big = grid.r_max();
    // Fourth-order backward difference for w'(R).
    let dw = (25.0 * w[n - 1] - 48.0 * w[n - 2] + 36.0 * w[n - 3] - 16.0 * w[n - 4] + 3.0 * w[n - 5]) / (12.0 * h);
    // w = A r^{ℓ+1} + B r^{-ℓ}; Wronskian of the pair is -(2ℓ+1).
    let l = ell as f64;
    let wr = -(2.0 * l + 1.0);
    let a = (w[n - 1] * (-l * big.powi(-ell - 1)) - dw * big.powi(-ell)) / wr;
    let b = (big.powi(ell + 1) * dw - (l + 1.0) * big.powi(ell) * w[n - 1]) / wr;
    let r = grid.nodes();
    let start = grid.index_at(0.9 * big);
    let (mut num, mut den) = (0.0, 0.0);
    for i in start..n {
        let model = a * r[i].powi(ell + 1) + b * r[i].powi(-ell);
        num += (w[i] - model).powi(2);
        den += w[i] * w[i];
    }
    let fit_residual = (num / den.max(1e-300)).sqrt();
    if fit_residual > MAX_FIT_RESIDUAL {
        return Err(Error::TailWindowTooSmall(fit_residual));
    }
    let window = grid.index_at(0.7 * big);
    Ok(classify(op, w, window, a, b, threshold, fit_residual))
}

fn classify(
    op: &ChannelOperator,
    w: Vec<f64>,
    start: usize,
    slope: f64,
    constant: f64,
    threshold: f64,
    fit_residual: f64,
) -> ZeroEnergyDiagnosis {
    let grid = op.grid();
    let ell = op.ell();
    let r = grid.nodes();
    let scale = w[start..].iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let slope_rel = slope.abs() * grid.r_max().powi(ell as i32 + 1) / scale;
    let const_rel = constant.abs() / scale;
    let kind = if slope_rel >= threshold {
        ZeroModeKind::None
    } else if const_rel >= threshold {
        ZeroModeKind::Resonance
    } else {
        ZeroModeKind::Eigenvalue
    };
    let v_integral = if ell == 0 {
        let s: f64 = (0..grid.n()).map(|i| op.potential()[i] * w[i] * r[i]).sum();
        4.0 * std::f64::consts::PI * s * grid.h()
    } else {
        0.0
    };
    ZeroEnergyDiagnosis {
        kind,
        solution: w,
        tail_slope: slope,
        tail_const: constant,
        v_integral,
        slope_rel,
        const_rel,
        threshold,
        fit_residual,
    }
}
