use halfline_spectral::ZeroModeKind;
use radial_core::fit::loglog_slope;
use radial_core::{apply_operator, assemble_channel_operator, RadialGrid};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Sup of `H(rf)` relative to sup of `V·rf` above which `f` is rejected.
const MODE_TOL: f64 = 0.05;
/// `|∫Vf|` relative to `∫|Vf|` below which the integral counts as zero.
const INTEGRAL_TOL: f64 = 1e-3;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ZeroModeReport {
    /// `None` when the two signatures disagree.
    pub kind: ZeroModeKind,
    /// `∫_{R³} V f` (radial measure); identically 0 for `ℓ ≥ 1`.
    pub v_integral: f64,
    /// `|∫Vf| / ∫|Vf|` (0 for `ℓ ≥ 1`).
    pub v_integral_rel: f64,
    /// Fitted `p` in `|f| ~ r^p` on `[r_max/2, r_max]`.
    pub tail_exponent: f64,
    pub residual: f64,
}

/// Classifies a numerical zero mode `f` (radial samples) of `-Δ + V` in
/// channel `ℓ`: a resonance has `∫Vf ≠ 0` and an `r^{-1}` tail, an
/// eigenfunction has `∫Vf = 0` and decays at least like `r^{-2}`.
pub fn classify_zero_mode(potential: &[f64], f: &[f64], grid: &RadialGrid, ell: usize) -> Result<ZeroModeReport> {
    let n = grid.n();
    if potential.len() != n || f.len() != n {
        return Err(Error::InvalidArgument("potential and mode must match the grid".into()));
    }
    let r = grid.nodes();
    let w: Vec<f64> = r.iter().zip(f).map(|(r, f)| r * f).collect();
    let op = assemble_channel_operator(grid, ell, potential)?;
    let hw = apply_operator(&op, &w)?;
    // The last interior row sees the Dirichlet wall, which a zero mode ignores.
    let inner = n - 2;
    let sup = |v: &mut dyn Iterator<Item = f64>| v.fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = sup(&mut (0..inner).map(|i| potential[i] * w[i]));
    let residual = sup(&mut hw[..inner].iter().copied()) / scale.max(1e-300);
    if !(residual <= MODE_TOL) {
        return Err(Error::NotAZeroMode(residual));
    }

    let four_pi_h = 4.0 * std::f64::consts::PI * grid.h();
    let (v_integral, v_integral_rel) = if ell == 0 {
        let s: f64 = (0..n).map(|i| potential[i] * f[i] * r[i] * r[i]).sum();
        let a: f64 = (0..n).map(|i| (potential[i] * f[i]).abs() * r[i] * r[i]).sum();
        (four_pi_h * s, s.abs() / a.max(1e-300))
    } else {
        (0.0, 0.0)
    };

    let start = grid.index_at(0.5 * grid.r_max());
    let xs = &r[start..];
    let ys: Vec<f64> = f[start..].iter().map(|x| x.abs()).collect();
    let tail_exponent = loglog_slope(xs, &ys)?;

    let significant = v_integral_rel > INTEGRAL_TOL;
    let kind = if significant && (tail_exponent + 1.0).abs() < 0.15 {
        ZeroModeKind::Resonance
    } else if !significant && tail_exponent < -1.9 {
        ZeroModeKind::Eigenvalue
    } else {
        ZeroModeKind::None
    };
    Ok(ZeroModeReport { kind, v_integral, v_integral_rel, tail_exponent, residual })
}
