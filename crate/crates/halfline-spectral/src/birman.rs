use nalgebra::DMatrix;
use radial_core::RadialGrid;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsChannel {
    pub ell: usize,
    pub count: usize,
    /// Largest eigenvalues of `K_ℓ`, descending.
    pub top_eigenvalues: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsCount {
    pub channels: Vec<BsChannel>,
    /// `Σ (2ℓ+1)·count_ℓ`.
    pub total: usize,
    pub threshold_eps: f64,
}

/// Eigenvalues (descending) of `K_ℓ = |V|^{1/2} G_ℓ |V|^{1/2}` with the
/// zero-energy half-line kernel `G_ℓ(r,s) = min^{ℓ+1} max^{-ℓ}/(2ℓ+1)`,
/// quadrature-weighted so that the matrix is symmetric.
pub fn bs_kernel_eigenvalues(potential: &[f64], ell: usize, grid: &RadialGrid) -> Result<Vec<f64>> {
    let n = grid.n();
    if potential.len() != n {
        return Err(Error::InvalidArgument("potential length does not match the grid".into()));
    }
    let vmax = potential.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if potential.iter().any(|&v| v > 1e-14 * vmax.max(1e-300)) {
        return Err(Error::InvalidArgument("Birman–Schwinger counting needs V ≤ 0".into()));
    }
    // Nodes with no potential contribute zero rows.
    let idx: Vec<usize> = (0..n).filter(|&i| potential[i] != 0.0).collect();
    if idx.is_empty() {
        return Ok(vec![]);
    }
    let r = grid.nodes();
    let s: Vec<f64> = idx.iter().map(|&i| (grid.weights()[i] * potential[i].abs()).sqrt()).collect();
    let m = idx.len();
    let l = ell as i32;
    let norm = 1.0 / (2 * ell + 1) as f64;
    let k = DMatrix::from_fn(m, m, |a, b| {
        let (x, y) = (r[idx[a]], r[idx[b]]);
        let (lo, hi) = if x < y { (x, y) } else { (y, x) };
        s[a] * s[b] * norm * lo * (lo / hi).powi(l)
    });
    let asym = (&k - k.transpose()).amax();
    assert!(asym <= 1e-10 * k.amax(), "non-symmetric Birman–Schwinger assembly");
    let mut ev: Vec<f64> = k.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| b.total_cmp(a));
    Ok(ev)
}

pub fn birman_schwinger_count(
    potential: &[f64],
    ell_max: usize,
    grid: &RadialGrid,
    threshold_eps: f64,
) -> Result<BsCount> {
    if !(0.0..1.0).contains(&threshold_eps) {
        return Err(Error::InvalidArgument(format!("threshold_eps must be in [0,1), got {threshold_eps}")));
    }
    let channels = (0..=ell_max)
        .into_par_iter()
        .map(|ell| {
            let ev = bs_kernel_eigenvalues(potential, ell, grid)?;
            let count = ev.iter().take_while(|&&e| e >= 1.0 - threshold_eps).count();
            Ok(BsChannel { ell, count, top_eigenvalues: ev.into_iter().take(4).collect() })
        })
        .collect::<Result<Vec<_>>>()?;
    let total = channels.iter().map(|c| (2 * c.ell + 1) * c.count).sum();
    Ok(BsCount { channels, total, threshold_eps })
}
