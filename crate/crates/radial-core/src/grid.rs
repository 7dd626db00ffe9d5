use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};

/// Uniform grid `r_i = i·h`, `i = 1..=n`, on `(0, r_max]`.
///
/// Every node carries weight `h`: the trapezoid rule on `[0, r_max]` for
/// functions vanishing at both ends, and the weights sum to `r_max` exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    r_max: f64,
    h: f64,
}

pub fn make_grid(r_max: f64, n: usize) -> Result<RadialGrid> {
    if !(r_max > 0.0) || !r_max.is_finite() {
        return Err(Error::InvalidArgument(format!("r_max must be positive, got {r_max}")));
    }
    if n < 16 {
        return Err(Error::InvalidArgument(format!("need at least 16 nodes, got {n}")));
    }
    let h = r_max / n as f64;
    let mut nodes: Vec<f64> = (1..=n).map(|i| i as f64 * h).collect();
    nodes[n - 1] = r_max;
    Ok(RadialGrid { nodes, weights: vec![h; n], r_max, h })
}

impl RadialGrid {
    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn r_max(&self) -> f64 {
        self.r_max
    }

    pub fn n(&self) -> usize {
        self.nodes.len()
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    /// Samples `f` at every node.
    pub fn sample(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        self.nodes.iter().map(|&r| f(r)).collect()
    }

    /// Index of the last node with `r <= radius` (0 if none).
    pub fn index_at(&self, radius: f64) -> usize {
        let i = (radius / self.h + 1e-9).floor() as usize;
        i.clamp(1, self.n()) - 1
    }
}

/// Quadrature-weighted sum `Σ w_i s_i`.
pub fn integrate(grid: &RadialGrid, samples: &[f64]) -> Result<f64> {
    check_len("samples", samples.len(), grid.n())?;
    Ok(grid.weights.iter().zip(samples).map(|(w, s)| w * s).sum())
}

/// Radial inner product in three dimensions, `4π ∫ f g r² dr`.
pub fn inner_3d(grid: &RadialGrid, f: &[f64], g: &[f64]) -> Result<f64> {
    check_len("f", f.len(), grid.n())?;
    check_len("g", g.len(), grid.n())?;
    let s: f64 =
        grid.nodes.iter().zip(&grid.weights).zip(f.iter().zip(g)).map(|((r, w), (a, b))| w * a * b * r * r).sum();
    Ok(4.0 * std::f64::consts::PI * s)
}
