use serde::{Deserialize, Serialize};

use crate::error::{check_len, Error, Result};
use crate::grid::RadialGrid;
use crate::tridiag;

/// Central-difference realization of `-d²/dr² + ℓ(ℓ+1)/r² + V(r)` on the
/// interior nodes `r_1 .. r_{n-1}`; the last node `r_max` carries the
/// Dirichlet value, as does the implicit node at `r = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelOperator {
    grid: RadialGrid,
    ell: usize,
    potential: Vec<f64>,
    diag: Vec<f64>,
    off: Vec<f64>,
}

pub fn assemble_channel_operator(grid: &RadialGrid, ell: usize, potential: &[f64]) -> Result<ChannelOperator> {
    check_len("potential", potential.len(), grid.n())?;
    if potential.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("potential has non-finite samples".into()));
    }
    let h2 = grid.h() * grid.h();
    let l = (ell * (ell + 1)) as f64;
    let m = grid.n() - 1;
    let diag = (0..m)
        .map(|i| {
            let r = grid.nodes()[i];
            2.0 / h2 + l / (r * r) + potential[i]
        })
        .collect();
    Ok(ChannelOperator { grid: grid.clone(), ell, potential: potential.to_vec(), diag, off: vec![-1.0 / h2; m - 1] })
}

impl ChannelOperator {
    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn potential(&self) -> &[f64] {
        &self.potential
    }

    /// Diagonal of the interior matrix (length `n - 1`).
    pub fn diag(&self) -> &[f64] {
        &self.diag
    }

    /// Off-diagonal of the interior matrix (length `n - 2`).
    pub fn off(&self) -> &[f64] {
        &self.off
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn count_below(&self, x: f64) -> usize {
        tridiag::count_below(&self.diag, &self.off, x)
    }

    /// Same operator with the potential shifted by a constant.
    pub fn shifted(&self, shift: f64) -> ChannelOperator {
        let potential: Vec<f64> = self.potential.iter().map(|v| v + shift).collect();
        let diag = self.diag.iter().map(|d| d + shift).collect();
        ChannelOperator { potential, diag, ..self.clone() }
    }

    /// Pads an interior vector (length `n - 1`) with the Dirichlet zero.
    pub fn extend(&self, interior: &[f64]) -> Vec<f64> {
        let mut v = interior.to_vec();
        v.push(0.0);
        v
    }
}

/// Matrix–vector product on per-node samples. The boundary sample `v[n-1]`
/// is the Dirichlet value and is ignored; the returned boundary entry is 0.
pub fn apply_operator(op: &ChannelOperator, v: &[f64]) -> Result<Vec<f64>> {
    let n = op.grid.n();
    check_len("vector", v.len(), n)?;
    let m = n - 1;
    let mut out = vec![0.0; n];
    for i in 0..m {
        let mut s = op.diag[i] * v[i];
        if i > 0 {
            s += op.off[i - 1] * v[i - 1];
        }
        if i + 1 < m {
            s += op.off[i] * v[i + 1];
        }
        out[i] = s;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn free_channel_is_dirichlet_laplacian() {
        let g = make_grid(std::f64::consts::PI, 2000).unwrap();
        let op = assemble_channel_operator(&g, 0, &vec![0.0; 2000]).unwrap();
        let h2 = g.h() * g.h();
        assert!(op.diag().iter().all(|d| (d - 2.0 / h2).abs() < 1e-9));
        let e0 = tridiag::eigenvalue_by_index(op.diag(), op.off(), 0);
        assert!((e0 - 1.0).abs() < 1e-5, "{e0}");
    }

    #[test]
    fn zero_maps_to_zero() {
        let g = make_grid(5.0, 64).unwrap();
        let op = assemble_channel_operator(&g, 2, &g.sample(|r| -1.0 / (1.0 + r * r))).unwrap();
        assert!(apply_operator(&op, &vec![0.0; 64]).unwrap().iter().all(|&x| x == 0.0));
    }

    #[test]
    fn sine_is_an_eigenfunction() {
        let g = make_grid(std::f64::consts::PI, 1000).unwrap();
        let op = assemble_channel_operator(&g, 0, &vec![0.0; 1000]).unwrap();
        let s = g.sample(f64::sin);
        let out = apply_operator(&op, &s).unwrap();
        let err = (0..999).map(|i| (out[i] - s[i]).abs()).fold(0.0, f64::max);
        assert!(err < 0.2 * g.h() * g.h(), "{err}");
    }

    #[test]
    fn length_mismatch() {
        let g = make_grid(1.0, 16).unwrap();
        assert!(assemble_channel_operator(&g, 0, &[0.0; 15]).is_err());
        let op = assemble_channel_operator(&g, 0, &[0.0; 16]).unwrap();
        assert!(apply_operator(&op, &[0.0; 17]).is_err());
    }
}
