use nalgebra::DMatrix;
use num_complex::Complex64;
use radial_core::tridiag::TridiagLu;
use radial_core::{ChannelOperator, RadialGrid};

use crate::error::{Error, Result};
use crate::kernels::zero_energy_green;

type CMatrix = DMatrix<Complex64>;

/// Relative smallest singular value of `U + vR₀v` below which zero energy
/// is declared obstructed. A discretized threshold resonance leaves an
/// `O(h²)` defect (≈3e-4 at h = 0.05), generic potentials sit near 0.1.
pub const DEFAULT_OBSTRUCTION_TOL: f64 = 1e-3;

/// `R_V = R₀ - R₀v(U + vR₀v)^{-1}vR₀`, with `v = |V|^{1/2}` and
/// `U = sign V` (1 where `V = 0`). `r0` is the free resolvent as a matrix on
/// the same nodes as `potential`.
pub fn symmetric_resolvent(r0: &CMatrix, potential: &[f64], obstruction_tol: f64) -> Result<CMatrix> {
    let n = potential.len();
    if r0.nrows() != n || r0.ncols() != n {
        return Err(Error::InvalidArgument(format!("R₀ is {}×{}, potential has {n} nodes", r0.nrows(), r0.ncols())));
    }
    if potential.iter().all(|&v| v == 0.0) {
        return Ok(r0.clone());
    }
    let v: Vec<f64> = potential.iter().map(|x| x.abs().sqrt()).collect();
    let inner = CMatrix::from_fn(n, n, |i, j| {
        let u = if i == j {
            if potential[i] < 0.0 {
                -1.0
            } else {
                1.0
            }
        } else {
            0.0
        };
        Complex64::new(u, 0.0) + r0[(i, j)] * (v[i] * v[j])
    });
    let sv = inner.clone().singular_values();
    let rel = sv.min() / sv.max();
    if !(rel > obstruction_tol) {
        return Err(Error::ZeroEnergyObstruction(rel));
    }
    let inv = inner.lu().try_inverse().ok_or(Error::ZeroEnergyObstruction(0.0))?;
    // R₀v and vR₀ as column/row scalings.
    let r0v = CMatrix::from_fn(n, n, |i, j| r0[(i, j)] * v[j]);
    let vr0 = CMatrix::from_fn(n, n, |i, j| r0[(i, j)] * v[i]);
    Ok(r0 - r0v * inv * vr0)
}

/// Dense `(T + V - z²)^{-1}` on the interior nodes of the Dirichlet box,
/// `T` the channel's second-difference operator including `ℓ(ℓ+1)/r²`.
/// Pass `potential = None` for the free resolvent.
pub fn halfline_resolvent_block(
    grid: &RadialGrid,
    ell: usize,
    potential: Option<&[f64]>,
    z: Complex64,
) -> Result<CMatrix> {
    let zero = vec![0.0; grid.n()];
    let v = potential.unwrap_or(&zero);
    let op = radial_core::assemble_channel_operator(grid, ell, v)?;
    let m = op.diag().len();
    let z2 = z * z;
    let a = CMatrix::from_fn(m, m, |i, j| {
        if i == j {
            Complex64::new(op.diag()[i], 0.0) - z2
        } else if i + 1 == j || j + 1 == i {
            Complex64::new(op.off()[i.min(j)], 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    a.lu().try_inverse().ok_or_else(|| Error::NotInvertible(format!("H - z² at z = {z}")))
}

/// Matrix inverse of the unbounded half-line second difference (Dirichlet
/// at 0, bounded at ∞) restricted to the grid: `h·min(r_i, r_j)`.
pub fn halfline_zero_energy_block(grid: &RadialGrid) -> CMatrix {
    let r = grid.nodes();
    let h = grid.h();
    CMatrix::from_fn(r.len(), r.len(), |i, j| Complex64::new(h * zero_energy_green(r[i], r[j]), 0.0))
}

/// Kernel of `(H - z²)^{-1}` at `z = iρ` (so `z² = -ρ²` and everything is
/// real) for the channel operator `op`, restricted to the first `window`
/// nodes: `K_ij = [(H + ρ²)^{-1}]_ij / h`. One tridiagonal solve per column.
pub fn imaginary_axis_kernel(op: &ChannelOperator, rho: f64, window: usize) -> Result<CMatrix> {
    let m = op.diag().len();
    if window == 0 || window > m {
        return Err(Error::InvalidArgument(format!("window {window} outside 1..={m}")));
    }
    let diag: Vec<f64> = op.diag().iter().map(|d| d + rho * rho).collect();
    let lu = TridiagLu::new(op.off(), &diag, op.off())?;
    if lu.pivot_ratio() < 1e-14 {
        return Err(Error::NotInvertible(format!("H + ρ² at ρ = {rho}")));
    }
    let h = op.grid().h();
    let mut k = CMatrix::zeros(window, window);
    let mut e = vec![0.0; m];
    for j in 0..window {
        e.iter_mut().for_each(|x| *x = 0.0);
        e[j] = 1.0;
        lu.solve_in_place(&mut e);
        for i in 0..window {
            k[(i, j)] = Complex64::new(e[i] / h, 0.0);
        }
    }
    Ok(k)
}
