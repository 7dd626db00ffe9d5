use nalgebra::{DMatrix, DVector};
use radial_core::tridiag::{self, TridiagLu};
use radial_core::{inner_3d, ChannelOperator};
use serde::{Deserialize, Serialize};
use solitons::{alpha_derivative, NlsGroundState};

use crate::error::{Error, Result};
use crate::pair::{LinearizedPair, Sign};

fn radial_channel(pair: &LinearizedPair, sign: Sign) -> Result<&ChannelOperator> {
    pair.channel(sign, 0).ok_or_else(|| Error::InvalidArgument("pair has no ℓ = 0 channel".into()))
}

/// `h(μ) = ⟨(L₊ - μ)^{-1}φ, φ⟩` in the radial sector. The solve uses the
/// fourth-order Numerov discretization of `(L₊ - μ) w = rφ`, `w = r u`.
pub fn weinstein_h(pair: &LinearizedPair, mu: f64) -> Result<f64> {
    let op = radial_channel(pair, Sign::Plus)?;
    let lowest = tridiag::eigenvalue_by_index(op.diag(), op.off(), 0);
    if mu == lowest {
        return Err(Error::SingularSolve(format!("μ = {mu} is the lowest eigenvalue")));
    }
    if !(mu > lowest && mu < pair.alpha_sq) {
        return Err(Error::InvalidArgument(format!("μ = {mu} outside ({lowest}, {})", pair.alpha_sq)));
    }
    let g = op.grid();
    let (r, h) = (g.nodes(), g.h());
    let n = g.n();
    let m = n - 1;
    let q: Vec<f64> = op.potential().iter().map(|v| v - mu).collect();
    let s: Vec<f64> = r.iter().zip(&pair.profile.samples).map(|(r, p)| r * p).collect();
    let h2 = 1.0 / (h * h);
    let diag: Vec<f64> = (0..m).map(|i| 2.0 * h2 + 10.0 * q[i] / 12.0).collect();
    let sub: Vec<f64> = (1..m).map(|i| -h2 + q[i - 1] / 12.0).collect();
    let sup: Vec<f64> = (0..m - 1).map(|i| -h2 + q[i + 1] / 12.0).collect();
    let rhs: Vec<f64> = (0..m)
        .map(|i| {
            let left = if i == 0 { 0.0 } else { s[i - 1] };
            (left + 10.0 * s[i] + s[i + 1]) / 12.0
        })
        .collect();
    let lu = TridiagLu::new(&sub, &diag, &sup).map_err(|e| Error::SingularSolve(e.to_string()))?;
    if lu.pivot_ratio() < 1e-14 {
        return Err(Error::SingularSolve(format!("μ = {mu} is numerically an eigenvalue")));
    }
    let w = lu.solve(&rhs);
    let total: f64 = (0..m).map(|i| w[i] * s[i]).sum();
    Ok(4.0 * std::f64::consts::PI * total * h)
}

/// `-(1/2α)⟨∂_αφ, φ⟩`, with `∂_αφ` by differencing shot profiles.
pub fn h0_from_alpha_derivative(profile: &NlsGroundState) -> Result<f64> {
    let da = alpha_derivative(profile)?;
    Ok(-inner_3d(&profile.grid, &da, &profile.samples)? / (2.0 * profile.alpha))
}

/// Smallest eigenvalue of `L₊` (ℓ = 0) restricted to the complement of `rφ`,
/// i.e. of `P L₊ P` on `(rφ)^⊥`. Those eigenvalues are the roots of
/// `pᵀ(L₊ - μ)^{-1}p`; the smallest lies between the two lowest
/// eigenvalues of `L₊`, where that function increases from -∞ to +∞.
pub fn mu0(pair: &LinearizedPair) -> Result<f64> {
    let op = radial_channel(pair, Sign::Plus)?;
    let (d, e) = (op.diag(), op.off());
    let m = d.len();
    let p: Vec<f64> = op.grid().nodes()[..m].iter().zip(&pair.profile.samples).map(|(r, phi)| r * phi).collect();
    let l0 = tridiag::eigenvalue_by_index(d, e, 0);
    let l1 = tridiag::eigenvalue_by_index(d, e, 1);
    let secular = |mu: f64| -> Result<f64> {
        let x = tridiag::solve_shifted(d, e, mu, &p)?;
        Ok(x.iter().zip(&p).map(|(a, b)| a * b).sum())
    };
    let pad = 1e-13 * (l0.abs() + l1.abs()).max(1.0);
    let (mut lo, mut hi) = (l0 + pad, l1 - pad);
    if secular(lo)? > 0.0 || secular(hi)? < 0.0 {
        return Err(Error::NumericFailure("constrained eigenvalue not bracketed".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= 1e-14 * mid.abs().max(1.0) {
            break;
        }
        if secular(mid)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn dense(op: &ChannelOperator) -> DMatrix<f64> {
    let m = op.diag().len();
    let mut a = DMatrix::from_diagonal(&DVector::from_column_slice(op.diag()));
    for i in 0..m - 1 {
        a[(i, i + 1)] = op.off()[i];
        a[(i + 1, i)] = op.off()[i];
    }
    a
}

/// Smallest eigenvalue of `√L₋ L₊ √L₋` on the complement of the ground state
/// of `L₋` (ℓ = 0), by dense eigendecomposition. Intended for moderate grids.
pub fn sqrt_form_min_eigenvalue(pair: &LinearizedPair) -> Result<f64> {
    let lm = dense(radial_channel(pair, Sign::Minus)?);
    let lp = dense(radial_channel(pair, Sign::Plus)?);
    let dim = lm.nrows();
    let eig = lm.symmetric_eigen();
    let mut order: Vec<usize> = (0..eig.eigenvalues.len()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let keep = &order[1..];
    if eig.eigenvalues[keep[0]] <= 0.0 {
        return Err(Error::NumericFailure("L₋ is not positive off its ground state".into()));
    }
    let q = DMatrix::from_fn(dim, keep.len(), |i, j| eig.eigenvectors[(i, keep[j])]);
    let root = DVector::from_iterator(keep.len(), keep.iter().map(|&j| eig.eigenvalues[j].sqrt()));
    let inner = q.transpose() * lp * &q;
    let form = DMatrix::from_fn(keep.len(), keep.len(), |i, j| root[i] * inner[(i, j)] * root[j]);
    Ok(form.symmetric_eigenvalues().min())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Instability {
    pub unstable: bool,
    /// `2/σ - d`, the exponent in `‖φ_α‖₂² = α^{2/σ-d}‖φ₁‖₂²`.
    pub mass_scaling_exponent: f64,
}

pub fn instability_criterion(sigma: f64, d: usize) -> Result<Instability> {
    if !(sigma > 0.0) || d == 0 {
        return Err(Error::InvalidArgument(format!("need σ > 0 and d ≥ 1, got σ = {sigma}, d = {d}")));
    }
    let sd = sigma * d as f64;
    Ok(Instability { unstable: sd > 2.0, mass_scaling_exponent: (2.0 - sd) / sigma })
}
