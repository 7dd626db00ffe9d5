use radial_core::fit::{linear_fit, loglog_slope};
use radial_core::{tridiag, ChannelOperator};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Eigenvalues below this magnitude use the `λ → 0` limits `1` and `t`.
const ZERO_EIGENVALUE: f64 = 1e-10;

/// `cos(t√H)` and `sin(t√H)/√H` for a channel operator, through its full
/// eigendecomposition (computed once). Vectors are per-node channel samples
/// (`w = rψ`); the Dirichlet node is ignored on input and zero on output.
#[derive(Debug, Clone)]
pub struct LinearPropagator {
    values: Vec<f64>,
    vectors: Vec<Vec<f64>>,
    n: usize,
}

impl LinearPropagator {
    pub fn new(op: &ChannelOperator) -> Self {
        let (values, vectors) = tridiag::full_eigen(op.diag(), op.off());
        LinearPropagator { values, vectors, n: op.grid().n() }
    }

    /// Spectral propagator restricted to the `count` lowest eigenpairs
    /// (`O(count·n)` work); exact for inputs in their span, see
    /// [`spectral_residual`](Self::spectral_residual).
    pub fn lowest(op: &ChannelOperator, count: usize) -> Result<Self> {
        let m = op.diag().len();
        if count == 0 || count > m {
            return Err(Error::InvalidArgument(format!("count {count} outside 1..={m}")));
        }
        let values: Vec<f64> =
            (0..count).into_par_iter().map(|k| tridiag::eigenvalue_by_index(op.diag(), op.off(), k)).collect();
        let vectors = values.par_iter().map(|&l| tridiag::inverse_iteration(op.diag(), op.off(), l)).collect();
        Ok(LinearPropagator { values, vectors, n: op.grid().n() })
    }

    /// `‖f - Pf‖/‖f‖` for `P` the projection onto the retained eigenvectors.
    pub fn spectral_residual(&self, f: &[f64]) -> Result<f64> {
        self.check(f)?;
        let a = self.coefficients(f);
        let total: f64 = f[..self.n - 1].iter().map(|x| x * x).sum();
        let kept: f64 = a.iter().map(|x| x * x).sum();
        Ok(((total - kept).max(0.0) / total.max(1e-300)).sqrt())
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.values
    }

    pub fn eigenvector(&self, j: usize) -> &[f64] {
        &self.vectors[j]
    }

    fn coefficients(&self, f: &[f64]) -> Vec<f64> {
        self.vectors.par_iter().map(|e| e.iter().zip(f).map(|(a, b)| a * b).sum()).collect()
    }

    fn check(&self, f: &[f64]) -> Result<()> {
        if f.len() != self.n {
            return Err(Error::InvalidArgument(format!("vector has {} samples, grid has {}", f.len(), self.n)));
        }
        Ok(())
    }

    /// `cos(t√H)f + sin(t√H)/√H g₀`; negative eigenvalues take the
    /// hyperbolic branch.
    pub fn propagate(&self, f: &[f64], g0: &[f64], t: f64) -> Result<Vec<f64>> {
        self.propagate_filtered(f, g0, t, false)
    }

    /// As [`propagate`](Self::propagate), but with the components along
    /// negative eigenvalues removed (the exact `P^⊥` of the bound states).
    pub fn propagate_continuous(&self, f: &[f64], g0: &[f64], t: f64) -> Result<Vec<f64>> {
        self.propagate_filtered(f, g0, t, true)
    }

    fn propagate_filtered(&self, f: &[f64], g0: &[f64], t: f64, drop_negative: bool) -> Result<Vec<f64>> {
        self.check(f)?;
        self.check(g0)?;
        if t == 0.0 && !drop_negative {
            return Ok(f.to_vec());
        }
        let a = self.coefficients(f);
        let b = self.coefficients(g0);
        let mut out = vec![0.0; self.n];
        for (j, &lam) in self.values.iter().enumerate() {
            if drop_negative && lam < -ZERO_EIGENVALUE {
                continue;
            }
            let (c, s) = if lam.abs() < ZERO_EIGENVALUE {
                (1.0, t)
            } else if lam > 0.0 {
                let w = lam.sqrt();
                ((t * w).cos(), (t * w).sin() / w)
            } else {
                let w = (-lam).sqrt();
                ((t * w).cosh(), (t * w).sinh() / w)
            };
            let coef = c * a[j] + s * b[j];
            if coef != 0.0 {
                out.iter_mut().zip(&self.vectors[j]).for_each(|(o, e)| *o += coef * e);
            }
        }
        Ok(out)
    }
}

/// Least-squares slope of `log value` against `log t` over `t ∈ [t0, t1]`.
pub fn fit_decay(times: &[f64], values: &[f64], window: (f64, f64)) -> Result<f64> {
    if times.len() != values.len() {
        return Err(Error::InvalidArgument("times and values differ in length".into()));
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) =
        times.iter().zip(values).filter(|(t, _)| **t >= window.0 && **t <= window.1).map(|(t, v)| (*t, *v)).unzip();
    if xs.len() < 2 {
        return Err(Error::InvalidArgument(format!("fewer than two samples in {window:?}")));
    }
    if xs[0] <= 0.0 || ys.iter().any(|v| !(*v > 0.0)) {
        return Err(Error::InvalidArgument("decay fit needs positive times and values".into()));
    }
    Ok(loglog_slope(&xs, &ys)?)
}

/// Rank-one/remainder split of `sin(t√H)/√H P^⊥f` near the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineSplit {
    pub times: Vec<f64>,
    /// `⟨u(t), ∂_aφ⟩/⟨∂_aφ, ∂_aφ⟩` on `r ≤ window`.
    pub rank_one_coeff: Vec<f64>,
    /// Late-time limit from `coeff(t) ≈ c∞ + b/t`.
    pub c_infinity: f64,
    /// `sup_{r ≤ window} |u(t) - c∞∂_aφ|`.
    pub remainder_sup: Vec<f64>,
    pub window: f64,
}

/// Evolves `(0, f)` with the negative modes removed and splits the output
/// near the origin into a multiple of the resonance `∂_aφ` and a remainder.
/// `f`, `g` and `dphi_da` are radial (`ψ`-form) samples; `g` is the unit ground
/// state, used to project `f`.
pub fn sine_split(
    prop: &LinearPropagator,
    grid: &radial_core::RadialGrid,
    g: &[f64],
    dphi_da: &[f64],
    f: &[f64],
    times: &[f64],
    window: f64,
) -> Result<SineSplit> {
    let n = grid.n();
    if [g.len(), dphi_da.len(), f.len()].iter().any(|&l| l != n) {
        return Err(Error::InvalidArgument("samples must match the grid".into()));
    }
    if times.len() < 2 || times.iter().any(|t| !(*t > 0.0)) {
        return Err(Error::InvalidArgument("need at least two positive times".into()));
    }
    if !(window > 0.0 && window <= grid.r_max()) {
        return Err(Error::InvalidArgument(format!("window {window} outside (0, r_max]")));
    }
    let r = grid.nodes();
    let fg = radial_core::inner_3d(grid, f, g)?;
    let wf: Vec<f64> = (0..n).map(|i| r[i] * (f[i] - fg * g[i])).collect();
    let zero = vec![0.0; n];
    let last = grid.index_at(window) + 1;
    let dd: f64 = (0..last).map(|i| dphi_da[i] * dphi_da[i] * r[i] * r[i]).sum();
    let outputs = times
        .par_iter()
        .map(|&t| {
            let w = prop.propagate_continuous(&zero, &wf, t)?;
            Ok((0..last).map(|i| w[i] / r[i]).collect::<Vec<f64>>())
        })
        .collect::<Result<Vec<_>>>()?;
    let coeff: Vec<f64> =
        outputs.iter().map(|u| (0..last).map(|i| u[i] * dphi_da[i] * r[i] * r[i]).sum::<f64>() / dd).collect();
    let inv_t: Vec<f64> = times.iter().map(|t| 1.0 / t).collect();
    let (_, c_infinity) = linear_fit(&inv_t, &coeff)?;
    let remainder_sup =
        outputs.iter().map(|u| (0..last).map(|i| (u[i] - c_infinity * dphi_da[i]).abs()).fold(0.0, f64::max)).collect();
    Ok(SineSplit { times: times.to_vec(), rank_one_coeff: coeff, c_infinity, remainder_sup, window })
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::{assemble_channel_operator, make_grid};

    #[test]
    fn free_dirichlet_single_mode() {
        let g = make_grid(3.0, 120).unwrap();
        let op = assemble_channel_operator(&g, 0, &vec![0.0; 120]).unwrap();
        let p = LinearPropagator::new(&op);
        let e0 = op.extend(p.eigenvector(0));
        let s = p.eigenvalues()[0].sqrt();
        assert_eq!(p.propagate(&e0, &vec![0.0; 120], 0.0).unwrap(), e0);
        for t in [0.3, 1.0, 4.0] {
            let out = p.propagate(&e0, &vec![0.0; 120], t).unwrap();
            let err = out.iter().zip(&e0).map(|(a, b)| (a - (t * s).cos() * b).abs()).fold(0.0, f64::max);
            assert!(err < 1e-10, "{t} {err}");
        }
    }

    #[test]
    fn decay_fit_on_power_laws() {
        let t: Vec<f64> = (1..=50).map(|i| i as f64).collect();
        let a: Vec<f64> = t.iter().map(|t| 7.0 / t).collect();
        let b: Vec<f64> = t.iter().map(|t| 3.0 * t.powf(-1.5)).collect();
        assert!((fit_decay(&t, &a, (2.0, 40.0)).unwrap() + 1.0).abs() < 1e-10);
        assert!((fit_decay(&t, &b, (2.0, 40.0)).unwrap() + 1.5).abs() < 1e-10);
        let mut c = a.clone();
        c[10] = 0.0;
        assert!(fit_decay(&t, &c, (2.0, 40.0)).is_err());
    }
}
