use nalgebra::DMatrix;
use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};

type CMatrix = DMatrix<Complex64>;

/// Entrywise fit `K(z) ≈ c₋₂/z² + c₋₁/z + c₀ + c₁z`. The matrices are
/// whatever the sampler returns (sampled kernels or operator blocks); this is
/// an entrywise surrogate for an operator-valued expansion.
#[derive(Debug, Clone)]
pub struct LaurentCoefficients {
    pub c_minus2: CMatrix,
    pub c_minus1: CMatrix,
    pub c0: CMatrix,
    pub c1: CMatrix,
    /// `‖K - fit‖_F / ‖K‖_F` over all samples.
    pub fit_residual: f64,
    /// Geometric mean of `|z|` over the samples; the fit runs in `z/scale`.
    pub scale: f64,
}

const MAX_CONDITION: f64 = 1e10;

/// `z = iρ` with `ρ` log-spaced on `[rho_lo, rho_hi]`.
pub fn ray_samples(rho_lo: f64, rho_hi: f64, count: usize) -> Result<Vec<Complex64>> {
    if !(rho_lo > 0.0 && rho_hi > rho_lo) || count < 2 {
        return Err(Error::InvalidArgument(format!("bad ray [{rho_lo}, {rho_hi}] × {count}")));
    }
    let step = (rho_hi / rho_lo).ln() / (count - 1) as f64;
    Ok((0..count).map(|k| Complex64::new(0.0, rho_lo * (step * k as f64).exp())).collect())
}

pub fn laurent_fit<F>(sampler: F, z_samples: &[Complex64]) -> Result<LaurentCoefficients>
where
    F: Fn(Complex64) -> Result<CMatrix> + Sync,
{
    let m = z_samples.len();
    if m < 4 {
        return Err(Error::InvalidArgument(format!("need at least 4 samples, got {m}")));
    }
    if let Some(z) = z_samples.iter().find(|z| z.norm() == 0.0 || (z.im == 0.0 && z.re > 0.0)) {
        return Err(Error::InvalidArgument(format!("sample {z} lies at 0 or on the positive real axis")));
    }
    let scale = (z_samples.iter().map(|z| z.norm().ln()).sum::<f64>() / m as f64).exp();
    let design = CMatrix::from_fn(m, 4, |i, k| {
        let zeta = z_samples[i] / scale;
        zeta.powi(k as i32 - 2)
    });
    let svd = design.clone().svd(true, true);
    let (mx, mn) = (svd.singular_values.max(), svd.singular_values.min());
    let cond = if mn > 0.0 { mx / mn } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(Error::IllConditionedFit(cond));
    }
    let pinv = svd.pseudo_inverse(0.0).map_err(|_| Error::IllConditionedFit(cond))?;

    let values = z_samples.par_iter().map(|&z| sampler(z)).collect::<Result<Vec<_>>>()?;
    let (rows, cols) = values[0].shape();
    if values.iter().any(|v| v.shape() != (rows, cols)) {
        return Err(Error::InvalidArgument("sampler returned inconsistent shapes".into()));
    }
    let mut coef: Vec<CMatrix> = (0..4).map(|_| CMatrix::zeros(rows, cols)).collect();
    let (mut res, mut tot) = (0.0, 0.0);
    for i in 0..rows {
        for j in 0..cols {
            let y = nalgebra::DVector::from_iterator(m, values.iter().map(|v| v[(i, j)]));
            let a = &pinv * &y;
            res += (&y - &design * &a).norm_squared();
            tot += y.norm_squared();
            for k in 0..4 {
                coef[k][(i, j)] = a[k];
            }
        }
    }
    let mut it = coef.into_iter();
    let mut next = |p: i32| it.next().unwrap() * Complex64::new(scale.powi(p), 0.0);
    let (c_minus2, c_minus1, c0, c1) = (next(2), next(1), next(0), next(-1));
    Ok(LaurentCoefficients { c_minus2, c_minus1, c0, c1, fit_residual: (res / tot.max(1e-300)).sqrt(), scale })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn synthetic_recovery() {
        let c = CMatrix::from_fn(3, 3, |i, j| Complex64::new(i as f64 - j as f64, 0.5));
        let d = CMatrix::from_fn(3, 3, |i, j| Complex64::new(1.0 + (i * j) as f64, -1.0));
        let zs = ray_samples(1e-3, 1e-1, 8).unwrap();
        let fit = laurent_fit(|z| Ok(&c / (z * z) + &d), &zs).unwrap();
        assert!((&fit.c_minus2 - &c).norm() < 1e-10 * c.norm());
        assert!((&fit.c0 - &d).norm() < 1e-10 * d.norm());
        assert!(fit.c_minus1.norm() < 1e-10 && fit.fit_residual < 1e-12);
    }

    #[test]
    fn rejects_bad_samples() {
        let zs = vec![Complex64::new(0.1, 0.0); 5];
        assert!(laurent_fit(|_| Ok(CMatrix::zeros(1, 1)), &zs).is_err());
        let zs = ray_samples(1e-3, 1e-1, 3).unwrap();
        assert!(laurent_fit(|_| Ok(CMatrix::zeros(1, 1)), &zs).is_err());
    }
}
