//! Small dense least-squares fits used for tail and decay diagnostics.

use crate::error::{Error, Result};

/// Least squares `y ≈ Σ_k c_k columns[k]`. Returns the coefficients and the
/// residual RMS relative to the RMS of `y`.
pub fn lstsq(columns: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, f64)> {
    let p = columns.len();
    let m = y.len();
    if p == 0 || m < p || columns.iter().any(|c| c.len() != m) {
        return Err(Error::InvalidArgument("least squares: inconsistent shapes".into()));
    }
    // Column scaling, then modified Gram–Schmidt QR with a second
    // orthogonalization pass (tail bases are close to collinear).
    let scales: Vec<f64> = columns.iter().map(|c| c.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300)).collect();
    let mut q: Vec<Vec<f64>> = columns.iter().zip(&scales).map(|(c, s)| c.iter().map(|x| x / s).collect()).collect();
    let mut rmat = vec![vec![0.0; p]; p];
    for k in 0..p {
        for _pass in 0..2 {
            for j in 0..k {
                let d: f64 = q[j].iter().zip(&q[k]).map(|(a, b)| a * b).sum();
                rmat[j][k] += d;
                let (done, rest) = q.split_at_mut(k);
                rest[0].iter_mut().zip(&done[j]).for_each(|(b, a)| *b -= d * a);
            }
        }
        let nrm = q[k].iter().map(|x| x * x).sum::<f64>().sqrt();
        if nrm < 1e-13 {
            return Err(Error::NumericFailure("least squares: rank-deficient basis".into()));
        }
        rmat[k][k] = nrm;
        q[k].iter_mut().for_each(|x| *x /= nrm);
    }
    let qty: Vec<f64> = q.iter().map(|c| c.iter().zip(y).map(|(a, b)| a * b).sum()).collect();
    let mut coef = vec![0.0; p];
    for k in (0..p).rev() {
        let s: f64 = (k + 1..p).map(|j| rmat[k][j] * coef[j]).sum();
        coef[k] = (qty[k] - s) / rmat[k][k];
    }
    let res: f64 = (0..m)
        .map(|i| {
            let fit2: f64 = (0..p).map(|k| coef[k] * columns[k][i] / scales[k]).sum::<f64>();
            (y[i] - fit2).powi(2)
        })
        .sum();
    let ynorm: f64 = y.iter().map(|x| x * x).sum();
    for (c, s) in coef.iter_mut().zip(&scales) {
        *c /= s;
    }
    Ok((coef, (res / ynorm.max(1e-300)).sqrt()))
}

/// Least-squares line `y ≈ slope·x + intercept`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> Result<(f64, f64)> {
    let (c, _) = lstsq(&[x.to_vec(), vec![1.0; x.len()]], y)?;
    Ok((c[0], c[1]))
}

/// Fitted exponent `p` of `|y| ~ x^p`.
pub fn loglog_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.iter().chain(y).any(|v| *v <= 0.0 || !v.is_finite()) {
        return Err(Error::InvalidArgument("log-log fit needs positive finite data".into()));
    }
    let lx: Vec<f64> = x.iter().map(|v| v.ln()).collect();
    let ly: Vec<f64> = y.iter().map(|v| v.ln()).collect();
    Ok(linear_fit(&lx, &ly)?.0)
}
