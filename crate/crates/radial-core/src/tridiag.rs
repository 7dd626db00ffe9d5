//! Symmetric and general tridiagonal kernels: Sturm counts via `LDLᵀ`
//! pivots, bisection, inverse iteration, and a pivoted `LU` solve.

use rayon::prelude::*;

use crate::error::{Error, Result};

const PIVMIN: f64 = 1e-290;

/// Number of eigenvalues of the symmetric tridiagonal `(diag, off)` that are
/// strictly below `x`. Counts negative pivots of `T - x = LDLᵀ`, which is the
/// sign-change count of the shooting recurrence without its overflow.
pub fn count_below(diag: &[f64], off: &[f64], x: f64) -> usize {
    let mut count = 0;
    let mut q = 1.0;
    for i in 0..diag.len() {
        let e2 = if i == 0 { 0.0 } else { off[i - 1] * off[i - 1] };
        q = diag[i] - x - e2 / q;
        if q.abs() < PIVMIN {
            q = -PIVMIN;
        }
        if q < 0.0 {
            count += 1;
        }
    }
    count
}

pub fn gershgorin(diag: &[f64], off: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..diag.len() {
        let mut r = 0.0;
        if i > 0 {
            r += off[i - 1].abs();
        }
        if i < off.len() {
            r += off[i].abs();
        }
        lo = lo.min(diag[i] - r);
        hi = hi.max(diag[i] + r);
    }
    (lo, hi)
}

fn bisect_index(diag: &[f64], off: &[f64], k: usize, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..256 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= 2.0 * f64::EPSILON * (lo.abs() + hi.abs()) {
            break;
        }
        if count_below(diag, off, mid) > k {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// The `k`-th smallest eigenvalue (0-based), to full double precision.
pub fn eigenvalue_by_index(diag: &[f64], off: &[f64], k: usize) -> f64 {
    let (lo, hi) = gershgorin(diag, off);
    let pad = 1e-12 * (lo.abs() + hi.abs()) + 1e-300;
    bisect_index(diag, off, k, lo - pad, hi + pad)
}

/// All eigenvalues in the half-open interval `[a, b)`, ascending.
pub fn eigenvalues_in(diag: &[f64], off: &[f64], a: f64, b: f64) -> Vec<f64> {
    let first = count_below(diag, off, a);
    let last = count_below(diag, off, b);
    let (lo, hi) = gershgorin(diag, off);
    let lo = lo.min(a) - 1e-12 * (1.0 + lo.abs());
    let hi = hi.max(b) + 1e-12 * (1.0 + hi.abs());
    (first..last).map(|k| bisect_index(diag, off, k, lo, hi)).collect()
}

/// Pivoted `LU` factorization of a general tridiagonal matrix.
#[derive(Debug, Clone)]
pub struct TridiagLu {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swapped: Vec<bool>,
}

impl TridiagLu {
    /// Factors the matrix with sub-diagonal `sub`, diagonal `diag` and
    /// super-diagonal `sup`. Exactly zero pivots are reported as singular.
    pub fn new(sub: &[f64], diag: &[f64], sup: &[f64]) -> Result<Self> {
        let m = diag.len();
        if m == 0 || sub.len() + 1 != m || sup.len() + 1 != m {
            return Err(Error::InvalidArgument("tridiagonal band lengths are inconsistent".into()));
        }
        let mut dl = sub.to_vec();
        let mut d = diag.to_vec();
        let mut du = sup.to_vec();
        let mut du2 = vec![0.0; m.saturating_sub(2)];
        let mut swapped = vec![false; m.saturating_sub(1)];
        for i in 0..m - 1 {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    return Err(Error::NumericFailure(format!("singular tridiagonal at row {i}")));
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < m {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swapped[i] = true;
            }
        }
        if d[m - 1] == 0.0 {
            return Err(Error::NumericFailure(format!("singular tridiagonal at row {}", m - 1)));
        }
        Ok(TridiagLu { dl, d, du, du2, swapped })
    }

    /// Smallest pivot magnitude relative to the largest; a cheap conditioning hint.
    pub fn pivot_ratio(&self) -> f64 {
        let (mn, mx) = self.d.iter().fold((f64::INFINITY, 0.0f64), |(a, b), x| (a.min(x.abs()), b.max(x.abs())));
        mn / mx
    }

    pub fn solve_in_place(&self, b: &mut [f64]) {
        let m = self.d.len();
        for i in 0..m - 1 {
            if self.swapped[i] {
                let t = b[i];
                b[i] = b[i + 1];
                b[i + 1] = t - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        b[m - 1] /= self.d[m - 1];
        if m > 1 {
            b[m - 2] = (b[m - 2] - self.du[m - 2] * b[m - 1]) / self.d[m - 2];
        }
        for i in (0..m.saturating_sub(2)).rev() {
            b[i] = (b[i] - self.du[i] * b[i + 1] - self.du2[i] * b[i + 2]) / self.d[i];
        }
    }

    pub fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let mut b = rhs.to_vec();
        self.solve_in_place(&mut b);
        b
    }
}

/// Solves `(T - shift) x = rhs` for the symmetric tridiagonal `T`.
pub fn solve_shifted(diag: &[f64], off: &[f64], shift: f64, rhs: &[f64]) -> Result<Vec<f64>> {
    let d: Vec<f64> = diag.iter().map(|x| x - shift).collect();
    Ok(TridiagLu::new(off, &d, off)?.solve(rhs))
}

fn start_vector(m: usize, seed: usize) -> Vec<f64> {
    // Deterministic, non-degenerate start; avoids accidental orthogonality.
    (0..m)
        .map(|i| {
            let x = ((i + 1) as f64 * 0.618_033_988_749_894_9 + seed as f64 * 0.414_213_562_373_095).fract();
            0.5 + x
        })
        .collect()
}

fn normalize(v: &mut [f64]) {
    let n = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.iter_mut().for_each(|x| *x /= n);
}

/// Unit (Euclidean) eigenvector for an eigenvalue `lambda` known to high
/// accuracy, by inverse iteration.
pub fn inverse_iteration(diag: &[f64], off: &[f64], lambda: f64) -> Vec<f64> {
    inverse_iteration_seeded(diag, off, lambda, 0)
}

fn inverse_iteration_seeded(diag: &[f64], off: &[f64], lambda: f64, seed: usize) -> Vec<f64> {
    let m = diag.len();
    let (lo, hi) = gershgorin(diag, off);
    let scale = lo.abs().max(hi.abs()).max(1e-300);
    let mut d: Vec<f64> = diag.iter().map(|x| x - lambda).collect();
    let lu = loop {
        match TridiagLu::new(off, &d, off) {
            Ok(lu) => break lu,
            Err(_) => d.iter_mut().for_each(|x| *x += f64::EPSILON * scale),
        }
    };
    let mut v = start_vector(m, seed);
    for _ in 0..3 {
        lu.solve_in_place(&mut v);
        if v.iter().any(|x| !x.is_finite()) {
            v = start_vector(m, seed + 1);
            continue;
        }
        normalize(&mut v);
    }
    v
}

/// Full eigendecomposition `(values ascending, unit vectors)` by bisection
/// plus inverse iteration, `O(m²)` work. Vectors inside tight clusters are
/// re-orthogonalized.
pub fn full_eigen(diag: &[f64], off: &[f64]) -> (Vec<f64>, Vec<Vec<f64>>) {
    let m = diag.len();
    let (lo, hi) = gershgorin(diag, off);
    let pad = 1e-12 * (lo.abs() + hi.abs()) + 1e-300;
    let values: Vec<f64> = (0..m).into_par_iter().map(|k| bisect_index(diag, off, k, lo - pad, hi + pad)).collect();
    let mut vectors: Vec<Vec<f64>> =
        values.par_iter().enumerate().map(|(k, &l)| inverse_iteration_seeded(diag, off, l, k)).collect();
    let tight = 1e-7 * lo.abs().max(hi.abs());
    let mut start = 0;
    for k in 1..m {
        if values[k] - values[k - 1] > tight {
            start = k;
            continue;
        }
        for j in start..k {
            let (head, tail) = vectors.split_at_mut(k);
            let c: f64 = head[j].iter().zip(tail[0].iter()).map(|(a, b)| a * b).sum();
            tail[0].iter_mut().zip(head[j].iter()).for_each(|(b, a)| *b -= c * a);
        }
        normalize(&mut vectors[k]);
    }
    (values, vectors)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(m: usize) -> (Vec<f64>, Vec<f64>) {
        (vec![2.0; m], vec![-1.0; m - 1])
    }

    #[test]
    fn counts_known_spectrum() {
        let (d, e) = laplacian(50);
        // eigenvalues 2 - 2cos(kπ/51)
        let exact: Vec<f64> = (1..=50).map(|k| 2.0 - 2.0 * (k as f64 * std::f64::consts::PI / 51.0).cos()).collect();
        for (k, &l) in exact.iter().enumerate() {
            assert_eq!(count_below(&d, &e, l - 1e-9), k);
            assert!((eigenvalue_by_index(&d, &e, k) - l).abs() < 1e-13);
        }
    }

    #[test]
    fn lu_solves_general_system() {
        let sub = [1.0, -3.0, 0.5, 2.0];
        let diag = [0.0, 1.0, 4.0, -1.0, 2.0];
        let sup = [2.0, 1.0, -1.0, 0.25];
        let x = [1.0, -2.0, 0.5, 3.0, 1.5];
        let mut b = vec![0.0; 5];
        for i in 0..5 {
            b[i] = diag[i] * x[i];
            if i > 0 {
                b[i] += sub[i - 1] * x[i - 1];
            }
            if i < 4 {
                b[i] += sup[i] * x[i + 1];
            }
        }
        let got = TridiagLu::new(&sub, &diag, &sup).unwrap().solve(&b);
        for i in 0..5 {
            assert!((got[i] - x[i]).abs() < 1e-13);
        }
    }

    #[test]
    fn singular_detected() {
        assert!(TridiagLu::new(&[0.0], &[0.0, 1.0], &[0.0]).is_err());
    }

    #[test]
    fn full_eigen_is_orthonormal_and_exact() {
        let (d, e) = laplacian(200);
        let (vals, vecs) = full_eigen(&d, &e);
        for k in [0, 57, 199] {
            let v = &vecs[k];
            let mut r = 0.0f64;
            for i in 0..200 {
                let mut s = d[i] * v[i];
                if i > 0 {
                    s += e[i - 1] * v[i - 1];
                }
                if i < 199 {
                    s += e[i] * v[i + 1];
                }
                r = r.max((s - vals[k] * v[i]).abs());
            }
            assert!(r < 1e-12);
        }
        let mut worst = 0.0f64;
        for a in 0..200 {
            for b in 0..a {
                let c: f64 = vecs[a].iter().zip(&vecs[b]).map(|(x, y)| x * y).sum();
                worst = worst.max(c.abs());
            }
        }
        assert!(worst < 1e-10, "{worst}");
    }
}
