//! Fourth-order Numerov integration of `w'' = (ℓ(ℓ+1)/r² + V(r) - E) w`
//! from `r = 0` along the grid, starting on the regular branch
//! `w ≈ r^{ℓ+1}(1 + b r²)`.

use crate::error::{check_len, Result};
use crate::grid::RadialGrid;

/// Regular solution at every node. Large values are rescaled on the fly;
/// the true solution is `values · exp(log_scale)`.
#[derive(Debug, Clone)]
pub struct RegularSolution {
    pub values: Vec<f64>,
    pub log_scale: f64,
}

const RESCALE: f64 = 1e150;

/// Extrapolates node samples to `r = 0` (quadratic through the first three nodes).
pub fn extrapolate_to_origin(samples: &[f64]) -> f64 {
    3.0 * samples[0] - 3.0 * samples[1] + samples[2]
}

pub fn regular_solution(grid: &RadialGrid, ell: usize, potential: &[f64], energy: f64) -> Result<RegularSolution> {
    let n = grid.n();
    check_len("potential", potential.len(), n)?;
    let h = grid.h();
    let h2 = h * h / 12.0;
    let l = (ell * (ell + 1)) as f64;
    let r = grid.nodes();
    let q: Vec<f64> = (0..n).map(|i| l / (r[i] * r[i]) + potential[i] - energy).collect();
    let b = (extrapolate_to_origin(potential) - energy) / (4 * ell + 6) as f64;
    let series = |x: f64| x.powi(ell as i32 + 1) * (1.0 + b * x * x);

    let mut w = vec![0.0; n];
    let mut log_scale = 0.0;
    w[0] = series(r[0]);
    w[1] = series(r[1]);
    for i in 1..n - 1 {
        let next = (2.0 * w[i] * (1.0 + 5.0 * h2 * q[i]) - w[i - 1] * (1.0 - h2 * q[i - 1])) / (1.0 - h2 * q[i + 1]);
        w[i + 1] = next;
        if next.abs() > RESCALE {
            w[..=i + 1].iter_mut().for_each(|x| *x /= RESCALE);
            log_scale += RESCALE.ln();
        }
    }
    Ok(RegularSolution { values: w, log_scale })
}

/// Sign changes along a sampled function, ignoring entries below
/// `rel_floor · max|v|` (they carry no reliable sign).
pub fn sign_changes(v: &[f64], rel_floor: f64) -> usize {
    let floor = rel_floor * v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let mut last = 0.0f64;
    let mut count = 0;
    for &x in v {
        if x.abs() <= floor {
            continue;
        }
        if last != 0.0 && x.signum() != last.signum() {
            count += 1;
        }
        last = x;
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::make_grid;

    #[test]
    fn free_solutions() {
        let g = make_grid(10.0, 1000).unwrap();
        let s = regular_solution(&g, 0, &vec![0.0; 1000], 0.0).unwrap();
        assert!(g.nodes().iter().zip(&s.values).all(|(r, w)| (r - w).abs() < 1e-11));
        let s = regular_solution(&g, 2, &vec![0.0; 1000], 0.0).unwrap();
        assert!(g.nodes().iter().zip(&s.values).all(|(r, w)| (r.powi(3) - w).abs() < 1e-8 * r.powi(3)));
    }

    #[test]
    fn fourth_order_sine() {
        // w'' = -w with w(0)=0: sin r; error should drop ~16x per halving.
        let err = |n: usize| {
            let g = make_grid(6.0, n).unwrap();
            let s = regular_solution(&g, 0, &vec![0.0; n], 1.0).unwrap();
            g.nodes().iter().zip(&s.values).map(|(r, w)| (r.sin() - w).abs()).fold(0.0, f64::max)
        };
        let (e1, e2) = (err(200), err(400));
        assert!(e1 / e2 > 12.0, "{e1} {e2}");
    }

    #[test]
    fn rescaling_keeps_shape() {
        let g = make_grid(400.0, 4000).unwrap();
        let s = regular_solution(&g, 0, &vec![1.0; 4000], 0.0).unwrap();
        assert!(s.log_scale > 0.0);
        let (a, b) = (s.values[3998], s.values[3999]);
        assert!(((b / a).ln() - g.h()).abs() < 1e-6);
    }

    #[test]
    fn counts_sign_changes() {
        assert_eq!(sign_changes(&[1.0, -1.0, 1e-20, -1.0, 2.0], 1e-12), 2);
    }
}
