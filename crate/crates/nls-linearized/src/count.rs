use radial_core::numerov::{regular_solution, sign_changes};
use radial_core::ChannelOperator;

use crate::error::{Error, Result};

/// `K'/K` at `r` for the decaying exterior solution `K = r k_ℓ(κr)` of
/// `-w'' + (ℓ(ℓ+1)/r² + κ²) w = 0`; `κ = 0` gives `K = r^{-ℓ}`.
pub fn decaying_log_derivative(ell: usize, kappa: f64, r: f64) -> f64 {
    // K ∝ e^{-κr} Σ_j a_j (2κr)^{-j}; multiply through by (2κr)^ℓ for stability.
    let x = 2.0 * kappa * r;
    let (mut p, mut dp) = (0.0, 0.0);
    for j in 0..=ell {
        let a = coeff(ell, j);
        let e = (ell - j) as i32;
        p += a * x.powi(e);
        if e > 0 {
            dp += a * e as f64 * 2.0 * kappa * x.powi(e - 1);
        }
    }
    -kappa + dp / p - ell as f64 / r
}

fn coeff(ell: usize, j: usize) -> f64 {
    // (ℓ+j)! / (j! (ℓ-j)!)
    let mut c = 1.0;
    for k in (ell - j + 1)..=(ell + j) {
        c *= k as f64;
    }
    for k in 1..=j {
        c /= k as f64;
    }
    c
}

/// Number of eigenvalues below `energy ≤ edge` of the half-line operator on
/// `(0, ∞)`, with the potential continued by its edge value beyond `r_max`:
/// sign changes of the regular solution on the grid, plus one if its
/// log-derivative at `r_max` lies below that of the decaying exterior
/// solution (a further zero then occurs outside the grid).
pub fn continuum_count(op: &ChannelOperator, energy: f64, edge: f64) -> Result<usize> {
    if energy > edge {
        return Err(Error::InvalidArgument(format!("energy {energy} above the edge {edge}")));
    }
    let g = op.grid();
    let sol = regular_solution(g, op.ell(), op.potential(), energy)?;
    let w = &sol.values;
    let n = w.len();
    let inside = sign_changes(w, 0.0);
    let (a, b) = (w[n - 2], w[n - 1]);
    let h = g.h();
    let mid = g.nodes()[n - 1] - 0.5 * h;
    let wm = 0.5 * (a + b);
    if wm == 0.0 || !wm.is_finite() {
        return Err(Error::NumericFailure("regular solution vanishes at the matching radius".into()));
    }
    let logd = (b - a) / h / wm;
    let kappa = (edge - energy).max(0.0).sqrt();
    let extra = usize::from(logd < decaying_log_derivative(op.ell(), kappa, mid));
    Ok(inside + extra)
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::{assemble_channel_operator, make_grid};

    #[test]
    fn exterior_log_derivative() {
        // ℓ = 1: K = e^{-κr}(1 + 1/(κr)).
        let (k, r) = (0.7, 3.0);
        let kf = |r: f64| (-k * r).exp() * (1.0 + 1.0 / (k * r));
        let num = (kf(r + 1e-6) - kf(r - 1e-6)) / 2e-6 / kf(r);
        assert!((decaying_log_derivative(1, k, r) - num).abs() < 1e-8);
        assert!((decaying_log_derivative(2, 0.0, 4.0) + 0.5).abs() < 1e-15);
        assert!((decaying_log_derivative(0, 0.3, 4.0) + 0.3).abs() < 1e-15);
    }

    #[test]
    fn square_well_count_is_domain_independent() {
        // -w'' - 4·1_{r<3} w: exactly 2 bound states; count at E = -0.1.
        for r_max in [6.0, 12.0, 40.0] {
            let g = make_grid(r_max, 4000).unwrap();
            let v = g.sample(|r| if r < 3.0 { -4.0 } else { 0.0 });
            let op = assemble_channel_operator(&g, 0, &v).unwrap();
            assert_eq!(continuum_count(&op, -0.1, 0.0).unwrap(), 2);
            assert_eq!(continuum_count(&op, -3.9, 0.0).unwrap(), 0);
        }
    }
}
