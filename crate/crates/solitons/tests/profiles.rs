use proptest::prelude::*;
use radial_core::make_grid;
use solitons::*;

/// Radial Laplacian of samples via `Δφ = (rφ)''/r` on interior nodes,
/// with `rφ = 0` at the origin.
fn radial_laplacian(r: &[f64], h: f64, p: &[f64]) -> Vec<f64> {
    let w: Vec<f64> = r.iter().zip(p).map(|(r, p)| r * p).collect();
    (0..r.len() - 1)
        .map(|i| {
            let left = if i == 0 { 0.0 } else { w[i - 1] };
            (w[i + 1] - 2.0 * w[i] + left) / (h * h) / r[i]
        })
        .collect()
}

#[test]
fn aubin_residual_is_second_order() {
    let res = |n: usize| {
        let g = make_grid(20.0, n).unwrap();
        let v = aubin_values(1.0, &g).unwrap();
        let lap = radial_laplacian(g.nodes(), g.h(), &v.phi);
        lap.iter().zip(&v.phi).map(|(l, p)| (l + p.powi(5)).abs()).fold(0.0, f64::max)
    };
    let (a, b) = (res(1000), res(2000));
    let order = (a / b).log2();
    assert!((order - 2.0).abs() < 0.2, "order {order}");
}

#[test]
fn tails_decay_like_inverse_r() {
    let g = make_grid(200.0, 4000).unwrap();
    let v = aubin_values(1.0, &g).unwrap();
    let half = g.index_at(100.0);
    let rs = &g.nodes()[half..];
    let slope = |f: &[f64]| {
        let ys: Vec<f64> = f[half..].iter().map(|x| x.abs()).collect();
        radial_core::fit::loglog_slope(rs, &ys).unwrap()
    };
    assert!((slope(&v.phi) + 1.0).abs() < 0.05);
    assert!((slope(&v.dphi_da) + 1.0).abs() < 0.05);
}

#[test]
fn dphi_da_ratio_identity() {
    let mut worst: f64 = 0.0;
    for &(a1, a2) in &[(1.0, 1.1), (0.6, 0.65), (1.9, 1.5), (0.8, 1.6)] {
        let s1 = AubinSoliton::new(a1).unwrap();
        let s2 = AubinSoliton::new(a2).unwrap();
        let c = (a2 / a1).powf(1.25);
        let sup = (0..4000)
            .map(|i| i as f64 * 0.05)
            .map(|r| (s1.dphi_da(r) - c * s2.dphi_da(r)).abs() * (1.0 + r * r).powf(1.5))
            .fold(0.0, f64::max);
        worst = worst.max(sup / (a1 - a2).abs());
    }
    // Bounded (a few units) uniformly in the sampled pairs.
    assert!(worst < 5.0, "{worst}");
}

/// Independent oracle: shoot `u = rφ`, `u'' = α²u - u^{2σ+1}/r^{2σ}` with
/// Heun's method and a small fixed step.
fn oracle_center(sigma: f64, alpha: f64) -> f64 {
    let step = 2e-4;
    let f = |r: f64, u: f64| alpha * alpha * u - u.abs().powf(2.0 * sigma) * u / r.powf(2.0 * sigma);
    let run = |p0: f64| -> bool {
        let (mut r, mut u, mut du) = (step, p0 * step, p0);
        while r < 16.0 / alpha {
            let a0 = f(r, u);
            let (u1, du1) = (u + step * du, du + step * a0);
            let a1 = f(r + step, u1);
            u += 0.5 * step * (du + du1);
            du += 0.5 * step * (a0 + a1);
            r += step;
            if u < 0.0 {
                return true;
            }
            if du > u / r {
                // φ' = (u' - u/r)/r > 0
                return false;
            }
        }
        false
    };
    let (mut lo, mut hi) = (alpha.powf(1.0 / sigma), 10.0 * alpha.powf(1.0 / sigma));
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if run(mid) {
            hi = mid
        } else {
            lo = mid
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn cubic_3d_center_matches_oracle() {
    let g = make_grid(40.0, 3000).unwrap();
    let s = nls_ground_state(1.0, 1.0, 3, &g).unwrap();
    let oracle = oracle_center(1.0, 1.0);
    assert!(((s.center_value - oracle) / oracle).abs() < 1e-4, "{} vs {oracle}", s.center_value);
    assert!(s.samples.iter().all(|&p| p > 0.0));
    assert!(s.samples.windows(2).all(|w| w[1] <= w[0]));
    assert!((s.decay_rate - 1.0).abs() < 0.02, "{}", s.decay_rate);
}

#[test]
fn ground_state_scaling_in_alpha() {
    let g = make_grid(20.0, 3000).unwrap();
    let s1 = nls_ground_state(1.0, 1.0, 3, &make_grid(40.0, 3000).unwrap()).unwrap();
    let s2 = nls_ground_state(1.0, 2.0, 3, &g).unwrap();
    assert!((s2.center_value / (2.0 * s1.center_value) - 1.0).abs() < 1e-4);
}

#[test]
fn ode_residual_is_second_order() {
    let res = |n: usize| {
        let g = make_grid(20.0, n).unwrap();
        let s = nls_ground_state(1.0, 1.0, 3, &g).unwrap();
        let lap = radial_laplacian(g.nodes(), g.h(), &s.samples);
        lap.iter().zip(&s.samples).map(|(l, p)| (-l + p - p.powi(3)).abs()).fold(0.0, f64::max)
    };
    let (a, b) = (res(1000), res(2000));
    assert!(((a / b).log2() - 2.0).abs() < 0.25, "{a} {b}");
}

#[test]
fn mass_scaling_under_rescale() {
    let g = make_grid(40.0, 3000).unwrap();
    let s = nls_ground_state(1.0, 1.0, 3, &g).unwrap();
    let r = mass(&rescale_ground_state(&s, 2.0).unwrap()) / mass(&s);
    assert!((r - 0.5).abs() < 1e-6, "{r}");
    let s = nls_ground_state(2.0 / 3.0, 1.0, 3, &g).unwrap();
    let r = mass(&rescale_ground_state(&s, 2.0).unwrap()) / mass(&s);
    assert!((r - 1.0).abs() < 1e-6, "{r}");
}

#[test]
fn alpha_derivative_identity_converges() {
    // L₊(∂_αφ) = -2αφ with L₊ = -Δ + α² - 3φ² (σ = 1).
    let res = |n: usize| {
        let g = make_grid(20.0, n).unwrap();
        let s = nls_ground_state(1.0, 1.0, 3, &g).unwrap();
        let da = alpha_derivative(&s).unwrap();
        let lap = radial_laplacian(g.nodes(), g.h(), &da);
        (0..g.index_at(10.0))
            .map(|i| (-lap[i] + da[i] - 3.0 * s.samples[i].powi(2) * da[i] + 2.0 * s.samples[i]).abs())
            .fold(0.0, f64::max)
    };
    let (a, b) = (res(1000), res(2000));
    assert!(((a / b).log2() - 2.0).abs() < 0.3, "{a} {b}");
}

#[test]
fn alpha_derivative_matches_scaling_formula() {
    // ∂_αφ = φ/(σα) + (r/α)φ' from φ_α(r) = α^{1/σ}φ₁(αr).
    let g = make_grid(20.0, 4000).unwrap();
    let s = nls_ground_state(1.0, 1.0, 3, &g).unwrap();
    let da = alpha_derivative(&s).unwrap();
    let (r, h, p) = (g.nodes(), g.h(), &s.samples);
    for i in (5..g.index_at(8.0)).step_by(50) {
        let dp = (-p[i + 2] + 8.0 * p[i + 1] - 8.0 * p[i - 1] + p[i - 2]) / (12.0 * h);
        let expect = p[i] + r[i] * dp;
        assert!((da[i] - expect).abs() < 1e-4, "r={} {} {}", r[i], da[i], expect);
    }
}

proptest! {
    #[test]
    fn aubin_dilation(r in 0.0f64..50.0, a in 0.05f64..20.0) {
        let s = AubinSoliton::new(a).unwrap();
        let one = AubinSoliton::new(1.0).unwrap();
        prop_assert!((s.phi(r) - a.powf(0.25) * one.phi(a.sqrt() * r)).abs() < 1e-12);
    }

    #[test]
    fn aubin_positive_decreasing(r in 0.0f64..100.0, dr in 1e-3f64..1.0, a in 0.05f64..20.0) {
        let s = AubinSoliton::new(a).unwrap();
        prop_assert!(s.phi(r) > 0.0);
        prop_assert!(s.phi(r + dr) < s.phi(r));
    }
}
