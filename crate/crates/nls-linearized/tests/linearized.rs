use nls_linearized::*;
use radial_core::{apply_operator, make_grid, tridiag};
use solitons::{alpha_derivative, nls_ground_state};

fn pair(sigma: f64, r_max: f64, n: usize) -> LinearizedPair {
    let g = make_grid(r_max, n).unwrap();
    let p = nls_ground_state(sigma, 1.0, 3, &g).unwrap();
    assemble_linearized_pair(&p, &[0, 1]).unwrap()
}

fn sup(v: &[f64]) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

/// Fourth-order central differences of the (even) profile; the origin
/// side uses the even reflection `φ(-r) = φ(r)` and the center value.
fn radial_derivative(f: &[f64], center: f64, h: f64) -> Vec<f64> {
    let n = f.len() as isize;
    let at = |k: isize| -> f64 {
        if k >= 0 {
            f[k.min(n - 1) as usize]
        } else if k == -1 {
            center
        } else {
            f[(-k - 2) as usize]
        }
    };
    (0..n).map(|k| (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h)).collect()
}

struct Residuals {
    minus: f64,
    plus_l1: f64,
    plus_alpha: f64,
}

fn root_space_residuals(n: usize) -> Residuals {
    let p = pair(1.0, 20.0, n);
    let g = &p.profile.grid;
    let r = g.nodes();
    let phi = &p.profile.samples;
    let rphi: Vec<f64> = r.iter().zip(phi).map(|(r, f)| r * f).collect();
    let dphi = radial_derivative(phi, p.profile.center_value, g.h());
    let rdphi: Vec<f64> = r.iter().zip(&dphi).map(|(r, f)| r * f).collect();
    let da = alpha_derivative(&p.profile).unwrap();
    let rda: Vec<f64> = r.iter().zip(&da).map(|(r, f)| r * f).collect();
    let interior = n - 3;
    let minus = sup(&apply_operator(p.channel(Sign::Minus, 0).unwrap(), &rphi).unwrap()[..interior]);
    let plus_l1 = sup(&apply_operator(p.channel(Sign::Plus, 1).unwrap(), &rdphi).unwrap()[..interior]);
    let lp = apply_operator(p.channel(Sign::Plus, 0).unwrap(), &rda).unwrap();
    let plus_alpha = sup(&(0..interior).map(|i| lp[i] + 2.0 * rphi[i]).collect::<Vec<_>>());
    Residuals { minus, plus_l1, plus_alpha }
}

#[test]
fn root_space_residuals_are_second_order() {
    let (a, b) = (root_space_residuals(1000), root_space_residuals(2000));
    for (name, x, y) in
        [("L-(rφ)", a.minus, b.minus), ("L+(rφ')", a.plus_l1, b.plus_l1), ("L+(r∂αφ)+2αrφ", a.plus_alpha, b.plus_alpha)]
    {
        assert!(x / y > 3.0 && x / y < 5.5, "{name}: {x:e} -> {y:e}");
        // h = 0.01; the constant is set by φ's large derivatives at the origin.
        assert!(y < 500.0 * 1e-4, "{name}: {y:e}");
    }
}

fn lowest_pair(op: &radial_core::ChannelOperator) -> (f64, Vec<f64>) {
    let lam = tridiag::eigenvalue_by_index(op.diag(), op.off(), 0);
    let v = tridiag::inverse_iteration(op.diag(), op.off(), lam);
    (lam, v)
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let ab: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let aa: f64 = a.iter().map(|x| x * x).sum();
    let bb: f64 = b.iter().map(|x| x * x).sum();
    (ab / (aa * bb).sqrt()).abs()
}

#[test]
fn kernels_of_the_pair() {
    let p = pair(1.0, 20.0, 2000);
    let g = &p.profile.grid;
    let r = g.nodes();
    let phi = &p.profile.samples;
    let m = g.n() - 1;

    let (lam, v) = lowest_pair(p.channel(Sign::Minus, 0).unwrap());
    let rphi: Vec<f64> = (0..m).map(|i| r[i] * phi[i]).collect();
    assert!(lam.abs() < 5.0 * g.h().powi(2), "L- ground energy {lam:e}");
    assert!(cosine(&v, &rphi) > 1.0 - 1e-6);

    let (lam, v) = lowest_pair(p.channel(Sign::Plus, 1).unwrap());
    let dphi = radial_derivative(phi, p.profile.center_value, g.h());
    let rdphi: Vec<f64> = (0..m).map(|i| r[i] * dphi[i]).collect();
    assert!(lam.abs() < 20.0 * g.h().powi(2), "L+ l=1 kernel energy {lam:e}");
    assert!(cosine(&v, &rdphi) > 1.0 - 1e-6);

    assert_eq!(p.channel(Sign::Plus, 0).unwrap().count_below(0.0), 1);
    assert_eq!(p.channel(Sign::Minus, 0).unwrap().count_below(-1e-3), 0);
}

#[test]
fn gap_holds_at_cubic_and_fails_at_point_eight() {
    let cfg = PairConfig::default();
    let hold = gap_scan(&cfg.build(1.0).unwrap()).unwrap();
    assert!(hold.gap_holds);
    for c in hold.channels.iter().filter(|c| c.operator == Sign::Minus) {
        assert!(c.eigenvalues.iter().all(|&e| e > 1e-6));
    }
    let fail = gap_scan(&cfg.build(0.8).unwrap()).unwrap();
    assert!(!fail.gap_holds);
    let culprit = fail.channels.iter().find(|c| !c.eigenvalues.is_empty()).unwrap();
    assert!(culprit.eigenvalues.iter().all(|&e| e > 0.0 && e < 1.0));

    let json = serde_json::to_value(&hold).unwrap();
    assert!(json.get("sigma").is_some() && json.get("gap_holds").is_some());
    assert_eq!(json["channels"][0]["operator"], "L-");
    assert!(json["channels"][0]["edge_resonance"].is_boolean());
}

#[test]
fn gap_report_is_consistent() {
    let rep = gap_scan(&PairConfig::default().build(0.913).unwrap()).unwrap();
    let expect = rep.channels.iter().all(|c| c.eigenvalues.is_empty() && !c.edge_resonance);
    assert_eq!(rep.gap_holds, expect);
}

#[test]
fn sigma_star_near_point_nine_one_four() {
    let cfg = PairConfig::default();
    let s = sigma_star((0.8, 1.0), 1e-3, &cfg).unwrap();
    assert!(s.estimate > 0.905 && s.estimate < 0.925, "{}", s.estimate);
    assert!(s.bracket.1 - s.bracket.0 <= 1e-3);
    assert!(matches!(sigma_star((0.95, 1.0), 1e-3, &cfg), Err(Error::InvalidBracket(_))));
}

#[test]
fn sigma_star_is_stable_under_domain_doubling() {
    let base = PairConfig::default();
    let wide = PairConfig { r_max_alpha: 80.0, n: 6000, ..base.clone() };
    let a = sigma_star((0.9, 0.93), 1e-5, &base).unwrap().estimate;
    let b = sigma_star((0.9, 0.93), 1e-5, &wide).unwrap().estimate;
    assert!((a - b).abs() < 2e-3, "{a} vs {b}");
}

#[test]
fn single_crossing_on_a_fine_sigma_grid() {
    let sigmas: Vec<f64> = (0..=40).map(|k| 0.8 + 0.005 * k as f64).collect();
    let reps = gap_scan_sigmas(&sigmas, &PairConfig::default()).unwrap();
    assert_eq!(gap_crossings(&reps), 1);
    assert!(!reps[0].gap_holds && reps[40].gap_holds);
}

#[test]
fn weinstein_function_increases() {
    for sigma in [0.5, 1.0] {
        let p = PairConfig::default().build(sigma).unwrap();
        let lam0 = tridiag::eigenvalue_by_index(
            p.channel(Sign::Plus, 0).unwrap().diag(),
            p.channel(Sign::Plus, 0).unwrap().off(),
            0,
        );
        let mus: Vec<f64> = (1..20).map(|k| lam0 + (0.95 - lam0) * k as f64 / 20.0).collect();
        let hs: Vec<f64> = mus.iter().map(|&m| weinstein_h(&p, m).unwrap()).collect();
        assert!(hs.windows(2).all(|w| w[1] > w[0]), "σ = {sigma}: {hs:?}");
        assert!(matches!(weinstein_h(&p, lam0), Err(Error::SingularSolve(_))));
    }
}

#[test]
fn weinstein_at_zero_matches_alpha_derivative() {
    for sigma in [0.5, 0.75, 1.0] {
        let p = PairConfig::default().build(sigma).unwrap();
        let h0 = weinstein_h(&p, 0.0).unwrap();
        let fd = h0_from_alpha_derivative(&p.profile).unwrap();
        assert!((h0 / fd - 1.0).abs() < 1e-3, "σ = {sigma}: {h0} vs {fd}");
    }
    let p = PairConfig::default().build(1.0).unwrap();
    assert!(weinstein_h(&p, 0.0).unwrap() > 0.0);
}

#[test]
fn constrained_minimum_signs() {
    let cfg = PairConfig::default();
    assert!(mu0(&cfg.build(1.0).unwrap()).unwrap() < 0.0);
    assert!(mu0(&cfg.build(0.5).unwrap()).unwrap() >= 0.0);
    for sigma in [0.5, 0.6, 0.75, 0.9, 1.0, 1.2] {
        let p = cfg.build(sigma).unwrap();
        let (m, h0) = (mu0(&p).unwrap(), weinstein_h(&p, 0.0).unwrap());
        assert_eq!(m < 0.0, h0 > 0.0, "σ = {sigma}: μ0 = {m}, h(0) = {h0}");
        assert_eq!(instability_criterion(sigma, 3).unwrap().unstable, m < 0.0);
    }
}

#[test]
fn square_root_form_agrees_in_sign() {
    for sigma in [0.5, 0.6, 0.8, 1.0] {
        let p = pair(sigma, 20.0, 500);
        let m = mu0(&p).unwrap();
        let q = sqrt_form_min_eigenvalue(&p).unwrap();
        assert_eq!(m < 0.0, q < 0.0, "σ = {sigma}: μ0 = {m}, form = {q}");
    }
}

#[test]
fn pairs_need_three_dimensions() {
    let g = make_grid(20.0, 800).unwrap();
    let p = nls_ground_state(1.0, 1.0, 1, &g).unwrap();
    assert!(assemble_linearized_pair(&p, &[0]).is_err());
}
