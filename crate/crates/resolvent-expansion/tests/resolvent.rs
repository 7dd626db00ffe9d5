use nalgebra::DMatrix;
use radial_core::{assemble_channel_operator, make_grid};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use resolvent_expansion::*;
use solitons::{aubin_values, AubinSoliton};

type CMatrix = DMatrix<Complex64>;
const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

#[test]
fn formula_matches_direct_inverse_dim_40() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let fam = random_family(&mut rng, 40, 2).unwrap();
    assert_eq!(fam.rank_s(), 2);
    assert!(fam.gap() > 0.4);
    let z = Complex64::new(1e-3, 0.0);
    let inv = jensen_nenciu_invert(&fam, z).unwrap();
    let direct = fam.a(z).try_inverse().unwrap();
    assert!((&inv.a_inv - &direct).norm() < 1e-9 * direct.norm());
    let id = &inv.a_inv * fam.a(z);
    assert!((id - CMatrix::identity(40, 40)).norm() < 1e-9 * 40f64.sqrt());
    let s = fam.projection();
    assert!((s * s - s).norm() < 1e-12 && (s - s.transpose()).norm() < 1e-14);
    assert!((fam.a0() * s).norm() < 1e-12);
}

#[test]
fn randomized_lemma_suite() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let z = Complex64::new(1e-3, 4e-4);
    let rep = run_jn_suite(&mut rng, 200, z).unwrap();
    assert!(rep.max_relative_error <= 1e-9, "{rep:?}");
    assert!(rep.max_kernel_defect <= 1e-12, "{rep:?}");
    assert_eq!(rep.degenerate_agree, rep.degenerate, "{rep:?}");
    assert_eq!(rep.regular_agree, rep.instances, "{rep:?}");
}

#[test]
fn degenerate_family_is_not_invertible_at_its_point() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let z0 = Complex64::new(2e-3, 0.0);
    let fam = degenerate_family(&mut rng, 20, 1, z0).unwrap();
    assert!(matches!(jensen_nenciu_invert(&fam, z0), Err(Error::NotInvertible(_))));
    // Away from z₀ it is regular again.
    assert!(jensen_nenciu_invert(&fam, Complex64::new(1e-3, 0.0)).is_ok());
}

fn random_potential(rng: &mut ChaCha8Rng, r: &[f64]) -> Vec<f64> {
    let bumps: Vec<(f64, f64, f64)> =
        (0..3).map(|_| (rng.gen_range(-4.0..4.0), rng.gen_range(0.0..3.0), rng.gen_range(0.5..1.5))).collect();
    r.iter().map(|x| bumps.iter().map(|(a, c, w)| a * (-((x - c) / w).powi(2)).exp()).sum()).collect()
}

#[test]
fn symmetric_identity_matches_direct_inversion() {
    let g = make_grid(10.0, 200).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for z in [Complex64::new(0.7, 0.4), Complex64::new(0.0, 0.9), Complex64::new(-1.3, 0.2)] {
        let v = random_potential(&mut rng, g.nodes());
        let r0 = halfline_resolvent_block(&g, 0, None, z).unwrap();
        let via = symmetric_resolvent(&r0, &v[..199], DEFAULT_OBSTRUCTION_TOL).unwrap();
        let direct = halfline_resolvent_block(&g, 0, Some(&v), z).unwrap();
        assert!((&via - &direct).norm() < 1e-8 * direct.norm(), "z = {z}");
    }
}

#[test]
fn aubin_potential_obstructs_zero_energy() {
    let g = make_grid(50.0, 1000).unwrap();
    let v = aubin_values(1.0, &g).unwrap().potential;
    let g0 = halfline_zero_energy_block(&g);
    match symmetric_resolvent(&g0, &v, DEFAULT_OBSTRUCTION_TOL) {
        Err(Error::ZeroEnergyObstruction(rel)) => assert!(rel < 1e-3),
        other => panic!("expected obstruction, got {other:?}"),
    }
    let generic: Vec<f64> = g.nodes().iter().map(|r| -3.0 * (-r * r).exp()).collect();
    assert!(symmetric_resolvent(&g0, &generic, DEFAULT_OBSTRUCTION_TOL).is_ok());
}

fn points() -> Vec<f64> {
    (0..8).map(|k| 0.25 * k as f64).collect()
}

#[test]
fn free_line_residue_is_constant() {
    let x = points();
    let zs = ray_samples(1e-4, 1e-3, 8).unwrap();
    let fit = laurent_fit(|z| Ok(CMatrix::from_fn(8, 8, |i, j| free_resolvent_kernel(1, z, x[i], x[j]).unwrap())), &zs)
        .unwrap();
    // Residue of i e^{iz|x-y|}/(2z): i/2 in every entry.
    let want = CMatrix::from_element(8, 8, I / 2.0);
    assert!((&fit.c_minus1 - &want).camax() < 1e-8, "{}", (&fit.c_minus1 - &want).camax());
    assert!(fit.c_minus2.camax() < 1e-8);
    let regular = CMatrix::from_fn(8, 8, |i, j| Complex64::new(-(x[i] - x[j]).abs() / 2.0, 0.0));
    assert!((&fit.c0 - &regular).camax() < 1e-6);
}

#[test]
fn free_space_radial_kernel_has_no_singular_part() {
    let r: Vec<f64> = points().iter().map(|x| x + 0.25).collect();
    let zs = ray_samples(1e-4, 1e-3, 8).unwrap();
    let fit =
        laurent_fit(|z| Ok(CMatrix::from_fn(8, 8, |i, j| halfline_free_kernel(z, r[i], r[j]).unwrap())), &zs).unwrap();
    assert!(
        fit.c_minus2.norm() <= 1e-8 && fit.c_minus1.norm() <= 1e-8,
        "{} {}",
        fit.c_minus2.norm(),
        fit.c_minus1.norm()
    );
    // c₀ carries an O(ρ²) leak from the truncated series.
    let green = CMatrix::from_fn(8, 8, |i, j| Complex64::new(zero_energy_green(r[i], r[j]), 0.0));
    assert!((&fit.c0 - &green).camax() < 1e-4);
}

#[test]
fn aubin_resolvent_residue_is_the_resonance() {
    let g = make_grid(400.0, 8000).unwrap();
    let v = aubin_values(1.0, &g).unwrap().potential;
    let op = assemble_channel_operator(&g, 0, &v).unwrap();
    let window = g.index_at(3.0) + 1;
    let zs = ray_samples(1e-2, 1e-1, 10).unwrap();
    let fit = laurent_fit(|z| imaginary_axis_kernel(&op, z.im, window), &zs).unwrap();
    let sv = fit.c_minus1.clone().svd(true, false);
    let mut s: Vec<f64> = sv.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.total_cmp(a));
    assert!(s[1] < 0.05 * s[0], "residue not rank one: {s:?}");
    let k = sv.singular_values.imax();
    let u = sv.u.as_ref().unwrap().column(k).into_owned();
    let sol = AubinSoliton::new(1.0).unwrap();
    let f: Vec<f64> = g.nodes()[..window].iter().map(|r| r * sol.dphi_da(*r)).collect();
    let dot: Complex64 = u.iter().zip(&f).map(|(a, b)| a * *b).sum();
    let cos = dot.norm() / (u.norm() * f.iter().map(|x| x * x).sum::<f64>().sqrt());
    assert!(cos >= 0.99, "cosine {cos}");
    // No zero-energy eigenfunction in this channel: c₋₂ carries no content
    // beyond the truncation level of the box.
    assert!(
        fit.c_minus2.norm() < 0.1 * zs[0].im * fit.c_minus1.norm(),
        "{} vs {}",
        fit.c_minus2.norm(),
        fit.c_minus1.norm()
    );
}

#[test]
fn classification_of_aubin_zero_modes() {
    let g = make_grid(50.0, 4000).unwrap();
    let v = aubin_values(1.0, &g).unwrap().potential;
    let s = AubinSoliton::new(1.0).unwrap();
    let da: Vec<f64> = g.nodes().iter().map(|r| s.dphi_da(*r)).collect();
    let rep = classify_zero_mode(&v, &da, &g, 0).unwrap();
    assert_eq!(rep.kind, halfline_spectral::ZeroModeKind::Resonance);
    assert!(rep.v_integral.abs() > 1e-2);
    assert!((rep.tail_exponent + 1.0).abs() <= 0.05, "{}", rep.tail_exponent);

    let dr: Vec<f64> = g.nodes().iter().map(|r| s.dphi_dr(*r)).collect();
    let rep = classify_zero_mode(&v, &dr, &g, 1).unwrap();
    assert_eq!(rep.kind, halfline_spectral::ZeroModeKind::Eigenvalue);
    assert!((rep.tail_exponent + 2.0).abs() <= 0.1, "{}", rep.tail_exponent);

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let junk: Vec<f64> = g.nodes().iter().map(|_| rng.gen_range(0.5..1.0)).collect();
    assert!(matches!(classify_zero_mode(&v, &junk, &g, 0), Err(Error::NotAZeroMode(_))));
}
