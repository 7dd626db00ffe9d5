//! One function per subcommand. Each returns a typed report (what the JSON
//! file holds) plus the series written beside it.

use halfline_spectral::{birman_schwinger_count, negative_eigenpairs, zero_energy_diagnosis, BsCount, ZeroModeKind};
use nalgebra::DMatrix;
use nls_linearized::{
    gap_scan, h0_from_alpha_derivative, instability_criterion, mu0, sigma_star as bisect_sigma, weinstein_h, GapReport,
    Instability, PairConfig, SigmaStar,
};
use radial_core::numerov::sign_changes;
use radial_core::{assemble_channel_operator, make_grid, ChannelOperator, RadialGrid};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use resolvent_expansion::{
    classify_zero_mode, free_resolvent_kernel, halfline_free_kernel, imaginary_axis_kernel, laurent_fit, ray_samples,
    run_jn_suite, Complex64, JnSuiteReport, ZeroModeReport,
};
use serde::{Deserialize, Serialize};
use solitons::{aubin_values, mass, nls_ground_state, AubinSoliton};
use wave_dynamics::{
    evolve_nlw, evolve_unstable_mode, find_stable_h, fit_decay, mode_decompose, sine_split as split, EvolveOptions,
    Exit, Frame, LinearPropagator, Outcome, RadialState, StableManifoldConfig, StaticBackground,
};

use crate::config::{Potential, RunConfig};
use crate::error::{CliError, Result};

/// A table written as CSV (or JSON) beside the report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Series {
    pub name: String,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Series {
    fn new(name: &str, columns: &[&str]) -> Self {
        Series { name: name.into(), columns: columns.iter().map(|c| c.to_string()).collect(), rows: vec![] }
    }

    fn push(&mut self, row: Vec<f64>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[j]).collect())
    }
}

/// What a command produced: the report, its series, and whether the run
/// ended without a decision.
#[derive(Debug, Clone)]
pub struct Output {
    pub report: serde_json::Value,
    pub series: Vec<Series>,
    pub undecided: Option<String>,
}

fn output<T: Serialize>(report: &T, series: Vec<Series>) -> Result<Output> {
    let report = serde_json::to_value(report).map_err(|e| CliError::Numeric(format!("unserializable report: {e}")))?;
    Ok(Output { report, series, undecided: None })
}

fn grid(cfg: &RunConfig) -> Result<RadialGrid> {
    let (r, n) = (cfg.grid.r_max, cfg.grid.n);
    let (r, n) = r.zip(n).ok_or_else(|| CliError::Config("grid not resolved".into()))?;
    Ok(make_grid(r, n)?)
}

fn sup(v: impl IntoIterator<Item = f64>) -> f64 {
    v.into_iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn nlw_operator(a: f64, ell: usize, g: &RadialGrid) -> Result<ChannelOperator> {
    Ok(assemble_channel_operator(g, ell, &aubin_values(a, g)?.potential)?)
}

/// Sup distance between `w` and the best multiple of `reference` on
/// `r ≤ r_max/2`, relative to that multiple's sup.
fn shape_error(w: &[f64], reference: &[f64], g: &RadialGrid) -> f64 {
    let half = g.index_at(0.5 * g.r_max()) + 1;
    let (w, reference) = (&w[..half], &reference[..half]);
    let c = w.iter().zip(reference).map(|(a, b)| a * b).sum::<f64>() / reference.iter().map(|b| b * b).sum::<f64>();
    sup(w.iter().zip(reference).map(|(a, b)| a - c * b)) / (c.abs() * sup(reference.iter().copied()))
}

// ---------------------------------------------------------------- spectrum

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumChannel {
    pub ell: usize,
    pub negative_eigenvalues: Vec<f64>,
    pub zero_energy_kind: ZeroModeKind,
    pub slope_rel: f64,
    pub const_rel: f64,
    pub v_integral: f64,
    /// Interior sign changes of the regular zero-energy solution.
    pub sign_changes: usize,
    /// Relative sup distance (on `r ≤ r_max/2`) of the zero-energy solution
    /// from the closed-form zero mode: `r∂_aφ` for `ℓ = 0`, `r∂_rφ` for `ℓ = 1`.
    pub zero_mode_shape_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub a: f64,
    pub channels: Vec<SpectrumChannel>,
    /// `k²` with `-k²` the lowest `ℓ = 0` eigenvalue.
    pub k_squared: Option<f64>,
    /// `k(a)²/a`, independent of `a` by scaling.
    pub k_squared_over_a: Option<f64>,
}

/// Negative spectrum and zero-energy diagnosis of `-Δ - 5φ⁴(·,a)` per channel.
pub fn spectrum(cfg: &RunConfig) -> Result<(SpectrumReport, Vec<Series>)> {
    let g = grid(cfg)?;
    let a = cfg.physics.a;
    let sol = AubinSoliton::new(a)?;
    let ell_max = cfg.physics.ell_max.unwrap_or(1);
    let mut channels = vec![];
    let mut modes = Series::new("zero_energy", &["r"]);
    let mut columns = vec![g.nodes().to_vec()];
    for ell in 0..=ell_max {
        let op = nlw_operator(a, ell, &g)?;
        let pairs = negative_eigenpairs(&op)?;
        let d = zero_energy_diagnosis(&op)?;
        let reference = match ell {
            0 => Some(g.sample(|r| r * sol.dphi_da(r))),
            1 => Some(g.sample(|r| r * sol.dphi_dr(r))),
            _ => None,
        };
        channels.push(SpectrumChannel {
            ell,
            negative_eigenvalues: pairs.iter().map(|p| p.energy).collect(),
            zero_energy_kind: d.kind,
            slope_rel: d.slope_rel,
            const_rel: d.const_rel,
            v_integral: d.v_integral,
            sign_changes: sign_changes(&d.solution, 1e-10),
            zero_mode_shape_error: reference.map(|w| shape_error(&d.solution, &w, &g)),
        });
        modes.columns.push(format!("w_l{ell}"));
        columns.push(d.solution);
    }
    modes.rows = (0..g.n()).map(|i| columns.iter().map(|c| c[i]).collect()).collect();
    let k_squared = channels[0].negative_eigenvalues.first().map(|e| -e);
    let report = SpectrumReport { a, channels, k_squared, k_squared_over_a: k_squared.map(|k| k / a) };
    Ok((report, vec![modes]))
}

// ---------------------------------------------------------------- bs-count

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BsReport {
    pub a: f64,
    #[serde(flatten)]
    pub count: BsCount,
}

pub fn bs_count(cfg: &RunConfig) -> Result<BsReport> {
    let g = grid(cfg)?;
    let v = aubin_values(cfg.physics.a, &g)?.potential;
    let count = birman_schwinger_count(&v, cfg.physics.ell_max.unwrap_or(3), &g, cfg.search.threshold)?;
    Ok(BsReport { a: cfg.physics.a, count })
}

// ---------------------------------------------------------------- NLS pair

fn pair_config(cfg: &RunConfig) -> Result<PairConfig> {
    let alpha = cfg.physics.alpha;
    let g = grid(cfg)?;
    Ok(PairConfig { alpha, r_max_alpha: g.r_max() * alpha, n: g.n(), ell_max: cfg.physics.ell_max.unwrap_or(1) })
}

pub fn gap(cfg: &RunConfig) -> Result<GapReport> {
    let pc = pair_config(cfg)?;
    Ok(gap_scan(&pc.build(cfg.physics.sigma)?)?)
}

pub fn sigma_star(cfg: &RunConfig) -> Result<SigmaStar> {
    let pc = pair_config(cfg)?;
    let s = &cfg.search;
    Ok(bisect_sigma((s.lo.unwrap_or(0.8), s.hi.unwrap_or(1.0)), s.tol.unwrap_or(1e-3), &pc)?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlsGroundReport {
    pub sigma: f64,
    pub alpha: f64,
    pub d: usize,
    pub center_value: f64,
    pub decay_rate: f64,
    pub match_radius: f64,
    /// `‖φ‖₂²` in `d` dimensions.
    pub mass: f64,
}

pub fn nls_ground(cfg: &RunConfig) -> Result<(NlsGroundReport, Vec<Series>)> {
    let g = grid(cfg)?;
    let p = &cfg.physics;
    let prof = nls_ground_state(p.sigma, p.alpha, p.d, &g)?;
    let mut s = Series::new("profile", &["r", "phi"]);
    for (r, v) in g.nodes().iter().zip(&prof.samples) {
        s.push(vec![*r, *v]);
    }
    let report = NlsGroundReport {
        sigma: prof.sigma,
        alpha: prof.alpha,
        d: prof.d,
        center_value: prof.center_value,
        decay_rate: prof.decay_rate,
        match_radius: prof.match_radius,
        mass: mass(&prof),
    };
    Ok((report, vec![s]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeinsteinReport {
    pub sigma: f64,
    pub alpha: f64,
    pub mu: f64,
    /// `h(μ) = ⟨(L₊ - μ)^{-1}φ, φ⟩`.
    pub h_mu: f64,
    /// `h(0)` by the resolvent solve and by `-(1/2α)⟨∂_αφ, φ⟩`.
    pub h0_resolvent: f64,
    pub h0_alpha_derivative: f64,
    pub h0_relative_difference: f64,
    /// Smallest eigenvalue of `L₊` on `φ^⊥` (`ℓ = 0`).
    pub mu0: f64,
    /// `sign(μ₀) = -sign(h(0))`.
    pub signs_consistent: bool,
    pub instability: Instability,
}

pub fn weinstein(cfg: &RunConfig) -> Result<WeinsteinReport> {
    let pc = pair_config(cfg)?;
    let sigma = cfg.physics.sigma;
    let pair = pc.build(sigma)?;
    let mu = cfg.search.mu;
    let h0 = weinstein_h(&pair, 0.0)?;
    let h_mu = if mu == 0.0 { h0 } else { weinstein_h(&pair, mu)? };
    let fd = h0_from_alpha_derivative(&pair.profile)?;
    let m = mu0(&pair)?;
    Ok(WeinsteinReport {
        sigma,
        alpha: pc.alpha,
        mu,
        h_mu,
        h0_resolvent: h0,
        h0_alpha_derivative: fd,
        h0_relative_difference: (h0 - fd).abs() / fd.abs(),
        mu0: m,
        signs_consistent: (m < 0.0) == (h0 > 0.0),
        instability: instability_criterion(sigma, 3)?,
    })
}

// ---------------------------------------------------------------- resolvent

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JnReport {
    pub seed: u64,
    pub z: (f64, f64),
    #[serde(flatten)]
    pub suite: JnSuiteReport,
}

/// Point at which the randomized families are inverted.
const JN_Z: Complex64 = Complex64 { re: 1e-3, im: 4e-4 };

pub fn jn_demo(cfg: &RunConfig) -> Result<JnReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.search.seed);
    let suite = run_jn_suite(&mut rng, cfg.search.instances, JN_Z)?;
    Ok(JnReport { seed: cfg.search.seed, z: (JN_Z.re, JN_Z.im), suite })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentReport {
    pub d: usize,
    pub potential: Potential,
    /// Sample ray `z = iρ`, `ρ ∈ [rho_lo, rho_hi]`.
    pub rho: (f64, f64),
    pub points: Vec<f64>,
    pub fit_residual: f64,
    /// Frobenius norms of the singular coefficients.
    pub c_minus2_norm: f64,
    pub c_minus1_norm: f64,
    /// `max |c₋₁ - (i/2)1⊗1|` for the free line.
    pub residue_constant_error: Option<f64>,
    /// Singular values of `c₋₁` (descending, at most four).
    pub c_minus1_singular_values: Vec<f64>,
    /// `|cos|` between the leading residue direction and `r∂_aφ`.
    pub resonance_cosine: Option<f64>,
}

type CMatrix = DMatrix<Complex64>;

/// Entrywise Laurent fit of a resolvent kernel near `z = 0`.
pub fn laurent(cfg: &RunConfig) -> Result<LaurentReport> {
    let d = cfg.physics.d;
    let (report_points, rho, fit) = match cfg.physics.potential {
        Potential::Free => {
            let x: Vec<f64> = (0..8).map(|k| 0.25 * k as f64 + if d == 3 { 0.25 } else { 0.0 }).collect();
            let rho = (1e-4, 1e-3);
            let zs = ray_samples(rho.0, rho.1, 8)?;
            let fit = laurent_fit(
                |z| {
                    let mut m = CMatrix::zeros(8, 8);
                    for i in 0..8 {
                        for j in 0..8 {
                            m[(i, j)] = if d == 1 {
                                free_resolvent_kernel(1, z, x[i], x[j])?
                            } else {
                                halfline_free_kernel(z, x[i], x[j])?
                            };
                        }
                    }
                    Ok(m)
                },
                &zs,
            )?;
            (x, rho, fit)
        }
        Potential::Aubin => {
            let g = grid(cfg)?;
            let op = nlw_operator(cfg.physics.a, 0, &g)?;
            let window = g.index_at(3.0) + 1;
            let rho = (1e-2, 1e-1);
            let zs = ray_samples(rho.0, rho.1, 10)?;
            let fit = laurent_fit(|z| imaginary_axis_kernel(&op, z.im, window), &zs)?;
            (g.nodes()[..window].to_vec(), rho, fit)
        }
    };
    let svd = fit.c_minus1.clone().svd(true, false);
    let mut sv: Vec<(f64, usize)> = svd.singular_values.iter().copied().zip(0..).collect();
    sv.sort_by(|a, b| b.0.total_cmp(&a.0));
    let residue_constant_error = (d == 1 && cfg.physics.potential == Potential::Free)
        .then(|| fit.c_minus1.iter().map(|c| (c - Complex64::new(0.0, 0.5)).norm()).fold(0.0, f64::max));
    let resonance_cosine = (cfg.physics.potential == Potential::Aubin).then(|| {
        let sol = AubinSoliton::new(cfg.physics.a).expect("validated a");
        let f: Vec<f64> = report_points.iter().map(|r| r * sol.dphi_da(*r)).collect();
        let u = svd.u.as_ref().expect("requested U").column(sv[0].1).into_owned();
        let dot: Complex64 = u.iter().zip(&f).map(|(a, b)| a * *b).sum();
        dot.norm() / (u.norm() * f.iter().map(|x| x * x).sum::<f64>().sqrt())
    });
    Ok(LaurentReport {
        d,
        potential: cfg.physics.potential,
        rho,
        points: if report_points.len() <= 8 { report_points } else { vec![] },
        fit_residual: fit.fit_residual,
        c_minus2_norm: fit.c_minus2.norm(),
        c_minus1_norm: fit.c_minus1.norm(),
        residue_constant_error,
        c_minus1_singular_values: sv.iter().take(4).map(|s| s.0).collect(),
        resonance_cosine,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassifyReport {
    pub a: f64,
    pub ell: usize,
    /// `∂_aφ` for `ℓ = 0`, `∂_rφ` for `ℓ = 1`.
    pub mode: String,
    #[serde(flatten)]
    pub classification: ZeroModeReport,
}

pub fn classify_mode(cfg: &RunConfig) -> Result<ClassifyReport> {
    let g = grid(cfg)?;
    let (a, ell) = (cfg.physics.a, cfg.physics.ell);
    let s = AubinSoliton::new(a)?;
    let v = aubin_values(a, &g)?.potential;
    let (mode, f) = match ell {
        0 => ("dphi_da", g.sample(|r| s.dphi_da(r))),
        _ => ("dphi_dr", g.sample(|r| s.dphi_dr(r))),
    };
    let classification = classify_zero_mode(&v, &f, &g, ell)?;
    Ok(ClassifyReport { a, ell, mode: mode.into(), classification })
}

// ---------------------------------------------------------------- dynamics

fn evolve_options(cfg: &RunConfig) -> EvolveOptions {
    let d = &cfg.dynamics;
    EvolveOptions {
        stride: cfg.output.stride,
        snapshot_stride: cfg.output.snapshots,
        blowup_factor: d.blowup_factor,
        dispersal_fraction: d.dispersal_fraction,
        stationary_fraction: d.stationary_fraction,
        n_plus_threshold: d.n_plus_threshold,
        settle_window: d.settle_window,
        core_radius: d.core_radius,
        ..EvolveOptions::default()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveReport {
    pub outcome: Outcome,
    pub blowup_time: Option<f64>,
    pub exit: Option<Exit>,
    pub final_time: f64,
    pub energy_drift: f64,
    pub support_radius: f64,
    pub boundary_exact: bool,
    pub k: f64,
    pub n_plus_initial: f64,
    pub n_minus_initial: f64,
}

/// Evolves `ψ(0) = scale·φ + amplitude·e^{-(r/width)²}`,
/// `ψ_t(0) = velocity·e^{-(r/width)²}` in the perturbation frame.
pub fn evolve(cfg: &RunConfig) -> Result<(EvolveReport, Vec<Series>)> {
    let g = grid(cfg)?;
    let bg = StaticBackground::new(&g)?;
    let d = &cfg.dynamics;
    let amp = d.amplitude.unwrap_or(0.0);
    let profile = g.sample(|r| (-(r / d.width).powi(2)).exp());
    let u: Vec<f64> = bg.phi().iter().zip(&profile).map(|(p, b)| (d.scale - 1.0) * p + amp * b).collect();
    let ut: Vec<f64> = profile.iter().map(|b| d.velocity * b).collect();
    let state = RadialState::new(&g, u, ut, Frame::Perturbation)?;
    let modes = mode_decompose(&state, bg.g(), bg.k())?;
    let dt = d.dt.ok_or_else(|| CliError::Config("dynamics.dt not resolved".into()))?;
    let tr = evolve_nlw(&state, &bg, d.t_final.unwrap_or(20.0), dt, &evolve_options(cfg))?;

    let mut series = Series::new("trajectory", &["t", "sup_norm", "local_energy", "n_plus"]);
    for i in 0..tr.times.len() {
        series.push(vec![tr.times[i], tr.sup_norms[i], tr.local_energy[i], tr.n_plus_series[i]]);
    }
    let mut out = vec![series];
    if cfg.output.snapshots > 0 {
        let mut snaps = Series::new("snapshots", &["t", "r", "u", "ut"]);
        for (t, s) in tr.snapshot_times.iter().zip(&tr.snapshots) {
            for i in 0..g.n() {
                snaps.push(vec![*t, g.nodes()[i], s.u[i], s.ut[i]]);
            }
        }
        out.push(snaps);
    }
    let report = EvolveReport {
        outcome: tr.outcome,
        blowup_time: tr.blowup_time,
        exit: tr.exit,
        final_time: tr.times.last().copied().unwrap_or(0.0),
        energy_drift: tr.energy_drift,
        support_radius: tr.support_radius,
        boundary_exact: tr.boundary_exact,
        k: bg.k(),
        n_plus_initial: modes.n_plus,
        n_minus_initial: modes.n_minus,
    };
    Ok((report, out))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableHReport {
    pub amplitude: f64,
    pub width: f64,
    pub h_star: f64,
    /// `h*/amplitude²`.
    pub h_star_ratio: f64,
    pub bracket_final: (f64, f64),
    pub below_outcome: Outcome,
    pub above_outcome: Outcome,
    pub decay_fit: f64,
    pub decay_window: (f64, f64),
    pub iterations: usize,
    pub projection: f64,
    pub corrections: Vec<f64>,
    pub k: f64,
}

/// Bisection for the stable-manifold point on the line through
/// `(amplitude·e^{-(r/width)²}, 0)` in the direction of the ground state.
pub fn stable_h(cfg: &RunConfig) -> Result<(StableHReport, Vec<Series>)> {
    let g = grid(cfg)?;
    let bg = StaticBackground::new(&g)?;
    let d = &cfg.dynamics;
    let amp = d.amplitude.unwrap_or(0.01);
    let f1 = g.sample(|r| amp * (-(r / d.width).powi(2)).exp());
    let f2 = vec![0.0; g.n()];
    let mut mc = StableManifoldConfig::new(d.dt.ok_or_else(|| CliError::Config("dynamics.dt not resolved".into()))?);
    mc.bracket_width = cfg.search.bracket_width;
    mc.tol = cfg.search.tol.unwrap_or(1e-9);
    mc.t_horizon = d.t_final.unwrap_or(40.0);
    mc.decay_t_final = d.decay_t_final;
    mc.decay_window = (5.0_f64.min(d.decay_t_final), d.decay_t_final);
    mc.options = evolve_options(cfg);
    mc.options.snapshot_stride = 0;
    let res = find_stable_h(&f1, &f2, &bg, &mc)?;
    let mut s = Series::new("decay", &["t", "modulated_sup"]);
    for (t, v) in res.decay_times.iter().zip(&res.decay_series) {
        s.push(vec![*t, *v]);
    }
    let report = StableHReport {
        amplitude: amp,
        width: d.width,
        h_star: res.h_star,
        h_star_ratio: if amp != 0.0 { res.h_star / (amp * amp) } else { f64::NAN },
        bracket_final: res.bracket_final,
        below_outcome: res.below_outcome,
        above_outcome: res.above_outcome,
        decay_fit: res.decay_fit,
        decay_window: mc.decay_window,
        iterations: res.iterations,
        projection: res.projection,
        corrections: res.corrections,
        k: bg.k(),
    };
    Ok((report, vec![s]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SineSplitReport {
    pub c_infinity: f64,
    /// `(max - min)/|c∞|` of the rank-one coefficient over the sampled times.
    pub coefficient_variation: f64,
    pub remainder_decay: f64,
    pub window: f64,
    pub times: (f64, f64),
}

/// Rank-one/remainder split of `sin(t√H)/√H P^⊥f` for the bump
/// `f = amplitude·(1 - (r/width)²)⁴` on `r < width`.
pub fn sine_split(cfg: &RunConfig) -> Result<(SineSplitReport, Vec<Series>)> {
    let g = grid(cfg)?;
    let bg = StaticBackground::new(&g)?;
    let prop = LinearPropagator::new(bg.operator());
    let d = &cfg.dynamics;
    let (amp, width) = (d.amplitude.unwrap_or(1.0), d.width);
    let t1 = d.t_final.unwrap_or(20.0);
    let count = ((t1 - 5.0) / 0.5).round().max(2.0) as usize;
    let times: Vec<f64> = (0..=count).map(|i| 5.0 + (t1 - 5.0) * i as f64 / count as f64).collect();
    let f = g.sample(|r| if r < width { amp * (1.0 - (r / width).powi(2)).powi(4) } else { 0.0 });
    let s = split(&prop, &g, bg.g(), bg.dphi_da(), &f, &times, cfg.search.window)?;
    let (lo, hi) = s.rank_one_coeff.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &c| (a.min(c), b.max(c)));
    let decay = fit_decay(&s.times, &s.remainder_sup, (5.0, t1))?;
    let mut series = Series::new("sine_split", &["t", "rank_one_coeff", "remainder_sup"]);
    for i in 0..s.times.len() {
        series.push(vec![s.times[i], s.rank_one_coeff[i], s.remainder_sup[i]]);
    }
    let report = SineSplitReport {
        c_infinity: s.c_infinity,
        coefficient_variation: (hi - lo) / s.c_infinity.abs(),
        remainder_decay: decay,
        window: s.window,
        times: (5.0, t1),
    };
    Ok((report, vec![series]))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeOdeReport {
    pub k: f64,
    /// Stability-condition value of `n₊(0)` for `F₊ = ⟨s⟩^{-2}`.
    pub n0: f64,
    pub tail_bound: f64,
    pub warning: Option<String>,
    /// `20/k`.
    pub horizon: f64,
    /// `max ⟨t⟩²|n₊(t)|` on `[0, horizon]` from the stability value.
    pub envelope_ratio: f64,
    pub offset: f64,
    /// First time `|n₊| > 1` from `n0 ± offset` (None if never before the end).
    pub exit_plus: Option<f64>,
    pub exit_minus: Option<f64>,
}

/// The unstable-mode ODE `ṅ₊ = kn₊ + ⟨t⟩^{-2}` with `k` of the discretized
/// `H(1)`, integrated to `30/k`.
pub fn mode_ode(cfg: &RunConfig) -> Result<(ModeOdeReport, Vec<Series>)> {
    let g = grid(cfg)?;
    let k = StaticBackground::new(&g)?.k();
    let step = cfg.dynamics.dt.unwrap_or(1e-3);
    let t_end = 30.0 / k;
    let count = (t_end / step).round().max(2.0) as usize;
    let times: Vec<f64> = (0..=count).map(|i| t_end * i as f64 / count as f64).collect();
    let forcing: Vec<f64> = times.iter().map(|s| 1.0 / (1.0 + s * s)).collect();
    let v = wave_dynamics::stability_initial_condition(&times, &forcing, k)?;
    let horizon = 20.0 / k;
    let off = cfg.search.offset;
    let base = evolve_unstable_mode(&times, &forcing, k, v.value)?;
    let up = evolve_unstable_mode(&times, &forcing, k, v.value + off)?;
    let down = evolve_unstable_mode(&times, &forcing, k, v.value - off)?;
    let envelope_ratio = times
        .iter()
        .zip(&base.n_plus)
        .filter(|(t, _)| **t <= horizon)
        .map(|(t, n)| n.abs() * (1.0 + t * t))
        .fold(0.0, f64::max);
    let exit = |n: &[f64]| times.iter().zip(n).find(|(_, n)| n.abs() > 1.0).map(|(t, _)| *t);
    let mut s = Series::new("mode_ode", &["t", "forcing", "n_plus", "n_plus_above", "n_plus_below"]);
    for i in (0..times.len()).step_by(cfg.output.stride.max(1)) {
        s.push(vec![times[i], forcing[i], base.n_plus[i], up.n_plus[i], down.n_plus[i]]);
    }
    let report = ModeOdeReport {
        k,
        n0: v.value,
        tail_bound: v.tail_bound,
        warning: v.warning,
        horizon,
        envelope_ratio,
        offset: off,
        exit_plus: exit(&up.n_plus),
        exit_minus: exit(&down.n_plus),
    };
    Ok((report, vec![s]))
}

/// Runs the configured command.
pub fn execute(cfg: &RunConfig) -> Result<Output> {
    use crate::config::Command::*;
    match cfg.command {
        Spectrum => {
            let (r, s) = spectrum(cfg)?;
            output(&r, s)
        }
        BsCount => output(&bs_count(cfg)?, vec![]),
        GapScan => output(&gap(cfg)?, vec![]),
        SigmaStar => output(&sigma_star(cfg)?, vec![]),
        NlsGround => {
            let (r, s) = nls_ground(cfg)?;
            output(&r, s)
        }
        Weinstein => output(&weinstein(cfg)?, vec![]),
        JnDemo => output(&jn_demo(cfg)?, vec![]),
        Laurent => output(&laurent(cfg)?, vec![]),
        ClassifyMode => output(&classify_mode(cfg)?, vec![]),
        Evolve => {
            let (r, s) = evolve(cfg)?;
            let undecided =
                (r.outcome == Outcome::Undecided).then(|| format!("no classification by t = {}", r.final_time));
            Ok(Output { undecided, ..output(&r, s)? })
        }
        StableH => {
            let (r, s) = stable_h(cfg)?;
            output(&r, s)
        }
        SineSplit => {
            let (r, s) = sine_split(cfg)?;
            output(&r, s)
        }
        ModeOde => {
            let (r, s) = mode_ode(cfg)?;
            output(&r, s)
        }
    }
}
