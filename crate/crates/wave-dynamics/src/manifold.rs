use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::background::StaticBackground;
use crate::error::{Error, Result};
use crate::evolve::{evolve_nlw, EvolveOptions, Outcome};
use crate::modes::{mode_decompose, project_out_unstable};
use crate::propagator::fit_decay;
use crate::state::{Frame, RadialState};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableManifoldConfig {
    /// Initial bracket `[-w, w]` for `h`.
    pub bracket_width: f64,
    pub tol: f64,
    /// Horizon of every decision run and of the endpoint classification runs.
    pub t_horizon: f64,
    pub dt: f64,
    /// `|n₊|` level that counts as having left the manifold; default
    /// `0.5·max(sup|f₁| + sup|f₂|, bracket_width)`.
    pub exit_level: Option<f64>,
    /// End of the stabilized near-manifold run (0 skips it).
    pub decay_t_final: f64,
    pub decay_window: (f64, f64),
    /// Length of the segments between re-stabilizations.
    pub segment: f64,
    /// Radius of the region on which the soliton-direction coefficient is fitted.
    pub modulation_radius: f64,
    pub options: EvolveOptions,
}

impl StableManifoldConfig {
    pub fn new(dt: f64) -> Self {
        StableManifoldConfig {
            bracket_width: 0.05,
            tol: 1e-9,
            t_horizon: 40.0,
            dt,
            exit_level: None,
            decay_t_final: 25.0,
            decay_window: (5.0, 25.0),
            segment: 4.0,
            modulation_radius: 3.0,
            options: EvolveOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StableManifoldResult {
    pub h_star: f64,
    pub bracket_final: (f64, f64),
    pub below_outcome: Outcome,
    pub above_outcome: Outcome,
    /// Exponent of `sup_r |u - c(t)∂_aφ|` over the decay window (NaN if skipped).
    pub decay_fit: f64,
    pub iterations: usize,
    /// Coefficient of `g` removed from `f₁` to enforce `⟨kf₁ + f₂, g⟩ = 0`.
    pub projection: f64,
    pub decay_times: Vec<f64>,
    pub decay_series: Vec<f64>,
    /// Corrections `c·g` applied at each segment boundary of the stabilized run.
    pub corrections: Vec<f64>,
}

/// Sign of `n₊` when it first leaves `[-level, level]`, 0 if it never does.
fn exit_side(state: &RadialState, bg: &StaticBackground, cfg: &StableManifoldConfig, level: f64) -> Result<i8> {
    let opts = EvolveOptions { exit_n_plus: Some(level), stride: usize::MAX, ..cfg.options.clone() };
    let tr = evolve_nlw(state, bg, cfg.t_horizon, cfg.dt, &opts)?;
    Ok(match (tr.exit, tr.outcome) {
        (Some(e), _) => e.n_plus.signum() as i8,
        (None, Outcome::Blowup) => 1,
        (None, Outcome::Dispersal) => -1,
        _ => 0,
    })
}

fn shifted(base: &RadialState, g: &[f64], c: f64) -> RadialState {
    RadialState { u: base.u.iter().zip(g).map(|(u, g)| u + c * g).collect(), ..base.clone() }
}

/// Bisection on `c` in `base + c·g` by the exit side. Returns the final
/// bracket and the number of decision runs, or `None` when the initial
/// bracket does not straddle a sign change.
fn bisect(
    base: &RadialState,
    bg: &StaticBackground,
    cfg: &StableManifoldConfig,
    level: f64,
    (mut lo, mut hi): (f64, f64),
    tol: f64,
) -> Result<Option<((f64, f64), usize)>> {
    let (slo, shi) = rayon::join(
        || exit_side(&shifted(base, bg.g(), lo), bg, cfg, level),
        || exit_side(&shifted(base, bg.g(), hi), bg, cfg, level),
    );
    let (slo, shi) = (slo?, shi?);
    if slo == shi || slo == 0 || shi == 0 {
        return Ok(None);
    }
    let mut runs = 2;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let s = exit_side(&shifted(base, bg.g(), mid), bg, cfg, level)?;
        runs += 1;
        if s == 0 {
            // Never left within the horizon: mid is on the manifold as far
            // as this horizon can tell; keep the straddling bracket.
            return Ok(Some(((lo, hi), runs)));
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(((lo, hi), runs)))
}

/// `sup_r |u - c∂_aφ|` with `c` the least-squares multiple of `∂_aφ` on
/// `r ≤ radius` (3-D measure).
fn modulated_sup(state: &RadialState, bg: &StaticBackground, radius: f64) -> f64 {
    let r = state.grid.nodes();
    let d = bg.dphi_da();
    let last = state.grid.index_at(radius) + 1;
    let num: f64 = (0..last).map(|i| state.u[i] * d[i] * r[i] * r[i]).sum();
    let den: f64 = (0..last).map(|i| d[i] * d[i] * r[i] * r[i]).sum();
    let c = num / den;
    state.u.iter().zip(d).map(|(u, d)| (u - c * d).abs()).fold(0.0, f64::max)
}

/// Locates the point `f₁ + h*g` of the line through the (projected) data at
/// which the solution neither blows up nor disperses, by bisection on the
/// sign with which the unstable coordinate `n₊` leaves a neighbourhood of
/// zero. The endpoint outcomes come from full classification runs; the
/// near-manifold run is re-stabilized every `segment` time units (the
/// unstable mode amplifies round-off by `e^{k·segment}`) and its modulated
/// sup-norm is fitted for decay.
pub fn find_stable_h(
    f1: &[f64],
    f2: &[f64],
    bg: &StaticBackground,
    cfg: &StableManifoldConfig,
) -> Result<StableManifoldResult> {
    let grid = bg.grid();
    if !(cfg.bracket_width > 0.0 && cfg.tol > 0.0 && cfg.t_horizon > 0.0 && cfg.segment > 0.0) {
        return Err(Error::InvalidArgument("bracket, tol, horizon and segment must be positive".into()));
    }
    let raw = RadialState::new(grid, f1.to_vec(), f2.to_vec(), Frame::Perturbation)?;
    let data = project_out_unstable(&raw, bg.g(), bg.k())?;
    let projection = 2.0 * mode_decompose(&raw, bg.g(), bg.k())?.n_plus;
    let sup = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let level = cfg.exit_level.unwrap_or(0.5 * (sup(&data.u) + sup(&data.ut)).max(cfg.bracket_width));

    let w = cfg.bracket_width;
    let Some(((lo, hi), iterations)) = bisect(&data, bg, cfg, level, (-w, w), cfg.tol)? else {
        let outcome = evolve_nlw(&shifted(&data, bg.g(), -w), bg, cfg.t_horizon, cfg.dt, &cfg.options)?.outcome;
        return Err(Error::BracketTooSmall(outcome));
    };
    let h_star = 0.5 * (lo + hi);

    let ends = [lo, hi]
        .par_iter()
        .map(|&c| evolve_nlw(&shifted(&data, bg.g(), c), bg, cfg.t_horizon, cfg.dt, &cfg.options))
        .collect::<Result<Vec<_>>>()?;
    let (below_outcome, above_outcome) = (ends[0].outcome, ends[1].outcome);

    let mut decay_times = vec![];
    let mut decay_series = vec![];
    let mut corrections = vec![];
    let mut decay_fit = f64::NAN;
    if cfg.decay_t_final > 0.0 {
        let snap = ((0.25 / cfg.dt).round() as usize).max(1);
        let opts = EvolveOptions { snapshot_stride: snap, ..cfg.options.clone() };
        let mut state = shifted(&data, bg.g(), h_star);
        let mut t0 = 0.0;
        let mut width = (hi - lo).max(1e-12);
        while t0 < cfg.decay_t_final - 1e-9 {
            // Re-stabilize: the bracket widens until it straddles the manifold.
            let mut found = None;
            for _ in 0..40 {
                found = bisect(&state, bg, cfg, level, (-width, width), 1e-17)?;
                if found.is_some() {
                    break;
                }
                width *= 4.0;
            }
            let ((a, b), _) = found.ok_or_else(|| Error::NumericFailure("re-stabilization failed".into()))?;
            let c = 0.5 * (a + b);
            corrections.push(c);
            state = shifted(&state, bg.g(), c);
            let len = cfg.segment.min(cfg.decay_t_final - t0);
            let tr = evolve_nlw(&state, bg, len, cfg.dt, &opts)?;
            let skip = usize::from(!decay_times.is_empty());
            for (t, s) in tr.snapshot_times.iter().zip(&tr.snapshots).skip(skip) {
                decay_times.push(t0 + t);
                decay_series.push(modulated_sup(s, bg, cfg.modulation_radius));
            }
            t0 += tr.snapshot_times.last().copied().unwrap_or(len);
            state = tr.final_state;
            width = width.max(1e-12);
        }
        decay_fit = fit_decay(&decay_times, &decay_series, cfg.decay_window)?;
    }

    Ok(StableManifoldResult {
        h_star,
        bracket_final: (lo, hi),
        below_outcome,
        above_outcome,
        decay_fit,
        iterations,
        projection,
        decay_times,
        decay_series,
        corrections,
    })
}
