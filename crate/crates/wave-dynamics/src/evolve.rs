use serde::{Deserialize, Serialize};

use crate::background::StaticBackground;
use crate::error::{Error, Result};
use crate::nonlinearity::nonlinearity_n;
use crate::state::{Frame, RadialState};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    /// Stayed near `φ(·,1)` over the closing window.
    Stationary,
    /// The core emptied out: `ψ → 0` near the origin.
    Dispersal,
    Blowup,
    Undecided,
}

/// Classifier thresholds and recording cadence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolveOptions {
    /// Observables are recorded every `stride` steps.
    pub stride: usize,
    /// Snapshots every `snapshot_stride` steps (0: initial and final only).
    pub snapshot_stride: usize,
    /// Blow-up once `sup|ψ| > blowup_factor · φ(0,1)` (or on NaN).
    pub blowup_factor: f64,
    /// Dispersal once `sup_{r≤core}|ψ| < dispersal_fraction · φ(0,1)` for a
    /// full `settle_window`.
    pub dispersal_fraction: f64,
    /// Stationary if `sup_{r≤core}|ψ - φ|` stayed below
    /// `max(stationary_fraction · sup|u(0)|, stationary_floor)` with
    /// `|n₊| ≤ n_plus_threshold` over the last `settle_window`.
    pub stationary_fraction: f64,
    pub stationary_floor: f64,
    pub n_plus_threshold: f64,
    pub settle_window: f64,
    /// Radius of the core region (classifier and local energy).
    pub core_radius: f64,
    /// Stop as soon as `|n₊|` exceeds this.
    pub exit_n_plus: Option<f64>,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        EvolveOptions {
            stride: 10,
            snapshot_stride: 0,
            blowup_factor: 1e3,
            dispersal_fraction: 0.1,
            stationary_fraction: 0.1,
            stationary_floor: 1e-8,
            n_plus_threshold: 0.1,
            settle_window: 5.0,
            core_radius: 1.0,
            exit_n_plus: None,
        }
    }
}

/// First time `|n₊|` crossed the exit level.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exit {
    pub time: f64,
    pub n_plus: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    /// `sup_r |ψ - φ(·,1)|`.
    pub sup_norms: Vec<f64>,
    /// `∫_{r ≤ core} (w_t² + w_r²)/2 dr` of the perturbation `w = r(ψ - φ)`.
    pub local_energy: Vec<f64>,
    pub n_plus_series: Vec<f64>,
    /// Conserved discrete energy of the evolved frame.
    pub energy: Vec<f64>,
    pub snapshot_times: Vec<f64>,
    pub snapshots: Vec<RadialState>,
    pub outcome: Outcome,
    pub blowup_time: Option<f64>,
    pub exit: Option<Exit>,
    /// `max |E(t) - E(0)|` relative to the larger of `|E(0)|` and the largest
    /// quadratic (kinetic + gradient) part seen along the run.
    pub energy_drift: f64,
    pub support_radius: f64,
    /// Whether `support + t_final ≤ r_max`, i.e. the frozen boundary value
    /// is exact by finite speed of propagation.
    pub boundary_exact: bool,
    /// State at the last completed step.
    pub final_state: RadialState,
}

/// Quintic focusing wave equation `□ψ = ψ⁵` for radial data, in the reduction
/// `w = rψ`: `w_tt = w_rr + r(w/r)⁵`, leapfrog in time. The last node keeps its
/// initial value. The evolution runs in the frame of `initial`; in the
/// perturbation frame the unknown is `rψ - rφ_h` and the equation is
/// `v_tt = v_rr + 5φ⁴v + rN(v/r, φ)`, with `φ_h` from `bg`.
pub fn evolve_nlw(
    initial: &RadialState,
    bg: &StaticBackground,
    t_final: f64,
    dt: f64,
    opts: &EvolveOptions,
) -> Result<Trajectory> {
    let grid = &initial.grid;
    if bg.grid() != grid {
        return Err(Error::InvalidArgument("state and background live on different grids".into()));
    }
    let h = grid.h();
    if !(dt > 0.0) || !(t_final >= 0.0) || !t_final.is_finite() {
        return Err(Error::InvalidArgument(format!("need dt > 0 and t_final ≥ 0, got {dt}, {t_final}")));
    }
    if dt > 0.9 * h * (1.0 + 1e-12) {
        return Err(Error::Cfl { dt, limit: 0.9 * h });
    }
    if opts.stride == 0 {
        return Err(Error::InvalidArgument("stride must be positive".into()));
    }
    let n = grid.n();
    let m = n - 1;
    let r = grid.nodes();
    let phi = bg.phi();
    let frame = initial.frame;
    let h2 = h * h;

    let accel = |w: &[f64], out: &mut [f64]| {
        for i in 0..m {
            let left = if i == 0 { 0.0 } else { w[i - 1] };
            let lap = (w[i + 1] - 2.0 * w[i] + left) / h2;
            let x = w[i] / r[i];
            out[i] = match frame {
                Frame::Full => lap + r[i] * x.powi(5),
                Frame::Perturbation => {
                    let p2 = phi[i] * phi[i];
                    lap + 5.0 * p2 * p2 * w[i] + r[i] * nonlinearity_n(x, phi[i])
                }
            };
        }
        out[m] = 0.0;
    };
    // Perturbation value u = ψ - φ at node i.
    let pert = |w: &[f64], i: usize| match frame {
        Frame::Full => w[i] / r[i] - phi[i],
        Frame::Perturbation => w[i] / r[i],
    };
    let field = |w: &[f64], i: usize| match frame {
        Frame::Full => w[i] / r[i],
        Frame::Perturbation => w[i] / r[i] + phi[i],
    };
    let energy = |w: &[f64], vel: &[f64]| -> (f64, f64) {
        let mut quad = 0.5 * (w[0] / h).powi(2) * h;
        let mut pot = 0.0;
        for i in 0..m {
            quad += 0.5 * h * (vel[i] * vel[i] + ((w[i + 1] - w[i]) / h).powi(2));
            let x = w[i] / r[i];
            let g6 = match frame {
                Frame::Full => x.powi(6),
                Frame::Perturbation => {
                    let p = phi[i];
                    let p2 = p * p;
                    x * x * (15.0 * p2 * p2 + x * (20.0 * p2 * p + x * (15.0 * p2 + x * (6.0 * p + x))))
                }
            };
            pot += h * r[i] * r[i] * g6 / 6.0;
        }
        (quad - pot, quad)
    };

    let core = grid.index_at(opts.core_radius) + 1;
    let g = bg.g();
    let k = bg.k();
    let four_pi_h = 4.0 * std::f64::consts::PI * h;
    // n₊ = (⟨u,g⟩ + ⟨u_t,g⟩/k)/2 with u = w/r: ⟨w/r, g⟩ = 4π h Σ w g r.
    let n_plus = |w: &[f64], vel: &[f64]| {
        let mut a = 0.0;
        let mut b = 0.0;
        for i in 0..m {
            let gr = g[i] * r[i];
            a += pert(w, i) * g[i] * r[i] * r[i];
            b += vel[i] * gr;
        }
        0.5 * four_pi_h * (a + b / k)
    };

    let support_radius = initial.support_radius(bg, 1e-12)?;
    let boundary_exact = support_radius + t_final <= grid.r_max();
    let u0_sup = (0..n).map(|i| (initial.u[i] - if frame == Frame::Full { phi[i] } else { 0.0 }).abs());
    let u0_sup = u0_sup.fold(0.0f64, f64::max);
    let stationary_level = (opts.stationary_fraction * u0_sup).max(opts.stationary_floor);
    let center = bg.center_value();

    let mut prev: Vec<f64> = (0..n).map(|i| r[i] * initial.u[i]).collect();
    let wt0: Vec<f64> = (0..n).map(|i| r[i] * initial.ut[i]).collect();
    let mut acc = vec![0.0; n];
    accel(&prev, &mut acc);
    let mut cur: Vec<f64> = (0..n).map(|i| prev[i] + dt * wt0[i] + 0.5 * dt * dt * acc[i]).collect();
    cur[m] = prev[m];
    let mut next = vec![0.0; n];

    let steps = (t_final / dt - 1e-9).ceil().max(0.0) as usize;
    let to_state = |w: &[f64], vel: &[f64]| RadialState {
        grid: grid.clone(),
        u: (0..n).map(|i| w[i] / r[i]).collect(),
        ut: (0..n).map(|i| vel[i] / r[i]).collect(),
        frame,
    };

    let mut traj = Trajectory {
        times: vec![],
        sup_norms: vec![],
        local_energy: vec![],
        n_plus_series: vec![],
        energy: vec![],
        snapshot_times: vec![],
        snapshots: vec![],
        outcome: Outcome::Undecided,
        blowup_time: None,
        exit: None,
        energy_drift: 0.0,
        support_radius,
        boundary_exact,
        final_state: initial.clone(),
    };
    let mut e_scale = 0.0f64;
    let mut max_dev = 0.0f64;
    let mut e0 = 0.0;
    let mut dispersed_since: Option<f64> = None;
    let mut stationary_since: Option<f64> = Some(0.0);
    let mut vel = wt0.clone();
    let mut last_t = 0.0;

    // Step j: `prev` holds w^j (or the initial data at j = 0), `cur` w^{j+1}.
    let mut w_j = prev.clone();
    for j in 0..=steps {
        let t = j as f64 * dt;
        if j > 0 {
            // Advance: next = w^{j+1}, centered velocity at j.
            accel(&cur, &mut acc);
            for i in 0..m {
                next[i] = 2.0 * cur[i] - prev[i] + dt * dt * acc[i];
                vel[i] = (next[i] - prev[i]) / (2.0 * dt);
            }
            next[m] = cur[m];
            vel[m] = 0.0;
            std::mem::swap(&mut prev, &mut cur);
            std::mem::swap(&mut cur, &mut next);
            // now prev = w^j, cur = w^{j+1}
            w_j.copy_from_slice(&prev);
        }
        let w = &w_j;
        let sup_field = (0..n).map(|i| field(w, i).abs()).fold(0.0f64, f64::max);
        if w.iter().any(|x| !x.is_finite()) || sup_field > opts.blowup_factor * center {
            traj.outcome = Outcome::Blowup;
            traj.blowup_time = Some(t);
            break;
        }
        last_t = t;
        let np = n_plus(w, &vel);
        if let Some(level) = opts.exit_n_plus {
            if traj.exit.is_none() && np.abs() > level {
                traj.exit = Some(Exit { time: t, n_plus: np });
            }
        }
        let core_field = (0..core).map(|i| field(w, i).abs()).fold(0.0f64, f64::max);
        let core_pert = (0..core).map(|i| pert(w, i).abs()).fold(0.0f64, f64::max);
        if core_field < opts.dispersal_fraction * center {
            dispersed_since.get_or_insert(t);
        } else {
            dispersed_since = None;
        }
        if core_pert <= stationary_level && np.abs() <= opts.n_plus_threshold {
            stationary_since.get_or_insert(t);
        } else {
            stationary_since = None;
        }
        let record = j % opts.stride == 0 || j == steps || traj.exit.is_some();
        if record {
            let (e, quad) = energy(w, &vel);
            if j == 0 {
                e0 = e;
                e_scale = e.abs();
            }
            e_scale = e_scale.max(quad);
            max_dev = max_dev.max((e - e0).abs());
            traj.times.push(t);
            traj.energy.push(e);
            traj.n_plus_series.push(np);
            traj.sup_norms.push((0..n).map(|i| pert(w, i).abs()).fold(0.0, f64::max));
            let mut le = 0.0;
            for i in 0..core {
                let pw = |i: usize| match frame {
                    Frame::Full => w[i] - r[i] * phi[i],
                    Frame::Perturbation => w[i],
                };
                let dw = pw(i) - if i == 0 { 0.0 } else { pw(i - 1) };
                le += 0.5 * h * (vel[i] * vel[i] + (dw / h).powi(2));
            }
            traj.local_energy.push(le);
        }
        let snap = (opts.snapshot_stride > 0 && j % opts.snapshot_stride == 0) || j == 0;
        if snap {
            traj.snapshot_times.push(t);
            traj.snapshots.push(to_state(w, &vel));
        }
        traj.final_state = to_state(w, &vel);
        if traj.exit.is_some() {
            break;
        }
        if dispersed_since.is_some_and(|s| t - s >= opts.settle_window) {
            traj.outcome = Outcome::Dispersal;
            break;
        }
    }
    if traj.outcome == Outcome::Undecided && stationary_since.is_some_and(|s| last_t - s >= opts.settle_window - 1e-9) {
        traj.outcome = Outcome::Stationary;
    }
    if e_scale > 0.0 {
        traj.energy_drift = max_dev / e_scale;
    }
    if traj.snapshot_times.last() != Some(&last_t) {
        traj.snapshot_times.push(last_t);
        traj.snapshots.push(traj.final_state.clone());
    }
    Ok(traj)
}
