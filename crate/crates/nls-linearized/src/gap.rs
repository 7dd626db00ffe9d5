use halfline_spectral::{free_tail_diagnosis_at, ZeroModeKind, DEFAULT_THRESHOLD};
use radial_core::{make_grid, ChannelOperator};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use solitons::nls_ground_state;

use crate::count::continuum_count;
use crate::error::{Error, Result};
use crate::pair::{assemble_linearized_pair, LinearizedPair, Sign};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChannelGap {
    pub operator: Sign,
    pub ell: usize,
    /// Eigenvalues in `(0, α²)`.
    pub eigenvalues: Vec<f64>,
    pub edge_resonance: bool,
    pub edge_kind: ZeroModeKind,
    pub edge_slope_rel: f64,
    pub edge_const_rel: f64,
    /// Eigenvalues below the edge, including any at or below 0.
    pub count_below_edge: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub sigma: f64,
    pub channels: Vec<ChannelGap>,
    pub gap_holds: bool,
}

fn scan_channel(op: &ChannelOperator, sign: Sign, alpha_sq: f64) -> Result<ChannelGap> {
    // Zero itself is excluded: L₋φ = 0 and L₊∇φ = 0 sit exactly there.
    let floor = 1e-5 * alpha_sq;
    let n_edge = continuum_count(op, alpha_sq, alpha_sq)?;
    let n_floor = continuum_count(op, floor, alpha_sq)?;
    let mut eigenvalues = Vec::new();
    for k in n_floor..n_edge {
        let (mut lo, mut hi) = (floor, alpha_sq);
        while hi - lo > 1e-12 * alpha_sq {
            let mid = 0.5 * (lo + hi);
            if continuum_count(op, mid, alpha_sq)? > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        eigenvalues.push(0.5 * (lo + hi));
    }
    let diag = free_tail_diagnosis_at(op, alpha_sq, DEFAULT_THRESHOLD)?;
    Ok(ChannelGap {
        operator: sign,
        ell: op.ell(),
        eigenvalues,
        edge_resonance: diag.kind != ZeroModeKind::None,
        edge_kind: diag.kind,
        edge_slope_rel: diag.slope_rel,
        edge_const_rel: diag.const_rel,
        count_below_edge: n_edge,
    })
}

/// Eigenvalues of `L±` in `(0, α²)` per channel, located by bisection on the
/// continuum count, and the edge diagnosis of `L± - α²`.
pub fn gap_scan(pair: &LinearizedPair) -> Result<GapReport> {
    let jobs: Vec<(Sign, &ChannelOperator)> =
        pair.l_minus.iter().map(|op| (Sign::Minus, op)).chain(pair.l_plus.iter().map(|op| (Sign::Plus, op))).collect();
    let channels =
        jobs.into_par_iter().map(|(s, op)| scan_channel(op, s, pair.alpha_sq)).collect::<Result<Vec<_>>>()?;
    let gap_holds = channels.iter().all(|c| c.eigenvalues.is_empty() && !c.edge_resonance);
    Ok(GapReport { sigma: pair.profile.sigma, channels, gap_holds })
}

/// Grid and channel policy for building a pair at a given σ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairConfig {
    pub alpha: f64,
    /// Domain length in units of `1/α`.
    pub r_max_alpha: f64,
    pub n: usize,
    pub ell_max: usize,
}

impl Default for PairConfig {
    fn default() -> Self {
        PairConfig { alpha: 1.0, r_max_alpha: 40.0, n: 3000, ell_max: 1 }
    }
}

impl PairConfig {
    pub fn build(&self, sigma: f64) -> Result<LinearizedPair> {
        let grid = make_grid(self.r_max_alpha / self.alpha, self.n)?;
        let profile = nls_ground_state(sigma, self.alpha, 3, &grid)?;
        let ells: Vec<usize> = (0..=self.ell_max).collect();
        assemble_linearized_pair(&profile, &ells)
    }

    pub fn gap_holds(&self, sigma: f64) -> Result<bool> {
        Ok(gap_scan(&self.build(sigma)?)?.gap_holds)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SigmaStar {
    pub estimate: f64,
    pub bracket: (f64, f64),
    pub evaluations: usize,
    pub config: PairConfig,
}

/// Bisection on σ of the boolean `gap_holds`; the gap must fail at the
/// lower end and hold at the upper end.
pub fn sigma_star(bracket: (f64, f64), tol: f64, config: &PairConfig) -> Result<SigmaStar> {
    let (mut lo, mut hi) = bracket;
    if !(lo < hi) || !(tol > 0.0) {
        return Err(Error::InvalidArgument(format!("bad bracket {bracket:?} or tolerance {tol}")));
    }
    let (glo, ghi) = rayon::join(|| config.gap_holds(lo), || config.gap_holds(hi));
    let (glo, ghi) = (glo?, ghi?);
    if glo || !ghi {
        return Err(Error::InvalidBracket(format!(
            "gap holds at σ = {lo}: {glo}, at σ = {hi}: {ghi}; need false/true"
        )));
    }
    let mut evaluations = 2;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if config.gap_holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
        evaluations += 1;
    }
    Ok(SigmaStar { estimate: 0.5 * (lo + hi), bracket: (lo, hi), evaluations, config: config.clone() })
}

/// Gap reports along a σ grid; the points are independent and run concurrently.
pub fn gap_scan_sigmas(sigmas: &[f64], config: &PairConfig) -> Result<Vec<GapReport>> {
    sigmas.par_iter().map(|&s| gap_scan(&config.build(s)?)).collect()
}

/// Number of times `gap_holds` flips along a report sequence.
pub fn gap_crossings(reports: &[GapReport]) -> usize {
    reports.windows(2).filter(|w| w[0].gap_holds != w[1].gap_holds).count()
}
