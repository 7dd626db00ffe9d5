use radial_core::{make_grid, RadialGrid};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Positive radial solution of `(α² - Δ)φ = φ^{2σ+1}` in `d` dimensions,
/// sampled on a radial grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NlsGroundState {
    pub sigma: f64,
    pub alpha: f64,
    pub d: usize,
    pub grid: RadialGrid,
    pub samples: Vec<f64>,
    pub center_value: f64,
    pub decay_rate: f64,
    /// Radius beyond which the exact linear tail `C e^{-αr} r^{-(d-1)/2}` is used.
    pub match_radius: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Shot {
    Overshoot,
    Undershoot,
    Undecided,
}

struct Problem<'a> {
    sigma: f64,
    alpha: f64,
    d: usize,
    grid: &'a RadialGrid,
}

impl Problem<'_> {
    fn accel(&self, r: f64, p: f64, dp: f64) -> f64 {
        let a2 = self.alpha * self.alpha;
        a2 * p - p.abs().powf(2.0 * self.sigma) * p - (self.d as f64 - 1.0) / r * dp
    }

    /// RK4 with step `h` from the series start at the first node; stops at the
    /// first zero crossing (overshoot) or turn-around (undershoot).
    fn shoot(&self, phi0: f64) -> (Shot, Vec<f64>) {
        let h = self.grid.h();
        let c = (self.alpha * self.alpha * phi0 - phi0.powf(2.0 * self.sigma + 1.0)) / (2.0 * self.d as f64);
        let mut p = phi0 + c * h * h;
        let mut dp = 2.0 * c * h;
        let mut out = Vec::with_capacity(self.grid.n());
        out.push(p);
        let mut r = h;
        for _ in 1..self.grid.n() {
            let k1 = (dp, self.accel(r, p, dp));
            let k2 = (dp + 0.5 * h * k1.1, self.accel(r + 0.5 * h, p + 0.5 * h * k1.0, dp + 0.5 * h * k1.1));
            let k3 = (dp + 0.5 * h * k2.1, self.accel(r + 0.5 * h, p + 0.5 * h * k2.0, dp + 0.5 * h * k2.1));
            let k4 = (dp + h * k3.1, self.accel(r + h, p + h * k3.0, dp + h * k3.1));
            p += h / 6.0 * (k1.0 + 2.0 * k2.0 + 2.0 * k3.0 + k4.0);
            dp += h / 6.0 * (k1.1 + 2.0 * k2.1 + 2.0 * k3.1 + k4.1);
            r += h;
            if p < 0.0 {
                return (Shot::Overshoot, out);
            }
            if dp > 0.0 {
                return (Shot::Undershoot, out);
            }
            out.push(p);
        }
        (Shot::Undecided, out)
    }

    fn tail(&self, r: f64) -> f64 {
        (-self.alpha * r).exp() * r.powf(-0.5 * (self.d as f64 - 1.0))
    }
}

fn validate(sigma: f64, alpha: f64, d: usize) -> Result<()> {
    if d != 1 && d != 3 {
        return Err(Error::InvalidArgument(format!("dimension must be 1 or 3, got {d}")));
    }
    if !(sigma > 0.0) || (d == 3 && sigma >= 2.0) {
        return Err(Error::InvalidArgument(format!("sigma = {sigma} outside the admissible range")));
    }
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha}")));
    }
    Ok(())
}

pub fn nls_ground_state(sigma: f64, alpha: f64, d: usize, grid: &RadialGrid) -> Result<NlsGroundState> {
    validate(sigma, alpha, d)?;
    let pb = Problem { sigma, alpha, d, grid };

    // Below α^{1/σ} the right-hand side pushes φ upward immediately.
    let mut lo = alpha.powf(1.0 / sigma);
    let mut hi = 2.0 * lo;
    let mut tries = 0;
    while pb.shoot(hi).0 != Shot::Overshoot {
        lo = hi;
        hi *= 2.0;
        tries += 1;
        if tries > 60 {
            return Err(Error::NoConvergence("no overshooting initial value found".into()));
        }
    }
    while hi - lo > 1e-12 * hi {
        let mid = 0.5 * (lo + hi);
        match pb.shoot(mid).0 {
            Shot::Overshoot => hi = mid,
            _ => lo = mid,
        }
    }
    let center = 0.5 * (lo + hi);
    let (_, below) = pb.shoot(lo);
    let (_, above) = pb.shoot(hi);
    let (_, mid) = pb.shoot(center);

    // Keep the shot profile while the bracket ends still agree closely.
    let reach = below.len().min(above.len()).min(mid.len());
    let mut m = 0;
    while m + 1 < reach {
        let spread = (above[m + 1] - below[m + 1]).abs();
        if mid[m + 1] <= 0.0 || spread > 1e-5 * mid[m + 1] {
            break;
        }
        m += 1;
    }
    if m < 8 {
        return Err(Error::Shooting("shot profile unusable near the origin".into()));
    }
    let r = grid.nodes();
    let anchor = mid[m] / pb.tail(r[m]);
    let samples: Vec<f64> = (0..grid.n()).map(|i| if i <= m { mid[i] } else { anchor * pb.tail(r[i]) }).collect();
    let (samples, center) = if d == 3 {
        let s = polish(&pb, samples)?;
        // Even in r: interpolate a + b r² + c r⁴ through the first three nodes.
        let c = 1.5 * s[0] - 0.6 * s[1] + 0.1 * s[2];
        (s, c)
    } else {
        (samples, center)
    };
    if samples.iter().any(|&p| !(p > 0.0) && p != 0.0) {
        return Err(Error::Shooting("profile is not positive".into()));
    }

    let lo_i = m / 2;
    let xs = &r[lo_i..=m];
    let ys: Vec<f64> = (lo_i..=m).map(|i| (samples[i] * r[i].powf(0.5 * (d as f64 - 1.0))).ln()).collect();
    let decay_rate = -radial_core::fit::linear_fit(xs, &ys)?.0;

    Ok(NlsGroundState {
        sigma,
        alpha,
        d,
        grid: grid.clone(),
        samples,
        center_value: center,
        decay_rate,
        match_radius: r[m],
    })
}

/// Newton iterations on the Numerov discretization of `w'' = α²w - φ^{2σ}w`,
/// `w = rφ`, with `w(0) = 0` and the exterior tail value held at `r_max`.
/// Removes the splice between shot profile and tail; the result solves the
/// discrete boundary-value problem to round-off.
fn polish(pb: &Problem, samples: Vec<f64>) -> Result<Vec<f64>> {
    let g = pb.grid;
    let (r, h) = (g.nodes(), g.h());
    let n = g.n();
    let m = n - 1;
    let c = h * h / 12.0;
    let a2 = pb.alpha * pb.alpha;
    let two_s = 2.0 * pb.sigma;
    let mut w: Vec<f64> = r.iter().zip(&samples).map(|(r, p)| r * p).collect();
    let mut last = f64::INFINITY;
    for _ in 0..16 {
        let phi_pow: Vec<f64> = (0..n).map(|i| (w[i] / r[i]).abs().powf(two_s)).collect();
        let gfun: Vec<f64> = (0..n).map(|i| (a2 - phi_pow[i]) * w[i]).collect();
        let dg: Vec<f64> = (0..n).map(|i| a2 - (two_s + 1.0) * phi_pow[i]).collect();
        let f: Vec<f64> = (0..m)
            .map(|i| {
                let (wl, gl) = if i == 0 { (0.0, 0.0) } else { (w[i - 1], gfun[i - 1]) };
                -(w[i + 1] - 2.0 * w[i] + wl) + c * (gfun[i + 1] + 10.0 * gfun[i] + gl)
            })
            .collect();
        let diag: Vec<f64> = (0..m).map(|i| 2.0 + 10.0 * c * dg[i]).collect();
        let sub: Vec<f64> = (1..m).map(|i| -1.0 + c * dg[i - 1]).collect();
        let sup: Vec<f64> = (0..m - 1).map(|i| -1.0 + c * dg[i + 1]).collect();
        let lu = radial_core::tridiag::TridiagLu::new(&sub, &diag, &sup)?;
        let delta = lu.solve(&f);
        let mut change = 0.0f64;
        for i in 0..m {
            w[i] -= delta[i];
            change = change.max(delta[i].abs());
        }
        let scale = w.iter().fold(0.0f64, |a, x| a.max(x.abs()));
        // Quadratic convergence stalls at round-off; stop once it does.
        if change <= 1e-14 * scale || (change <= 1e-11 * scale && change >= 0.5 * last) {
            return Ok((0..n).map(|i| w[i] / r[i]).collect());
        }
        last = change;
    }
    Err(Error::NoConvergence("Newton polish of the shot profile did not converge".into()))
}

/// Exact scaling `φ_β(x) = (β/α)^{1/σ} φ_α((β/α)x)`, carried out on a
/// rescaled grid.
pub fn rescale_ground_state(profile: &NlsGroundState, alpha_new: f64) -> Result<NlsGroundState> {
    if !(alpha_new > 0.0) || !alpha_new.is_finite() {
        return Err(Error::InvalidArgument(format!("alpha must be positive, got {alpha_new}")));
    }
    let lam = alpha_new / profile.alpha;
    let amp = lam.powf(1.0 / profile.sigma);
    let grid = make_grid(profile.grid.r_max() / lam, profile.grid.n())?;
    Ok(NlsGroundState {
        sigma: profile.sigma,
        alpha: alpha_new,
        d: profile.d,
        grid,
        samples: profile.samples.iter().map(|p| amp * p).collect(),
        center_value: amp * profile.center_value,
        decay_rate: profile.decay_rate * lam,
        match_radius: profile.match_radius / lam,
    })
}

/// `‖φ‖₂²` over `R^d`.
pub fn mass(profile: &NlsGroundState) -> f64 {
    let g = &profile.grid;
    let h = g.h();
    match profile.d {
        1 => h * profile.center_value.powi(2) + 2.0 * h * profile.samples.iter().map(|p| p * p).sum::<f64>(),
        _ => {
            let s: f64 = g.nodes().iter().zip(&profile.samples).map(|(r, p)| p * p * r * r).sum();
            4.0 * std::f64::consts::PI * h * s
        }
    }
}

/// `∂_αφ` on the profile's grid by a centered difference of two shots
/// (relative step 1e-4).
pub fn alpha_derivative(profile: &NlsGroundState) -> Result<Vec<f64>> {
    let da = 1e-4 * profile.alpha;
    let up = nls_ground_state(profile.sigma, profile.alpha + da, profile.d, &profile.grid)?;
    let dn = nls_ground_state(profile.sigma, profile.alpha - da, profile.d, &profile.grid)?;
    Ok(up.samples.iter().zip(&dn.samples).map(|(a, b)| (a - b) / (2.0 * da)).collect())
}
