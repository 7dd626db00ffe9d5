use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `n₊(0) = -∫₀^T e^{-ks}F₊(s) ds`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityValue {
    pub value: f64,
    /// `|F₊(T)|e^{-kT}/k`, the size of the neglected tail for slowly varying `F₊`.
    pub tail_bound: f64,
    /// Set when `kT < 20`.
    pub warning: Option<String>,
}

/// `n₊(t)` on the forcing's sample times.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeSeries {
    pub times: Vec<f64>,
    pub n_plus: Vec<f64>,
}

fn check_samples(times: &[f64], values: &[f64], k: f64) -> Result<()> {
    if !(k > 0.0) || !k.is_finite() {
        return Err(Error::InvalidArgument(format!("k must be positive, got {k}")));
    }
    if times.len() != values.len() || times.len() < 2 {
        return Err(Error::InvalidArgument("need at least two (t, F) samples of equal length".into()));
    }
    if times[0] != 0.0 || times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidArgument("sample times must start at 0 and increase".into()));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("forcing has non-finite samples".into()));
    }
    Ok(())
}

/// `Σ_{n≥2} s^n xⁿ (n-1)/n!` for `s = -1` (`1 - e^{-x}(1+x)`) and
/// `Σ_{n≥2} xⁿ/n!` for the growing case, by series where cancellation bites.
fn moment_decay(x: f64) -> f64 {
    if x > 0.1 {
        return -(-x).exp_m1() - x * (-x).exp();
    }
    let (mut term, mut sum) = (1.0, 0.0);
    for n in 1..=16 {
        term *= -x / n as f64;
        if n >= 2 {
            sum += term * (n - 1) as f64;
        }
    }
    sum
}

fn moment_growth(x: f64) -> f64 {
    if x > 0.1 {
        return x.exp_m1() - x;
    }
    let (mut term, mut sum) = (1.0, 0.0);
    for n in 1..=16 {
        term *= x / n as f64;
        if n >= 2 {
            sum += term;
        }
    }
    sum
}

/// Stability condition: the unique `n₊(0)` for which `ṅ₊ = kn₊ + F₊` has no
/// `e^{kt}` component, truncated at the last sample `T`. `F₊` is taken
/// piecewise linear between samples and integrated exactly against `e^{-ks}`
/// (Filon), which matches [`evolve_unstable_mode`] step for step.
pub fn stability_initial_condition(times: &[f64], forcing: &[f64], k: f64) -> Result<StabilityValue> {
    check_samples(times, forcing, k)?;
    let mut acc = 0.0;
    for i in 0..times.len() - 1 {
        let d = times[i + 1] - times[i];
        let x = k * d;
        let i0 = -(-x).exp_m1() / k;
        let i1 = moment_decay(x) / (k * k);
        let slope = (forcing[i + 1] - forcing[i]) / d;
        acc += (-k * times[i]).exp() * (forcing[i] * i0 + slope * i1);
    }
    let t_end = *times.last().unwrap();
    let warning = (k * t_end < 20.0).then(|| format!("short horizon: kT = {:.3} < 20", k * t_end));
    Ok(StabilityValue { value: -acc, tail_bound: forcing.last().unwrap().abs() * (-k * t_end).exp() / k, warning })
}

/// `ṅ₊ - kn₊ = F₊`, stepped by the exact variation-of-constants formula with
/// `F₊` linear on each step.
pub fn evolve_unstable_mode(times: &[f64], forcing: &[f64], k: f64, n_plus_0: f64) -> Result<ModeSeries> {
    check_samples(times, forcing, k)?;
    let mut n = Vec::with_capacity(times.len());
    n.push(n_plus_0);
    for i in 0..times.len() - 1 {
        let d = times[i + 1] - times[i];
        let x = k * d;
        let j0 = x.exp_m1() / k;
        let j1 = moment_growth(x) / (k * k);
        let slope = (forcing[i + 1] - forcing[i]) / d;
        let next = x.exp() * n[i] + forcing[i] * j0 + slope * j1;
        n.push(next);
    }
    Ok(ModeSeries { times: times.to_vec(), n_plus: n })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn uniform(t_end: f64, count: usize) -> Vec<f64> {
        (0..count).map(|i| t_end * i as f64 / (count - 1) as f64).collect()
    }

    #[test]
    fn moments_match_closed_forms() {
        // Closed forms where they are accurate, leading series terms below.
        for x in [0.05f64, 0.099, 0.2, 2.0] {
            let want_d = 1.0 - (-x).exp() * (1.0 + x);
            let want_g = x.exp() - 1.0 - x;
            assert!((moment_decay(x) - want_d).abs() <= 1e-12 * want_d, "{x}");
            assert!((moment_growth(x) - want_g).abs() <= 1e-12 * want_g, "{x}");
        }
        for x in [1e-6f64, 1e-3] {
            let want_d = x * x / 2.0 - x.powi(3) / 3.0 + x.powi(4) / 8.0;
            let want_g = x * x / 2.0 + x.powi(3) / 6.0 + x.powi(4) / 24.0;
            assert!((moment_decay(x) / want_d - 1.0).abs() < 1e-8, "{x}");
            assert!((moment_growth(x) / want_g - 1.0).abs() < 1e-8, "{x}");
        }
    }

    #[test]
    fn exponential_forcing() {
        let t = uniform(30.0, 30001);
        let f: Vec<f64> = t.iter().map(|s| (-s).exp()).collect();
        let v = stability_initial_condition(&t, &f, 1.0).unwrap();
        assert!((v.value + 0.5).abs() < 1e-6, "{}", v.value);
        assert!(v.warning.is_none());
        let z = stability_initial_condition(&t, &vec![0.0; t.len()], 1.0).unwrap();
        assert_eq!(z.value, 0.0);
        let short = stability_initial_condition(&uniform(5.0, 11), &[0.0; 11], 1.0).unwrap();
        assert!(short.warning.is_some());
    }

    #[test]
    fn free_growth() {
        let t = uniform(5.0, 501);
        let zero = vec![0.0; t.len()];
        let s = evolve_unstable_mode(&t, &zero, 1.7, 0.0).unwrap();
        assert!(s.n_plus.iter().all(|&x| x == 0.0));
        let s = evolve_unstable_mode(&t, &zero, 1.7, 1e-3).unwrap();
        for (t, n) in s.times.iter().zip(&s.n_plus) {
            let want = 1e-3 * (1.7 * t).exp();
            assert!((n - want).abs() <= 1e-8 * want);
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(stability_initial_condition(&[0.0, 1.0], &[0.0, 1.0], 0.0).is_err());
        assert!(stability_initial_condition(&[0.5, 1.0], &[0.0, 1.0], 1.0).is_err());
        assert!(evolve_unstable_mode(&[0.0, 1.0, 1.0], &[0.0; 3], 1.0, 0.0).is_err());
    }
}
