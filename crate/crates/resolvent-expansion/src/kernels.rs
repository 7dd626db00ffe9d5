use num_complex::Complex64;

use crate::error::{Error, Result};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// Kernel of `(-Δ - z²)^{-1}` in `d = 1` or `d = 3`, for points at
/// coordinates `x`, `y` along a line (only `|x - y|` enters).
///
/// `d = 1`: `i e^{iz|x-y|}/(2z)`; `d = 3`: `e^{iz|x-y|}/(4π|x-y|)`.
/// The `d = 1` sign is the one for which `(-d²/dx² - z²)K = δ`; at `z = i`
/// the kernel is `e^{-|x-y|}/2 > 0`.
pub fn free_resolvent_kernel(d: usize, z: Complex64, x: f64, y: f64) -> Result<Complex64> {
    if !(z.im > 0.0) {
        return Err(Error::InvalidArgument(format!("need Im z > 0, got {z}")));
    }
    let dist = (x - y).abs();
    match d {
        1 => Ok(I * (I * z * dist).exp() / (2.0 * z)),
        3 => {
            if dist == 0.0 {
                return Err(Error::OnDiagonalSingularity);
            }
            Ok((I * z * dist).exp() / (4.0 * std::f64::consts::PI * dist))
        }
        _ => Err(Error::InvalidArgument(format!("dimension {d} not supported (1 or 3)"))),
    }
}

/// Reduced `ℓ = 0` free kernel on the half-line with Dirichlet at 0:
/// `i(e^{iz|r-s|} - e^{iz(r+s)})/(2z)`, the kernel of `(-d²/dr² - z²)^{-1}`
/// acting on `w = rψ`. Regular at `z = 0`, where it tends to `min(r, s)`.
pub fn halfline_free_kernel(z: Complex64, r: f64, s: f64) -> Result<Complex64> {
    if z.norm() == 0.0 {
        return Ok(Complex64::new(zero_energy_green(r, s), 0.0));
    }
    if z.im < 0.0 {
        return Err(Error::InvalidArgument(format!("need Im z ≥ 0, got {z}")));
    }
    if r < 0.0 || s < 0.0 {
        return Err(Error::InvalidArgument("half-line points must be nonnegative".into()));
    }
    let a = I * z * (r - s).abs();
    let b = I * z * (r + s);
    // e^a - e^b = e^a(1 - e^{b-a}), with 1 - e^x by expm1 to keep small z accurate.
    let x = b - a;
    let one_minus = -expm1(x);
    Ok(I * a.exp() * one_minus / (2.0 * z))
}

fn expm1(x: Complex64) -> Complex64 {
    if x.norm() < 1e-5 {
        x + x * x / 2.0 + x * x * x / 6.0
    } else {
        x.exp() - 1.0
    }
}

/// Green kernel of `-d²/dr²` on the half-line, Dirichlet at 0, bounded at ∞.
pub fn zero_energy_green(r: f64, s: f64) -> f64 {
    r.min(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_forms() {
        let k = free_resolvent_kernel(1, I, 0.3, 0.3).unwrap();
        assert!((k - Complex64::new(0.5, 0.0)).norm() < 1e-15);
        let k = free_resolvent_kernel(3, I, 0.0, 1.0).unwrap();
        assert!((k.re - (-1f64).exp() / (4.0 * std::f64::consts::PI)).abs() < 1e-15);
        assert_eq!(free_resolvent_kernel(3, I, 1.0, 1.0), Err(Error::OnDiagonalSingularity));
        assert!(free_resolvent_kernel(1, Complex64::new(1.0, 0.0), 0.0, 0.0).is_err());
    }

    #[test]
    fn regular_part_is_bounded() {
        // K - i/(2z) = i(e^{iz|x-y|} - 1)/(2z) → -|x-y|/2.
        for rho in [1e-2, 1e-4, 1e-6] {
            let z = Complex64::new(0.0, rho);
            let rest = free_resolvent_kernel(1, z, 0.0, 2.0).unwrap() - I / (2.0 * z);
            assert!((rest - Complex64::new(-1.0, 0.0)).norm() < 3.0 * rho, "{rest}");
        }
    }

    #[test]
    fn halfline_kernel_tends_to_green() {
        let z = Complex64::new(1e-7, 1e-7);
        let k = halfline_free_kernel(z, 0.7, 2.5).unwrap();
        assert!((k - Complex64::new(0.7, 0.0)).norm() < 1e-6);
    }
}
