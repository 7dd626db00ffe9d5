/// `N(u, φ) = (φ+u)⁵ - φ⁵ - 5φ⁴u`, expanded so that small `u` loses nothing
/// to cancellation.
pub fn nonlinearity_n(u: f64, phi: f64) -> f64 {
    let u2 = u * u;
    let p2 = phi * phi;
    u2 * (10.0 * phi * p2 + u * (10.0 * p2 + u * (5.0 * phi + u)))
}
