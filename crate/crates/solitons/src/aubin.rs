use radial_core::RadialGrid;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AubinSoliton {
    a: f64,
}

impl AubinSoliton {
    pub fn new(a: f64) -> Result<Self> {
        if !(a > 0.0) || !a.is_finite() {
            return Err(Error::InvalidArgument(format!("dilation parameter must be positive, got {a}")));
        }
        Ok(AubinSoliton { a })
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    fn amp(&self) -> f64 {
        (3.0 * self.a).powf(0.25)
    }

    pub fn phi(&self, r: f64) -> f64 {
        self.amp() / (1.0 + self.a * r * r).sqrt()
    }

    pub fn dphi_da(&self, r: f64) -> f64 {
        let s = 1.0 + self.a * r * r;
        self.amp() * (1.0 - self.a * r * r) / (4.0 * self.a * s * s.sqrt())
    }

    pub fn dphi_dr(&self, r: f64) -> f64 {
        let s = 1.0 + self.a * r * r;
        -self.amp() * self.a * r / (s * s.sqrt())
    }

    /// `V = -5φ⁴ = -15a/(1+ar²)²`.
    pub fn potential(&self, r: f64) -> f64 {
        let s = 1.0 + self.a * r * r;
        -15.0 * self.a / (s * s)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AubinSamples {
    pub phi: Vec<f64>,
    pub dphi_da: Vec<f64>,
    pub potential: Vec<f64>,
}

pub fn aubin_values(a: f64, grid: &RadialGrid) -> Result<AubinSamples> {
    let s = AubinSoliton::new(a)?;
    Ok(AubinSamples {
        phi: grid.sample(|r| s.phi(r)),
        dphi_da: grid.sample(|r| s.dphi_da(r)),
        potential: grid.sample(|r| s.potential(r)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::make_grid;

    #[test]
    fn center_values() {
        let s = AubinSoliton::new(1.0).unwrap();
        assert!((s.phi(0.0) - 1.316074).abs() < 1e-6);
        // -5φ(0)⁴ = -5·3
        assert!((s.potential(0.0) + 15.0).abs() < 1e-12);
        assert!(AubinSoliton::new(0.0).is_err());
    }

    #[test]
    fn derivatives_match_differences() {
        let (a, r, d) = (1.7, 0.9, 1e-5);
        let s = AubinSoliton::new(a).unwrap();
        let fd_a = (AubinSoliton::new(a + d).unwrap().phi(r) - AubinSoliton::new(a - d).unwrap().phi(r)) / (2.0 * d);
        let fd_r = (s.phi(r + d) - s.phi(r - d)) / (2.0 * d);
        assert!((fd_a - s.dphi_da(r)).abs() < 1e-9);
        assert!((fd_r - s.dphi_dr(r)).abs() < 1e-9);
        assert!((s.potential(r) + 5.0 * s.phi(r).powi(4)).abs() < 1e-12);
    }

    #[test]
    fn samples_have_grid_length() {
        let g = make_grid(10.0, 64).unwrap();
        let v = aubin_values(2.0, &g).unwrap();
        assert_eq!(v.phi.len(), 64);
        assert_eq!(v.potential.len(), 64);
    }
}
