use radial_core::RadialGrid;
use serde::{Deserialize, Serialize};

use crate::background::StaticBackground;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Frame {
    /// `u` is the field `ψ` itself.
    Full,
    /// `u = ψ - φ(·,1)`.
    Perturbation,
}

/// Radial Cauchy data `(u, ∂_t u)` sampled on the grid nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialState {
    pub grid: RadialGrid,
    pub u: Vec<f64>,
    pub ut: Vec<f64>,
    pub frame: Frame,
}

impl RadialState {
    pub fn new(grid: &RadialGrid, u: Vec<f64>, ut: Vec<f64>, frame: Frame) -> Result<Self> {
        let n = grid.n();
        if u.len() != n || ut.len() != n {
            return Err(Error::InvalidArgument(format!("state has {}/{} samples, grid has {n}", u.len(), ut.len())));
        }
        if u.iter().chain(&ut).any(|x| !x.is_finite()) {
            return Err(Error::InvalidArgument("state has non-finite samples".into()));
        }
        Ok(RadialState { grid: grid.clone(), u, ut, frame })
    }

    pub fn zero(grid: &RadialGrid, frame: Frame) -> Self {
        RadialState { grid: grid.clone(), u: vec![0.0; grid.n()], ut: vec![0.0; grid.n()], frame }
    }

    fn check_grid(&self, bg: &StaticBackground) -> Result<()> {
        if bg.grid() != &self.grid {
            return Err(Error::InvalidArgument("state and background live on different grids".into()));
        }
        Ok(())
    }

    /// The same data in the perturbation frame about `bg`.
    pub fn to_perturbation(&self, bg: &StaticBackground) -> Result<RadialState> {
        self.check_grid(bg)?;
        Ok(match self.frame {
            Frame::Perturbation => self.clone(),
            Frame::Full => RadialState {
                u: self.u.iter().zip(bg.phi()).map(|(u, p)| u - p).collect(),
                frame: Frame::Perturbation,
                ..self.clone()
            },
        })
    }

    /// The same data in the full frame.
    pub fn to_full(&self, bg: &StaticBackground) -> Result<RadialState> {
        self.check_grid(bg)?;
        Ok(match self.frame {
            Frame::Full => self.clone(),
            Frame::Perturbation => RadialState {
                u: self.u.iter().zip(bg.phi()).map(|(u, p)| u + p).collect(),
                frame: Frame::Full,
                ..self.clone()
            },
        })
    }

    /// Largest radius at which the perturbation (both slots) exceeds
    /// `rel · max|perturbation|`; 0 for the unperturbed soliton.
    pub fn support_radius(&self, bg: &StaticBackground, rel: f64) -> Result<f64> {
        let p = self.to_perturbation(bg)?;
        let big = p.u.iter().chain(&p.ut).fold(0.0f64, |m, x| m.max(x.abs()));
        if big == 0.0 {
            return Ok(0.0);
        }
        let r = self.grid.nodes();
        let last = (0..r.len()).rev().find(|&i| p.u[i].abs().max(p.ut[i].abs()) > rel * big);
        Ok(last.map_or(0.0, |i| r[i]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::make_grid;

    #[test]
    fn frame_round_trip() {
        let g = make_grid(20.0, 400).unwrap();
        let bg = StaticBackground::new(&g).unwrap();
        let u: Vec<f64> = g.nodes().iter().map(|r| 0.1 * (-r * r).exp()).collect();
        let s = RadialState::new(&g, u.clone(), vec![0.0; 400], Frame::Perturbation).unwrap();
        let back = s.to_full(&bg).unwrap().to_perturbation(&bg).unwrap();
        let err = back.u.iter().zip(&u).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(err < 1e-15);
        let rs = s.support_radius(&bg, 1e-12).unwrap();
        assert!(rs > 5.0 && rs < 6.0, "{rs}");
        assert!(RadialState::new(&g, vec![f64::NAN; 400], vec![0.0; 400], Frame::Full).is_err());
    }
}
