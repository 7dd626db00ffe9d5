use radial_core::{assemble_channel_operator, ChannelOperator};
use serde::{Deserialize, Serialize};
use solitons::NlsGroundState;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Sign {
    #[serde(rename = "L+")]
    Plus,
    #[serde(rename = "L-")]
    Minus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearizedPair {
    pub profile: NlsGroundState,
    pub ells: Vec<usize>,
    pub l_plus: Vec<ChannelOperator>,
    pub l_minus: Vec<ChannelOperator>,
    pub alpha_sq: f64,
}

impl LinearizedPair {
    pub fn channel(&self, sign: Sign, ell: usize) -> Option<&ChannelOperator> {
        let i = self.ells.iter().position(|&l| l == ell)?;
        Some(match sign {
            Sign::Plus => &self.l_plus[i],
            Sign::Minus => &self.l_minus[i],
        })
    }
}

/// Channel operators with potentials `α² - φ^{2σ}` (L₋) and
/// `α² - (2σ+1)φ^{2σ}` (L₊). Three dimensions only.
pub fn assemble_linearized_pair(profile: &NlsGroundState, ells: &[usize]) -> Result<LinearizedPair> {
    if profile.d != 3 {
        return Err(Error::InvalidArgument("linearized pairs are built for d = 3 only".into()));
    }
    if ells.is_empty() {
        return Err(Error::InvalidArgument("need at least one channel".into()));
    }
    let a2 = profile.alpha * profile.alpha;
    let s = profile.sigma;
    let p2s: Vec<f64> = profile.samples.iter().map(|p| p.abs().powf(2.0 * s)).collect();
    let vm: Vec<f64> = p2s.iter().map(|q| a2 - q).collect();
    let vp: Vec<f64> = p2s.iter().map(|q| a2 - (2.0 * s + 1.0) * q).collect();
    let mut l_plus = Vec::with_capacity(ells.len());
    let mut l_minus = Vec::with_capacity(ells.len());
    for &ell in ells {
        l_plus.push(assemble_channel_operator(&profile.grid, ell, &vp)?);
        l_minus.push(assemble_channel_operator(&profile.grid, ell, &vm)?);
    }
    Ok(LinearizedPair { profile: profile.clone(), ells: ells.to_vec(), l_plus, l_minus, alpha_sq: a2 })
}
