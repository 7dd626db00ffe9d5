use radial_core::numerov::sign_changes;
use radial_core::{apply_operator, tridiag, ChannelOperator};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EigenPair {
    pub energy: f64,
    /// Per-node samples, `Σ v² h = 1`, Dirichlet zero in the last slot.
    pub vector: Vec<f64>,
    pub node_count: usize,
}

/// Number of eigenvalues of `op` strictly below `energy`; equivalently the
/// number of sign changes of the discrete regular solution at that energy.
pub fn count_nodes(op: &ChannelOperator, energy: f64) -> usize {
    op.count_below(energy)
}

/// Eigenpair for the `k`-th eigenvalue, validated by its node count.
pub(crate) fn eigenpair(op: &ChannelOperator, k: usize) -> Result<EigenPair> {
    let energy = tridiag::eigenvalue_by_index(op.diag(), op.off(), k);
    let mut v = op.extend(&tridiag::inverse_iteration(op.diag(), op.off(), energy));
    let s = 1.0 / op.grid().h().sqrt();
    let peak = v.iter().copied().fold(0.0f64, |a, x| if x.abs() > a.abs() { x } else { a });
    let sign = if k == 0 { v.iter().sum::<f64>().signum() } else { peak.signum() };
    v.iter_mut().for_each(|x| *x *= s * sign);

    let av = apply_operator(op, &v)?;
    let res = (av.iter().zip(&v).map(|(a, b)| (a - energy * b).powi(2)).sum::<f64>() * op.grid().h()).sqrt();
    if res > 1e-8 * (energy.abs() + 1.0) {
        return Err(Error::NumericFailure(format!("eigenpair {k}: residual {res:.3e}")));
    }
    let node_count = sign_changes(&v, 1e-8);
    if node_count != k {
        return Err(Error::NumericFailure(format!("eigenpair {k}: node count {node_count} contradicts its index")));
    }
    Ok(EigenPair { energy, vector: v, node_count })
}

/// All eigenpairs with negative energy, ascending; the ground state is
/// returned positive.
pub fn negative_eigenpairs(op: &ChannelOperator) -> Result<Vec<EigenPair>> {
    (0..op.count_below(0.0)).map(|k| eigenpair(op, k)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use radial_core::{assemble_channel_operator, make_grid};

    #[test]
    fn free_channels_have_no_bound_states() {
        let g = make_grid(10.0, 200).unwrap();
        for ell in 0..3 {
            let op = assemble_channel_operator(&g, ell, &vec![0.0; 200]).unwrap();
            assert!(negative_eigenpairs(&op).unwrap().is_empty());
        }
    }

    #[test]
    fn dirichlet_count_on_pi() {
        let g = make_grid(std::f64::consts::PI, 2000).unwrap();
        let op = assemble_channel_operator(&g, 0, &vec![0.0; 2000]).unwrap();
        assert_eq!(count_nodes(&op, 2.5), 1);
    }

    #[test]
    fn square_well_pairs() {
        let g = make_grid(20.0, 1000).unwrap();
        let v = g.sample(|r| if r < 3.0 { -4.0 } else { 0.0 });
        let op = assemble_channel_operator(&g, 0, &v).unwrap();
        let pairs = negative_eigenpairs(&op).unwrap();
        // κa = 6 ⇒ ⌊6/π + 1/2⌋ = 2 bound states
        assert_eq!(pairs.len(), 2);
        for (k, p) in pairs.iter().enumerate() {
            assert_eq!(p.node_count, k);
            let norm: f64 = p.vector.iter().map(|x| x * x).sum::<f64>() * g.h();
            assert!((norm - 1.0).abs() < 1e-12);
        }
        assert!(pairs[0].vector.iter().all(|&x| x >= -1e-14));
    }
}
