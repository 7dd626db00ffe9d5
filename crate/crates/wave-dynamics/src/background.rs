use radial_core::tridiag::{self, TridiagLu};
use radial_core::{assemble_channel_operator, ChannelOperator, RadialGrid};
use solitons::AubinSoliton;

use crate::error::{Error, Result};

/// The static soliton `φ(·,1)` as the grid sees it, together with the
/// linearization `H = -Δ - 5φ⁴` about it and its ground state.
///
/// `φ_h` solves the discretized static equation `-Δ_h(rφ) = r φ⁵` exactly
/// (Newton), with `rφ` held at its closed-form value at `r_max`; it differs
/// from the closed form by `O(h²)`. Using it as the background makes `(φ_h, 0)`
/// an exact fixed point of the time stepper.
#[derive(Debug, Clone)]
pub struct StaticBackground {
    grid: RadialGrid,
    phi: Vec<f64>,
    dphi_da: Vec<f64>,
    op: ChannelOperator,
    g: Vec<f64>,
    k: f64,
}

impl StaticBackground {
    pub fn new(grid: &RadialGrid) -> Result<Self> {
        let sol = AubinSoliton::new(1.0)?;
        let r = grid.nodes();
        let n = grid.n();
        let h2 = grid.h() * grid.h();
        let mut w: Vec<f64> = r.iter().map(|&x| x * sol.phi(x)).collect();
        let m = n - 1;
        let mut converged = false;
        for _ in 0..30 {
            // F(w) = -Δ_h w - r (w/r)⁵ on interior nodes.
            let f: Vec<f64> = (0..m)
                .map(|i| {
                    let left = if i == 0 { 0.0 } else { w[i - 1] };
                    -(w[i + 1] - 2.0 * w[i] + left) / h2 - r[i] * (w[i] / r[i]).powi(5)
                })
                .collect();
            let diag: Vec<f64> = (0..m).map(|i| 2.0 / h2 - 5.0 * (w[i] / r[i]).powi(4)).collect();
            let off = vec![-1.0 / h2; m - 1];
            let lu = TridiagLu::new(&off, &diag, &off)?;
            let dw = lu.solve(&f);
            let step = dw.iter().fold(0.0f64, |a, x| a.max(x.abs()));
            for i in 0..m {
                w[i] -= dw[i];
            }
            if step <= 1e-12 * w.iter().fold(0.0f64, |a, x| a.max(x.abs())) {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(Error::NumericFailure("static soliton Newton did not converge".into()));
        }
        let phi: Vec<f64> = w.iter().zip(r).map(|(w, r)| w / r).collect();
        let dphi_da = r.iter().map(|&x| sol.dphi_da(x)).collect();
        let potential: Vec<f64> = phi.iter().map(|p| -5.0 * p.powi(4)).collect();
        let op = assemble_channel_operator(grid, 0, &potential)?;
        let lam = tridiag::eigenvalue_by_index(op.diag(), op.off(), 0);
        if !(lam < 0.0) {
            return Err(Error::NumericFailure(format!("no negative eigenvalue (lowest {lam})")));
        }
        let mut v = tridiag::inverse_iteration(op.diag(), op.off(), lam);
        let norm = (v.iter().map(|x| x * x).sum::<f64>() * grid.h()).sqrt();
        let sign = if v.iter().sum::<f64>() < 0.0 { -1.0 } else { 1.0 };
        v.iter_mut().for_each(|x| *x *= sign / norm);
        // ⟨g, g⟩ = 4π Σ h g² r² = Σ h v² = 1.
        let c = (4.0 * std::f64::consts::PI).sqrt();
        let mut g: Vec<f64> = v.iter().zip(r).map(|(v, r)| v / (r * c)).collect();
        g.push(0.0);
        Ok(StaticBackground { grid: grid.clone(), phi, dphi_da, op, g, k: (-lam).sqrt() })
    }

    pub fn grid(&self) -> &RadialGrid {
        &self.grid
    }

    /// `φ_h` at every node.
    pub fn phi(&self) -> &[f64] {
        &self.phi
    }

    /// Closed-form `∂_aφ(·,1)` at every node.
    pub fn dphi_da(&self) -> &[f64] {
        &self.dphi_da
    }

    /// `φ(0, 1) = 3^{1/4}`.
    pub fn center_value(&self) -> f64 {
        3f64.powf(0.25)
    }

    /// `H = -Δ - 5φ_h⁴` in the `ℓ = 0` channel.
    pub fn operator(&self) -> &ChannelOperator {
        &self.op
    }

    /// Ground state of `H`, unit in the 3-D radial measure (zero at `r_max`).
    pub fn g(&self) -> &[f64] {
        &self.g
    }

    /// `H g = -k² g`.
    pub fn k(&self) -> f64 {
        self.k
    }

    /// `⟨a, b⟩ = 4π Σ h a b r²`.
    pub fn inner(&self, a: &[f64], b: &[f64]) -> f64 {
        let r = self.grid.nodes();
        let s: f64 = (0..r.len()).map(|i| a[i] * b[i] * r[i] * r[i]).sum();
        4.0 * std::f64::consts::PI * s * self.grid.h()
    }
}
