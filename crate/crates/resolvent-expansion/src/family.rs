use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};

type CMatrix = DMatrix<Complex64>;

/// `z ↦ A₁(z)`; must stay bounded near `z = 0`.
pub type A1Map = Box<dyn Fn(Complex64) -> CMatrix + Send + Sync>;

/// `A(z) = A₀ + zA₁(z)` with `A₀` real symmetric and singular, and `S` the
/// orthogonal projection onto `ker A₀`.
pub struct SingularFamily {
    a0: DMatrix<f64>,
    a1: A1Map,
    s: DMatrix<f64>,
    basis: DMatrix<f64>,
    gap: f64,
}

impl std::fmt::Debug for SingularFamily {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SingularFamily")
            .field("dim", &self.dim())
            .field("rank_s", &self.rank_s())
            .field("gap", &self.gap)
            .finish()
    }
}

const KERNEL_TOL: f64 = 1e-10;

impl SingularFamily {
    /// Builds `S` from the eigenvectors of `A₀` with `|λ| ≤ 1e-10·‖A₀‖`.
    pub fn new(a0: DMatrix<f64>, a1: A1Map) -> Result<Self> {
        let n = a0.nrows();
        if n == 0 || a0.ncols() != n {
            return Err(Error::InvalidArgument("A₀ must be square and nonempty".into()));
        }
        let norm = a0.norm().max(1e-300);
        if (&a0 - a0.transpose()).norm() > 1e-12 * norm {
            return Err(Error::InvalidArgument("A₀ is not symmetric".into()));
        }
        let eig = a0.clone().symmetric_eigen();
        let scale = eig.eigenvalues.amax();
        let kernel: Vec<usize> = (0..n).filter(|&i| eig.eigenvalues[i].abs() <= KERNEL_TOL * scale).collect();
        if kernel.is_empty() {
            return Err(Error::InvalidArgument("A₀ is invertible; nothing singular to resolve".into()));
        }
        let gap =
            (0..n).filter(|i| !kernel.contains(i)).map(|i| eig.eigenvalues[i].abs()).fold(f64::INFINITY, f64::min);
        let basis = DMatrix::from_fn(n, kernel.len(), |i, j| eig.eigenvectors[(i, kernel[j])]);
        let s = &basis * basis.transpose();
        Ok(SingularFamily { a0, a1, s, basis, gap })
    }

    pub fn dim(&self) -> usize {
        self.a0.nrows()
    }

    pub fn rank_s(&self) -> usize {
        self.basis.ncols()
    }

    /// Distance from 0 to the rest of the spectrum of `A₀`.
    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn a0(&self) -> &DMatrix<f64> {
        &self.a0
    }

    pub fn projection(&self) -> &DMatrix<f64> {
        &self.s
    }

    pub fn a(&self, z: Complex64) -> CMatrix {
        complex(&self.a0) + (self.a1)(z) * z
    }

    /// `‖S - S(A₀+S)^{-1}S‖`, which self-adjointness of `A₀` forces to vanish.
    pub fn kernel_defect(&self) -> Result<f64> {
        let inv = (&self.a0 + &self.s).try_inverse().ok_or_else(|| Error::NotInvertible("A₀ + S".into()))?;
        Ok((&self.s - &self.s * inv * &self.s).norm())
    }
}

fn complex(m: &DMatrix<f64>) -> CMatrix {
    m.map(|x| Complex64::new(x, 0.0))
}

/// Ratio of extreme singular values.
pub fn condition_number(m: &CMatrix) -> f64 {
    let sv = m.clone().singular_values();
    let (mx, mn) = (sv.max(), sv.min());
    if mn == 0.0 {
        f64::INFINITY
    } else {
        mx / mn
    }
}

#[derive(Debug, Clone)]
pub struct JnInverse {
    pub a_inv: CMatrix,
    /// `B(z) = (S - S(A(z)+S)^{-1}S)/z`.
    pub b: CMatrix,
    /// Size of `B(z)` on `ran S` relative to its smallest singular value.
    pub b_condition: f64,
    pub a_plus_s_condition: f64,
}

/// Beyond this, a matrix is treated as singular.
const SINGULAR_CONDITION: f64 = 1e12;

/// `A(z)^{-1} = (A+S)^{-1} + z^{-1}(A+S)^{-1} S B^{-1} S (A+S)^{-1}`, with
/// `B^{-1}` taken on `ran S`.
pub fn jensen_nenciu_invert(family: &SingularFamily, z: Complex64) -> Result<JnInverse> {
    if z.norm() == 0.0 {
        return Err(Error::InvalidArgument("z must be nonzero".into()));
    }
    let s = complex(&family.s);
    let q = complex(&family.basis);
    let a_plus_s = family.a(z) + &s;
    let a_plus_s_condition = condition_number(&a_plus_s);
    if a_plus_s_condition > SINGULAR_CONDITION {
        return Err(Error::NotInvertible(format!("A(z) + S (condition {a_plus_s_condition:.3e}); |z| too large")));
    }
    let m = a_plus_s.clone().lu().try_inverse().ok_or_else(|| Error::NotInvertible("A(z) + S".into()))?;
    let b = (&s - &s * &m * &s) / z;
    let b_red = q.adjoint() * &b * &q;
    let b_condition = b_scaled_condition(&b_red, &m, z);
    if b_condition > SINGULAR_CONDITION {
        return Err(Error::NotInvertible(format!("B(z) on ran S (condition {b_condition:.3e})")));
    }
    let b_red_inv = b_red.lu().try_inverse().ok_or_else(|| Error::NotInvertible("B(z)".into()))?;
    let b_inv = &q * b_red_inv * q.adjoint();
    let a_inv = &m + (&m * &s * b_inv * &s * &m) / z;
    Ok(JnInverse { a_inv, b, b_condition, a_plus_s_condition })
}

fn random_symmetric_with_kernel<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> DMatrix<f64> {
    let g = DMatrix::from_fn(dim, dim, |_, _| rng.gen_range(-1.0..1.0));
    let q = g.qr().q();
    // Nonzero eigenvalues bounded away from 0, with random signs.
    let lam = nalgebra::DVector::from_fn(dim, |i, _| {
        if i < rank {
            0.0
        } else {
            let mag = rng.gen_range(0.5..2.0);
            if rng.gen_bool(0.5) {
                mag
            } else {
                -mag
            }
        }
    });
    let a = &q * DMatrix::from_diagonal(&lam) * q.transpose();
    (&a + a.transpose()) * 0.5
}

/// `A₀` random symmetric with a `rank`-dimensional kernel and `A₁` a
/// constant random symmetric matrix.
pub fn random_family<R: Rng>(rng: &mut R, dim: usize, rank: usize) -> Result<SingularFamily> {
    if rank == 0 || rank >= dim {
        return Err(Error::InvalidArgument(format!("need 0 < rank < dim, got {rank}, {dim}")));
    }
    let a0 = random_symmetric_with_kernel(rng, dim, rank);
    let a1 = random_symmetric_with_kernel(rng, dim, 0);
    let a1c = complex(&a1);
    SingularFamily::new(a0, Box::new(move |_| a1c.clone()))
}

/// A family with `A(z₀)` exactly singular: `A₁ = (M - A₀)/z₀` for a random
/// symmetric `M` with a one-dimensional kernel.
pub fn degenerate_family<R: Rng>(rng: &mut R, dim: usize, rank: usize, z0: Complex64) -> Result<SingularFamily> {
    if rank == 0 || rank >= dim || z0.norm() == 0.0 {
        return Err(Error::InvalidArgument("need 0 < rank < dim and z₀ ≠ 0".into()));
    }
    let a0 = random_symmetric_with_kernel(rng, dim, rank);
    let m = random_symmetric_with_kernel(rng, dim, 1);
    let a1 = complex(&(&m - &a0)) / z0;
    SingularFamily::new(a0, Box::new(move |_| a1.clone()))
}

/// Condition numbers of `A(z)` and of `B(z)` on `ran S`; the lemma says both
/// are finite together.
pub fn condition_pair(family: &SingularFamily, z: Complex64) -> Result<(f64, f64)> {
    let s = complex(&family.s);
    let q = complex(&family.basis);
    let a = family.a(z);
    let m = (&a + &s).lu().try_inverse().ok_or_else(|| Error::NotInvertible("A(z) + S".into()))?;
    let b = (&s - &s * &m * &s) / z;
    Ok((condition_number(&a), b_scaled_condition(&(q.adjoint() * b * &q), &m, z)))
}

/// `B(z)` measured against its natural size `(1 + ‖(A+S)^{-1}‖)/|z|`
/// rather than its own largest singular value, so that a rank-one `S`
/// (where `B` is 1×1) still registers as singular.
fn b_scaled_condition(b_red: &CMatrix, m: &CMatrix, z: Complex64) -> f64 {
    let scale = (1.0 + m.norm()) / z.norm();
    let mn = b_red.clone().singular_values().min();
    if mn == 0.0 {
        f64::INFINITY
    } else {
        scale / mn
    }
}

/// Outcome of the randomized lemma check.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct JnSuiteReport {
    pub instances: usize,
    /// Worst `‖formula - direct‖_F / ‖direct‖_F`.
    pub max_relative_error: f64,
    /// Worst `‖S - S(A₀+S)^{-1}S‖`.
    pub max_kernel_defect: f64,
    /// Degenerate instances where `A(z₀)` and `B(z₀)` were both singular
    /// (condition > 1e10), out of `degenerate`.
    pub degenerate_agree: usize,
    pub degenerate: usize,
    /// Regular instances where `A(z)` and `B(z)` were both well conditioned.
    pub regular_agree: usize,
}

const SUITE_SINGULAR: f64 = 1e10;

/// `instances` random families (dims 10–50, kernel ranks 1–3) inverted at
/// `z` by the formula and directly, plus as many degenerate families with
/// `A(z)` singular by construction.
pub fn run_jn_suite<R: Rng>(rng: &mut R, instances: usize, z: Complex64) -> Result<JnSuiteReport> {
    let mut report = JnSuiteReport {
        instances,
        max_relative_error: 0.0,
        max_kernel_defect: 0.0,
        degenerate_agree: 0,
        degenerate: instances,
        regular_agree: 0,
    };
    for _ in 0..instances {
        let dim = rng.gen_range(10..=50);
        let rank = rng.gen_range(1..=3);
        let fam = random_family(rng, dim, rank)?;
        let inv = jensen_nenciu_invert(&fam, z)?;
        let direct = fam.a(z).lu().try_inverse().ok_or_else(|| Error::NotInvertible("A(z)".into()))?;
        let err = (&inv.a_inv - &direct).norm() / direct.norm();
        report.max_relative_error = report.max_relative_error.max(err);
        report.max_kernel_defect = report.max_kernel_defect.max(fam.kernel_defect()?);
        let (ca, cb) = condition_pair(&fam, z)?;
        if ca < SUITE_SINGULAR && cb < SUITE_SINGULAR {
            report.regular_agree += 1;
        }

        let deg = degenerate_family(rng, dim, rank, z)?;
        let (ca, cb) = condition_pair(&deg, z)?;
        report.max_kernel_defect = report.max_kernel_defect.max(deg.kernel_defect()?);
        if ca > SUITE_SINGULAR && cb > SUITE_SINGULAR && jensen_nenciu_invert(&deg, z).is_err() {
            report.degenerate_agree += 1;
        }
    }
    Ok(report)
}
