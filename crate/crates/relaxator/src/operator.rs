//! Operator algebra on a finite-dimensional Hilbert space.
//!
//! Operators are dense complex matrices. The Liouville-space structure is the
//! Hilbert-Schmidt inner product `(A|B) = Tr(A† B)` together with a fixed
//! vectorization convention: the dyad `|m⟩⟨n|` maps to flat index `m·d + n`
//! (row-major). Every module in the crate inherits this convention.

use crate::error::{Error, Result};
use ndarray::{Array1, Array2};
use num_complex::Complex64 as C64;

pub type CMat = Array2<C64>;
pub type CVec = Array1<C64>;

/// Relative tolerance used when validating Hermiticity flags at construction.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Tolerance on the minimum eigenvalue of a flagged density operator.
pub const DENSITY_EIG_TOL: f64 = 1e-10;

/// A labeled operator on the system Hilbert space.
///
/// Construction through [`OperatorMatrix::hermitian`] or
/// [`OperatorMatrix::density`] validates the corresponding invariant;
/// violations are errors, not warnings.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    mat: CMat,
    label: String,
}

impl OperatorMatrix {
    pub fn new(mat: CMat, label: impl Into<String>) -> Result<Self> {
        if mat.nrows() != mat.ncols() {
            return Err(Error::DimensionMismatch {
                context: "OperatorMatrix::new",
                expected: mat.nrows(),
                got: mat.ncols(),
            });
        }
        Ok(Self {
            mat,
            label: label.into(),
        })
    }

    /// A Hermitian-flagged operator; fails if `mat` deviates from its
    /// conjugate transpose by more than `HERMITICITY_TOL` relative.
    pub fn hermitian(mat: CMat, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let dev = hermiticity_deviation(&mat);
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                what: label,
                deviation: dev,
            });
        }
        Self::new(mat, label)
    }

    /// A density-operator-flagged instance: Hermitian, unit trace within
    /// `HERMITICITY_TOL`, eigenvalues above `-DENSITY_EIG_TOL`.
    pub fn density(mat: CMat, label: impl Into<String>) -> Result<Self> {
        let label = label.into();
        let dev = hermiticity_deviation(&mat);
        if dev > HERMITICITY_TOL {
            return Err(Error::NotHermitian {
                what: label,
                deviation: dev,
            });
        }
        let tr = trace(&mat);
        if (tr - C64::new(1.0, 0.0)).norm() > HERMITICITY_TOL * mat.nrows() as f64 {
            return Err(Error::InvalidDensity {
                reason: format!("trace = {tr}, expected 1"),
            });
        }
        let evals = crate::linalg::eigvalsh(&mat)?;
        if let Some(min) = evals.iter().cloned().reduce(f64::min) {
            if min < -DENSITY_EIG_TOL {
                return Err(Error::InvalidDensity {
                    reason: format!("minimum eigenvalue {min:.3e}"),
                });
            }
        }
        Self::new(mat, label)
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }
}

impl std::ops::Deref for OperatorMatrix {
    type Target = CMat;
    fn deref(&self) -> &CMat {
        &self.mat
    }
}

/// Maximum relative deviation of `m` from its conjugate transpose.
pub fn hermiticity_deviation(m: &CMat) -> f64 {
    let scale = frob_norm(m).max(1.0);
    let mut dev: f64 = 0.0;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            dev = dev.max((m[[i, j]] - m[[j, i]].conj()).norm());
        }
    }
    dev / scale
}

/// Hilbert-Schmidt inner product `Tr(A† B)`.
pub fn hs_inner(a: &CMat, b: &CMat) -> Result<C64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            context: "hs_inner",
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let mut acc = C64::new(0.0, 0.0);
    for (x, y) in a.iter().zip(b.iter()) {
        acc += x.conj() * y;
    }
    Ok(acc)
}

/// Flatten an operator to a Liouville-space vector, `|m⟩⟨n| ↦ m·d + n`.
pub fn vectorize(x: &CMat) -> CVec {
    CVec::from_iter(x.iter().cloned())
}

/// Inverse of [`vectorize`]; fails if the length is not a perfect square.
pub fn devectorize(v: &CVec) -> Result<CMat> {
    let n = v.len();
    let d = (n as f64).sqrt().round() as usize;
    if d * d != n {
        return Err(Error::NotSquareLength(n));
    }
    Ok(CMat::from_shape_vec((d, d), v.to_vec()).expect("square reshape"))
}

/// Conjugate transpose.
pub fn dagger(m: &CMat) -> CMat {
    let mut out = CMat::zeros((m.ncols(), m.nrows()));
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            out[[j, i]] = m[[i, j]].conj();
        }
    }
    out
}

pub fn trace(m: &CMat) -> C64 {
    (0..m.nrows().min(m.ncols())).map(|i| m[[i, i]]).sum()
}

pub fn frob_norm(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

pub fn max_abs(m: &CMat) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMat, b: &CMat) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Kronecker product, first factor on the coarse (slow) index.
pub fn kron(a: &CMat, b: &CMat) -> CMat {
    let (ar, ac) = a.dim();
    let (br, bc) = b.dim();
    let mut out = CMat::zeros((ar * br, ac * bc));
    for i in 0..ar {
        for j in 0..ac {
            let aij = a[[i, j]];
            if aij == C64::new(0.0, 0.0) {
                continue;
            }
            for k in 0..br {
                for l in 0..bc {
                    out[[i * br + k, j * bc + l]] = aij * b[[k, l]];
                }
            }
        }
    }
    out
}

/// Trace out the environment factor of an operator on a `d_s·d_e`-dimensional
/// product space (system index slow, environment index fast).
pub fn partial_trace_env(x_tot: &CMat, d_s: usize, d_e: usize) -> Result<CMat> {
    let d = d_s * d_e;
    if x_tot.nrows() != d || x_tot.ncols() != d {
        return Err(Error::DimensionMismatch {
            context: "partial_trace_env",
            expected: d,
            got: x_tot.nrows(),
        });
    }
    let mut out = CMat::zeros((d_s, d_s));
    for m in 0..d_s {
        for n in 0..d_s {
            let mut acc = C64::new(0.0, 0.0);
            for a in 0..d_e {
                acc += x_tot[[m * d_e + a, n * d_e + a]];
            }
            out[[m, n]] = acc;
        }
    }
    Ok(out)
}

pub fn identity(d: usize) -> CMat {
    CMat::eye(d)
}

/// Dyad `|i⟩⟨j|`.
pub fn dyad(d: usize, i: usize, j: usize) -> CMat {
    let mut m = CMat::zeros((d, d));
    m[[i, j]] = C64::new(1.0, 0.0);
    m
}

pub fn from_real(rows: &[&[f64]]) -> CMat {
    let d = rows.len();
    let mut m = CMat::zeros((d, rows[0].len()));
    for (i, r) in rows.iter().enumerate() {
        for (j, x) in r.iter().enumerate() {
            m[[i, j]] = C64::new(*x, 0.0);
        }
    }
    m
}

// Two-level helpers with ordering |g⟩ = index 0, |e⟩ = index 1.
pub fn proj_g() -> CMat {
    dyad(2, 0, 0)
}
pub fn proj_e() -> CMat {
    dyad(2, 1, 1)
}
/// Raising operator `|e⟩⟨g|`.
pub fn sigma_plus() -> CMat {
    dyad(2, 1, 0)
}
/// Lowering operator `|g⟩⟨e|`.
pub fn sigma_minus() -> CMat {
    dyad(2, 0, 1)
}
pub fn sigma_x() -> CMat {
    &sigma_plus() + &sigma_minus()
}
pub fn sigma_y() -> CMat {
    let mut m = CMat::zeros((2, 2));
    m[[1, 0]] = C64::new(0.0, 1.0);
    m[[0, 1]] = C64::new(0.0, -1.0);
    m
}
/// `σ₃ = P_e − P_g`.
pub fn sigma_z() -> CMat {
    &proj_e() - &proj_g()
}
