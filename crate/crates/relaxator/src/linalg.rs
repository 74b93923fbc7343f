//! Thin wrappers around the dense LAPACK routines used throughout the crate.

use crate::error::{Error, Result};
use crate::operator::{dagger, frob_norm, CMat, CVec};
use ndarray_linalg::{Eig, Eigh, Inverse, Solve, UPLO};
use num_complex::Complex64 as C64;

/// Eigenvalues of a Hermitian matrix (ascending).
pub fn eigvalsh(m: &CMat) -> Result<Vec<f64>> {
    let (w, _) = m.eigh(UPLO::Lower)?;
    Ok(w.to_vec())
}

/// Hermitian eigendecomposition; eigenvalues ascending, eigenvectors as columns.
///
/// The backend returns the complex eigenvector array in a layout whose
/// conjugate holds the actual eigenvectors; the conjugation here restores
/// `m = V diag(w) V†` with honest columns.
pub fn eigh(m: &CMat) -> Result<(Vec<f64>, CMat)> {
    let (w, v) = m.eigh(UPLO::Lower)?;
    Ok((w.to_vec(), v.mapv(|z| z.conj())))
}

/// General complex eigendecomposition with bi-orthonormal left partners.
///
/// Returns `(eigenvalues, right, left)` where the columns of `right` are right
/// eigenvectors, the rows of `left` are the matching left row-vectors
/// (`left = right⁻¹`), so `left · m · right = diag(eigenvalues)` and the pairs
/// are bi-orthonormal by construction. A near-singular eigenvector matrix
/// (condition number above `cond_limit`) reports defectiveness.
pub fn eig_general(m: &CMat, cond_limit: f64) -> Result<(CVec, CMat, CMat)> {
    let (evals, right) = m.eig()?;
    let left = right.inv().map_err(|_| Error::Defective { cond: f64::INFINITY })?;
    let cond = frob_norm(&right) * frob_norm(&left);
    if cond > cond_limit {
        return Err(Error::Defective { cond });
    }
    Ok((evals, right, left))
}

/// Default eigenvector condition-number limit for defectiveness detection.
pub const DEFECT_COND_LIMIT: f64 = 1e8;

pub fn solve(a: &CMat, b: &CVec) -> Result<CVec> {
    Ok(a.solve(b)?)
}

pub fn inv(a: &CMat) -> Result<CMat> {
    Ok(a.inv()?)
}

/// `z·1 − m`.
pub fn shifted(z: C64, m: &CMat) -> CMat {
    let mut out = m.mapv(|x| -x);
    for i in 0..m.nrows() {
        out[[i, i]] += z;
    }
    out
}

/// Resolvent `(z − m)⁻¹`.
pub fn resolvent(z: C64, m: &CMat) -> Result<CMat> {
    inv(&shifted(z, m))
}

/// Matrix exponential by scaling and squaring with a Taylor kernel.
///
/// Dimensions in this crate stay below ~100, where this is accurate to
/// machine precision and fast enough.
pub fn expm(m: &CMat) -> CMat {
    let d = m.nrows();
    let norm = frob_norm(m);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scale = 2f64.powi(-(squarings as i32));
    let a = m.mapv(|z| z * scale);
    let mut term = CMat::eye(d);
    let mut sum = CMat::eye(d);
    for k in 1..=20 {
        term = term.dot(&a).mapv(|z| z / k as f64);
        sum = &sum + &term;
    }
    for _ in 0..squarings {
        sum = sum.dot(&sum);
    }
    sum
}

/// Frobenius condition-number estimate `‖A‖_F · ‖A⁻¹‖_F`.
pub fn cond_frob(a: &CMat) -> Result<f64> {
    Ok(frob_norm(a) * frob_norm(&inv(a)?))
}

/// Hermitize: `(m + m†)/2`.
pub fn hermitize(m: &CMat) -> CMat {
    let md = dagger(m);
    (m + &md).mapv(|z| z * 0.5)
}
