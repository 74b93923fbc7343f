//! Superoperators: linear maps on Liouville space as dense `d²×d²` matrices.
//!
//! Under the crate's vectorization convention `vec(AXB) = (A ⊗ Bᵀ) vec(X)`,
//! so left multiplication, right multiplication and commutators become
//! Kronecker products. The Hilbert-Schmidt adjoint of a superoperator is the
//! conjugate transpose of its matrix.

use crate::error::{Error, Result};
use crate::operator::{dagger, devectorize, kron, vectorize, CMat, CVec};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct SuperOp {
    mat: CMat,
    dim: usize,
}

impl SuperOp {
    pub fn from_mat(mat: CMat) -> Result<Self> {
        let n = mat.nrows();
        if mat.ncols() != n {
            return Err(Error::DimensionMismatch {
                context: "SuperOp::from_mat",
                expected: n,
                got: mat.ncols(),
            });
        }
        let dim = (n as f64).sqrt().round() as usize;
        if dim * dim != n {
            return Err(Error::NotSquareLength(n));
        }
        Ok(Self { mat, dim })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            mat: CMat::zeros((dim * dim, dim * dim)),
            dim,
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            mat: CMat::eye(dim * dim),
            dim,
        }
    }

    /// Hilbert dimension `d` of the space the operators live on.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn mat(&self) -> &CMat {
        &self.mat
    }

    pub fn into_mat(self) -> CMat {
        self.mat
    }

    pub fn apply_vec(&self, v: &CVec) -> CVec {
        self.mat.dot(v)
    }

    pub fn apply(&self, x: &CMat) -> CMat {
        devectorize(&self.mat.dot(&vectorize(x))).expect("square by construction")
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &SuperOp) -> SuperOp {
        SuperOp {
            mat: self.mat.dot(&other.mat),
            dim: self.dim,
        }
    }

    /// Adjoint with respect to the Hilbert-Schmidt inner product.
    pub fn hs_adjoint(&self) -> SuperOp {
        SuperOp {
            mat: dagger(&self.mat),
            dim: self.dim,
        }
    }

    pub fn scale(&self, c: C64) -> SuperOp {
        SuperOp {
            mat: self.mat.mapv(|z| z * c),
            dim: self.dim,
        }
    }

    /// Largest violation of `Tr(Mρ) = 0` over the canonical basis: the unit
    /// operator must be a left null vector.
    pub fn trace_conservation_residual(&self) -> f64 {
        let d = self.dim;
        let mut worst: f64 = 0.0;
        for col in 0..d * d {
            let mut acc = C64::new(0.0, 0.0);
            for m in 0..d {
                acc += self.mat[[m * d + m, col]];
            }
            worst = worst.max(acc.norm());
        }
        worst
    }
}

impl std::ops::Add for &SuperOp {
    type Output = SuperOp;
    fn add(self, rhs: &SuperOp) -> SuperOp {
        SuperOp {
            mat: &self.mat + &rhs.mat,
            dim: self.dim,
        }
    }
}

impl std::ops::Sub for &SuperOp {
    type Output = SuperOp;
    fn sub(self, rhs: &SuperOp) -> SuperOp {
        SuperOp {
            mat: &self.mat - &rhs.mat,
            dim: self.dim,
        }
    }
}

/// Superoperator of left multiplication, `X ↦ AX`.
pub fn left_mult(a: &CMat) -> SuperOp {
    let d = a.nrows();
    SuperOp {
        mat: kron(a, &CMat::eye(d)),
        dim: d,
    }
}

/// Superoperator of right multiplication, `X ↦ XA`.
pub fn right_mult(a: &CMat) -> SuperOp {
    let d = a.nrows();
    let at = a.t().to_owned();
    SuperOp {
        mat: kron(&CMat::eye(d), &at),
        dim: d,
    }
}

/// Commutator superoperator `X ↦ HX − XH`. For Hermitian `H` this is
/// Hermitian under the Hilbert-Schmidt metric with spectrum `{ε_n − ε_m}`.
pub fn commutator_superop(h: &CMat) -> SuperOp {
    &left_mult(h) - &right_mult(h)
}

/// Anticommutator superoperator `X ↦ HX + XH`.
pub fn anticommutator_superop(h: &CMat) -> SuperOp {
    &left_mult(h) + &right_mult(h)
}

/// Sandwich superoperator `X ↦ A X B`.
pub fn sandwich(a: &CMat, b: &CMat) -> SuperOp {
    let bt = b.t().to_owned();
    SuperOp {
        mat: kron(a, &bt),
        dim: a.nrows(),
    }
}
