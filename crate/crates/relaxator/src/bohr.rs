//! Spectral (Bohr) decomposition of system operators.
//!
//! A Hermitian Hamiltonian is resolved into distinct energy levels with
//! eigenprojectors `P_n`; the differences `ε_n − ε_m` are clustered into
//! distinct Bohr frequencies `ω̃`. Any operator `X` decomposes into frequency
//! components `X(ω̃) = Σ_{ε_n − ε_m = ω̃} P_m X P_n`, which satisfy
//! `X(ω̃)† = (X†)(−ω̃)` and sum back to `X`.

use crate::error::{Error, Result};
use crate::linalg::eigh;
use crate::operator::{dagger, hermiticity_deviation, CMat};
use crate::superop::{sandwich, SuperOp};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct BohrSpectrum {
    /// Distinct energies, ascending.
    energies: Vec<f64>,
    /// Eigenprojector for each distinct energy.
    projectors: Vec<CMat>,
    /// Orthonormal eigenbasis (columns), one per Hilbert-space dimension.
    basis: CMat,
    /// Energy of each basis column.
    basis_energies: Vec<f64>,
    /// Distinct Bohr frequencies, ascending; contains 0.
    bohr: Vec<f64>,
    /// For each Bohr frequency, the level pairs `(m, n)` with `ε_n − ε_m = ω̃`.
    pairs: Vec<Vec<(usize, usize)>>,
}

/// Default clustering tolerance: `1e−9 ×` spectral span.
pub fn default_cluster_tol(evals: &[f64]) -> f64 {
    let span = evals.last().copied().unwrap_or(0.0) - evals.first().copied().unwrap_or(0.0);
    1e-9 * span.max(1e-300)
}

/// Diagonalize a Hermitian `H` and cluster its eigenvalue differences into
/// distinct Bohr frequencies. `cluster_tol = None` uses the default rule.
pub fn bohr_decompose(h: &CMat, cluster_tol: Option<f64>) -> Result<BohrSpectrum> {
    let dev = hermiticity_deviation(h);
    if dev > 1e-10 {
        return Err(Error::NotHermitian {
            what: "bohr_decompose input".into(),
            deviation: dev,
        });
    }
    let (evals, basis) = eigh(h)?;
    let tol = cluster_tol.unwrap_or_else(|| default_cluster_tol(&evals));

    // cluster eigenvalues into distinct levels
    let mut energies: Vec<f64> = Vec::new();
    let mut members: Vec<Vec<usize>> = Vec::new();
    for (i, &e) in evals.iter().enumerate() {
        match energies.last() {
            Some(&last) if (e - last).abs() <= tol => {
                members.last_mut().unwrap().push(i);
                // keep the cluster representative at the mean
                let grp = members.last().unwrap();
                let mean = grp.iter().map(|&k| evals[k]).sum::<f64>() / grp.len() as f64;
                *energies.last_mut().unwrap() = mean;
            }
            _ => {
                energies.push(e);
                members.push(vec![i]);
            }
        }
    }

    let d = h.nrows();
    let mut projectors = Vec::with_capacity(energies.len());
    for grp in &members {
        let mut p = CMat::zeros((d, d));
        for &k in grp {
            let col = basis.column(k);
            for i in 0..d {
                for j in 0..d {
                    p[[i, j]] += col[i] * col[j].conj();
                }
            }
        }
        projectors.push(p);
    }

    // cluster all level differences into distinct Bohr frequencies
    let mut diffs: Vec<(f64, usize, usize)> = Vec::new();
    for m in 0..energies.len() {
        for n in 0..energies.len() {
            diffs.push((energies[n] - energies[m], m, n));
        }
    }
    diffs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    let mut bohr: Vec<f64> = Vec::new();
    let mut pairs: Vec<Vec<(usize, usize)>> = Vec::new();
    for (w, m, n) in diffs {
        match bohr.last() {
            Some(&last) if (w - last).abs() <= tol.max(1e-14) => {
                pairs.last_mut().unwrap().push((m, n));
            }
            _ => {
                bohr.push(w);
                pairs.push(vec![(m, n)]);
            }
        }
    }
    // snap the zero frequency exactly
    for w in bohr.iter_mut() {
        if w.abs() <= tol.max(1e-14) {
            *w = 0.0;
        }
    }

    let mut basis_energies = vec![0.0; d];
    for (lvl, grp) in members.iter().enumerate() {
        for &k in grp {
            basis_energies[k] = energies[lvl];
        }
    }

    Ok(BohrSpectrum {
        energies,
        projectors,
        basis,
        basis_energies,
        bohr,
        pairs,
    })
}

impl BohrSpectrum {
    pub fn dim(&self) -> usize {
        self.basis.nrows()
    }

    /// Distinct energy levels, ascending.
    pub fn energies(&self) -> &[f64] {
        &self.energies
    }

    pub fn projectors(&self) -> &[CMat] {
        &self.projectors
    }

    /// Orthonormal eigenbasis as matrix columns.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    /// Energy attached to each basis column (degenerate entries repeat).
    pub fn basis_energies(&self) -> &[f64] {
        &self.basis_energies
    }

    /// Distinct Bohr frequencies `ε_n − ε_m`, ascending.
    pub fn bohr_frequencies(&self) -> &[f64] {
        &self.bohr
    }

    /// Level pairs `(m, n)` contributing to the `idx`-th Bohr frequency.
    pub fn pairs(&self, idx: usize) -> &[(usize, usize)] {
        &self.pairs[idx]
    }

    /// Index of the Bohr frequency closest to `w`, if within `tol`.
    pub fn freq_index(&self, w: f64, tol: f64) -> Option<usize> {
        let mut best = None;
        let mut dist = tol;
        for (i, &b) in self.bohr.iter().enumerate() {
            let d = (b - w).abs();
            if d <= dist {
                dist = d;
                best = Some(i);
            }
        }
        best
    }

    /// Frequency component `X(ω̃) = Σ_{ε_n − ε_m = ω̃} P_m X P_n`.
    pub fn component(&self, x: &CMat, idx: usize) -> CMat {
        let d = self.dim();
        let mut out = CMat::zeros((d, d));
        for &(m, n) in &self.pairs[idx] {
            out = out + self.projectors[m].dot(x).dot(&self.projectors[n]);
        }
        out
    }

    /// The component extraction as a superoperator `Σ P_m ⊗ P_nᵀ`.
    pub fn component_superop(&self, idx: usize) -> SuperOp {
        let d = self.dim();
        let mut acc = SuperOp::zeros(d);
        for &(m, n) in &self.pairs[idx] {
            acc = &acc + &sandwich(&self.projectors[m], &self.projectors[n]);
        }
        acc
    }

    /// Matrix elements of `x` in the eigenbasis.
    pub fn to_eigenbasis(&self, x: &CMat) -> CMat {
        dagger(&self.basis).dot(x).dot(&self.basis)
    }

    /// Inverse of [`Self::to_eigenbasis`].
    pub fn from_eigenbasis(&self, x: &CMat) -> CMat {
        self.basis.dot(x).dot(&dagger(&self.basis))
    }
}

/// Convenience: expectation `Tr(ρ X)` as a complex number.
pub fn expectation(rho: &CMat, x: &CMat) -> C64 {
    crate::operator::trace(&rho.dot(x))
}
