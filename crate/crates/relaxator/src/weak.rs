//! Weak-coupling assembly of the frequency-dependent generator from a system
//! Hamiltonian, Hermitian coupling operators `S_k` and tabulated bath
//! correlation functions.
//!
//! The dissipator acts through Bohr-frequency components: with
//! `M1 = [S_k, ·] ∘ Π_ω̃ ∘ (S_k′ ·)` and `M2 = [S_k, ·] ∘ Π_ω̃ ∘ (· S_k′)`,
//!
//! ```text
//! Γ(ω)  = Σ  γ_kk′(ω+ω̃) M1 − γ_k′k(−ω−ω̃) M2
//! ΔH(ω) = Σ  s_kk′(ω+ω̃) M1 + s_k′k(−ω−ω̃) M2
//! D(z)  = Σ  g_kk′(z+ω̃) M1 + w_kk′(z+ω̃) M2
//! ```
//!
//! where `w_kk′(z)` is the upper-half-plane function with boundary value
//! `s_k′k(−ω) + iγ_k′k(−ω)`, so `L(z) = L_P + D(z)` is analytic and its
//! real-axis limit splits as `ΔH − iΓ`. The sums run over the clustered Bohr
//! frequencies of the system Hamiltonian.

use crate::bath::BathCorrelation;
use crate::bohr::{bohr_decompose, BohrSpectrum};
use crate::error::{Error, Result};
use crate::freq::FreqLiouvillian;
use crate::operator::{hermiticity_deviation, trace, CMat};
use crate::superop::{commutator_superop, left_mult, right_mult, SuperOp};
use num_complex::Complex64 as C64;

#[derive(Debug, Clone)]
pub struct WeakCouplingModel {
    h: CMat,
    couplings: Vec<CMat>,
    bath: BathCorrelation,
    bohr: BohrSpectrum,
}

impl WeakCouplingModel {
    pub fn new(h: CMat, couplings: Vec<CMat>, bath: BathCorrelation) -> Result<Self> {
        for (i, s) in couplings.iter().enumerate() {
            let dev = hermiticity_deviation(s);
            if dev > 1e-12 {
                return Err(Error::NotHermitian {
                    what: format!("S_{i}"),
                    deviation: dev,
                });
            }
            if s.nrows() != h.nrows() {
                return Err(Error::DimensionMismatch {
                    context: "WeakCouplingModel coupling",
                    expected: h.nrows(),
                    got: s.nrows(),
                });
            }
        }
        if bath.channels() != couplings.len() {
            return Err(Error::DimensionMismatch {
                context: "WeakCouplingModel bath channels",
                expected: couplings.len(),
                got: bath.channels(),
            });
        }
        let bohr = bohr_decompose(&h, None)?;
        Ok(Self {
            h,
            couplings,
            bath,
            bohr,
        })
    }

    pub fn dim(&self) -> usize {
        self.h.nrows()
    }

    pub fn h(&self) -> &CMat {
        &self.h
    }

    pub fn couplings(&self) -> &[CMat] {
        &self.couplings
    }

    pub fn bath(&self) -> &BathCorrelation {
        &self.bath
    }

    pub fn bath_mut(&mut self) -> &mut BathCorrelation {
        &mut self.bath
    }

    pub fn bohr(&self) -> &BohrSpectrum {
        &self.bohr
    }
}

struct WeakTerm {
    wtilde: f64,
    k: usize,
    k2: usize,
    m1: SuperOp,
    m2: SuperOp,
}

/// The weak-coupling generator with precomputed structural superoperators.
pub struct WeakLiouvillian {
    model: WeakCouplingModel,
    l_p: SuperOp,
    terms: Vec<WeakTerm>,
}

/// Assemble the full frequency-dependent generator for a model.
pub fn liouvillian_weak(model: WeakCouplingModel) -> Result<WeakLiouvillian> {
    let d = model.dim();
    let k_n = model.couplings.len();
    let mut terms = Vec::new();
    for (iw, &wt) in model.bohr.bohr_frequencies().iter().enumerate() {
        let comp = model.bohr.component_superop(iw);
        for k in 0..k_n {
            let comm_k = commutator_superop(&model.couplings[k]);
            for k2 in 0..k_n {
                let m1 = comm_k.compose(&comp).compose(&left_mult(&model.couplings[k2]));
                let m2 = comm_k.compose(&comp).compose(&right_mult(&model.couplings[k2]));
                terms.push(WeakTerm {
                    wtilde: wt,
                    k,
                    k2,
                    m1,
                    m2,
                });
            }
        }
    }
    let l_p = commutator_superop(&model.h);
    let _ = d;
    Ok(WeakLiouvillian { model, l_p, terms })
}

/// Relaxator `Γ(ω)` of a model (standalone form of the assembly).
pub fn relaxator_weak(model: &WeakCouplingModel, omega: f64) -> Result<SuperOp> {
    let wl = liouvillian_weak(model.clone())?;
    wl.relaxator(omega)
}

/// Spectral shift `ΔH(ω)` of a model (standalone form of the assembly).
pub fn shift_weak(model: &WeakCouplingModel, omega: f64) -> Result<SuperOp> {
    let wl = liouvillian_weak(model.clone())?;
    wl.shift(omega)
}

impl WeakLiouvillian {
    pub fn model(&self) -> &WeakCouplingModel {
        &self.model
    }

    fn bath(&self) -> &BathCorrelation {
        &self.model.bath
    }

    fn accumulate(
        &self,
        coeff1: impl Fn(&WeakTerm) -> Result<C64>,
        coeff2: impl Fn(&WeakTerm) -> Result<C64>,
    ) -> Result<SuperOp> {
        let d = self.model.dim();
        let mut acc = SuperOp::zeros(d);
        for term in &self.terms {
            let c1 = coeff1(term)?;
            let c2 = coeff2(term)?;
            if c1.norm_sqr() > 0.0 {
                acc = &acc + &term.m1.scale(c1);
            }
            if c2.norm_sqr() > 0.0 {
                acc = &acc + &term.m2.scale(c2);
            }
        }
        Ok(acc)
    }
}

impl FreqLiouvillian for WeakLiouvillian {
    fn dim(&self) -> usize {
        self.model.dim()
    }

    fn eval(&self, z: C64) -> Result<SuperOp> {
        let bath = self.bath();
        let boundary = z.im.abs() < 1e-14;
        let dissipator = self.accumulate(
            |t| {
                if boundary && bath.has_s() {
                    bath.g_at(t.k, t.k2, z.re + t.wtilde)
                } else {
                    bath.g_complex(t.k, t.k2, z + t.wtilde)
                }
            },
            |t| {
                if boundary && bath.has_s() {
                    Ok(bath.s_at(t.k2, t.k, -z.re - t.wtilde)?
                        + C64::new(0.0, 1.0) * bath.gamma_at(t.k2, t.k, -z.re - t.wtilde)?)
                } else {
                    self.w_complex(t.k, t.k2, z + t.wtilde)
                }
            },
        )?;
        Ok(&self.l_p + &dissipator)
    }

    fn hamiltonian_part(&self) -> SuperOp {
        self.l_p.clone()
    }

    fn shift(&self, omega: f64) -> Result<SuperOp> {
        let bath = self.bath();
        if !bath.has_s() {
            return Err(Error::ShiftMissing);
        }
        self.accumulate(
            |t| bath.s_at(t.k, t.k2, omega + t.wtilde),
            |t| bath.s_at(t.k2, t.k, -omega - t.wtilde),
        )
    }

    fn relaxator(&self, omega: f64) -> Result<SuperOp> {
        let bath = self.bath();
        self.accumulate(
            |t| bath.gamma_at(t.k, t.k2, omega + t.wtilde),
            |t| Ok(-bath.gamma_at(t.k2, t.k, -omega - t.wtilde)?),
        )
    }

    fn frequency_scale(&self) -> f64 {
        let span = self
            .model
            .bohr
            .bohr_frequencies()
            .last()
            .copied()
            .unwrap_or(1.0);
        span.abs().max(1.0)
    }
}

impl WeakLiouvillian {
    /// The analytic partner of the second commutator structure,
    /// `w_kk′(z) = −(1/π)∫ γ_k′k(−Θ)/(z−Θ) dΘ = conj(g_kk′(−z̄))`,
    /// with boundary value `s_k′k(−ω) + iγ_k′k(−ω)`.
    fn w_complex(&self, k: usize, k2: usize, z: C64) -> Result<C64> {
        Ok(self.bath().g_complex(k, k2, -z.conj())?.conj())
    }
}

/// Closed-form qubit generator for a scalar thermal bath.
///
/// Basis ordering `|g⟩ = 0`, `|e⟩ = 1`; the dipole is
/// `S = S_g P_g + S_e P_e + S_eg σ₊ + S_ge σ₋` with real `S_g, S_e` and
/// `S_ge = S_eg*`. The generator is assembled directly from the bath value
/// `g(z)`, `g(z±ω₀)` and the KMS factors.
pub struct QubitLiouvillian {
    omega0: f64,
    s_g: f64,
    s_e: f64,
    s_eg: C64,
    bath: BathCorrelation,
    l_p: SuperOp,
}

pub fn qubit_liouvillian(
    omega0: f64,
    s_g: f64,
    s_e: f64,
    s_eg: C64,
    bath: BathCorrelation,
) -> Result<QubitLiouvillian> {
    if bath.mode() == crate::bath::SymmetryMode::Sampled {
        return Err(Error::NonThermalBath);
    }
    if bath.channels() != 1 {
        return Err(Error::DimensionMismatch {
            context: "qubit_liouvillian bath channels",
            expected: 1,
            got: bath.channels(),
        });
    }
    let h = crate::operator::sigma_z().mapv(|v| v * (omega0 / 2.0));
    Ok(QubitLiouvillian {
        omega0,
        s_g,
        s_e,
        s_eg,
        bath,
        l_p: commutator_superop(&h),
    })
}

impl QubitLiouvillian {
    pub fn bath(&self) -> &BathCorrelation {
        &self.bath
    }

    pub fn omega0(&self) -> f64 {
        self.omega0
    }

    fn g(&self, z: C64) -> Result<C64> {
        if z.im.abs() < 1e-14 && self.bath.has_s() {
            self.bath.g_at(0, 0, z.re)
        } else {
            self.bath.g_complex(0, 0, z)
        }
    }

    /// Analytic partner with boundary value `s(−ω) + iγ(−ω)`. Under an exact
    /// KMS pair this equals `−e^{−z/T} g(z)`, which recovers the Boltzmann
    /// weights of the printed closed form.
    fn w(&self, z: C64) -> Result<C64> {
        if z.im.abs() < 1e-14 && self.bath.has_s() {
            Ok(self.bath.s_at(0, 0, -z.re)?
                + C64::new(0.0, 1.0) * self.bath.gamma_at(0, 0, -z.re)?)
        } else {
            Ok(self.bath.g_complex(0, 0, -z.conj())?.conj())
        }
    }

    /// Apply the closed-form generator to operator components
    /// `(ρ_g, ρ_ge, ρ_eg, ρ_e)`; returns components of `L(z)ρ`.
    fn apply_components(&self, z: C64, c: [C64; 4]) -> Result<[C64; 4]> {
        let [rho_g, rho_ge, rho_eg, rho_e] = c;
        let (s_g, s_e) = (C64::new(self.s_g, 0.0), C64::new(self.s_e, 0.0));
        let s_eg = self.s_eg;
        let s_ge = self.s_eg.conj();
        let w0 = self.omega0;

        let a = (s_g * rho_g + s_ge * rho_eg) - (s_e * rho_e + s_eg * rho_ge);
        let a_star = (s_g * rho_g + s_eg * rho_ge) - (s_e * rho_e + s_ge * rho_eg);
        let b = s_g * rho_ge + s_ge * rho_e;
        let b_star = s_g * rho_eg + s_eg * rho_e;
        let cc = s_e * rho_eg + s_eg * rho_g;
        let cc_star = s_e * rho_ge + s_ge * rho_g;

        // curly-brace factors: the second members carry the analytic partner
        // w(z) in place of the Boltzmann-weighted −e^{−Ω/T} g(Ω)
        let f0 = self.g(z)? * a + self.w(z)? * a_star;
        let f_plus = self.g(z + w0)? * b + self.w(z + w0)? * cc_star;
        let f_minus = self.g(z - w0)? * cc + self.w(z - w0)? * b_star;

        let mut out = [C64::new(0.0, 0.0); 4];
        // bare precession ω0 (ρ_eg σ₊ − ρ_ge σ₋)
        out[2] += w0 * rho_eg;
        out[1] -= w0 * rho_ge;
        // g(z) (S_eg σ₊ − S_ge σ₋) {...}
        out[2] += s_eg * f0;
        out[1] -= s_ge * f0;
        // g(z+ω0) ((S_g−S_e) σ₋ + S_eg σ₃) {...}
        out[1] += (s_g - s_e) * f_plus;
        out[3] += s_eg * f_plus;
        out[0] -= s_eg * f_plus;
        // −g(z−ω0) ((S_g−S_e) σ₊ + S_ge σ₃) {...}
        out[2] -= (s_g - s_e) * f_minus;
        out[3] -= s_ge * f_minus;
        out[0] += s_ge * f_minus;
        Ok(out)
    }

    fn assemble(&self, z: C64) -> Result<SuperOp> {
        // component order (ρ_g, ρ_ge, ρ_eg, ρ_e) = vec indices (0, 1, 2, 3)
        let mut m = CMat::zeros((4, 4));
        for col in 0..4 {
            let mut c = [C64::new(0.0, 0.0); 4];
            c[col] = C64::new(1.0, 0.0);
            let out = self.apply_components(z, c)?;
            for row in 0..4 {
                m[[row, col]] = out[row];
            }
        }
        SuperOp::from_mat(m)
    }
}

impl FreqLiouvillian for QubitLiouvillian {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, z: C64) -> Result<SuperOp> {
        self.assemble(z)
    }

    fn hamiltonian_part(&self) -> SuperOp {
        self.l_p.clone()
    }

    fn shift(&self, omega: f64) -> Result<SuperOp> {
        // Hermitian half of the dissipator: ½(D(ω) + D(ω)†_HS)
        let l = self.assemble(C64::new(omega, 0.0))?;
        let d = &l - &self.l_p;
        let dd = d.hs_adjoint();
        Ok((&d + &dd).scale(C64::new(0.5, 0.0)))
    }

    fn relaxator(&self, omega: f64) -> Result<SuperOp> {
        // i/2 (D − D†_HS)
        let l = self.assemble(C64::new(omega, 0.0))?;
        let d = &l - &self.l_p;
        let dd = d.hs_adjoint();
        Ok((&d - &dd).scale(C64::new(0.0, 0.5)))
    }

    fn frequency_scale(&self) -> f64 {
        self.omega0.abs().max(1.0)
    }
}

/// Weak-coupling initial-correlation term
/// `Δρ₀(ω) = Σ_ω̃ Σ_kl g⁰_kl(ω+ω̃) [S_k, Δρ_s^{(l)}(ω̃)]`.
pub fn initial_corr_weak(
    model: &WeakCouplingModel,
    delta_rho_s: &[CMat],
    g0: &crate::bath::InitialCorrelationTable,
    omega: f64,
) -> Result<CMat> {
    let d = model.dim();
    let mut out = CMat::zeros((d, d));
    for (iw, &wt) in model.bohr.bohr_frequencies().iter().enumerate() {
        for (k, s_k) in model.couplings.iter().enumerate() {
            for (l, dr) in delta_rho_s.iter().enumerate() {
                let coeff = g0.g0_at(k, l, omega + wt)?;
                if coeff.norm_sqr() == 0.0 {
                    continue;
                }
                let comp = model.bohr.component(dr, iw);
                let comm = s_k.dot(&comp) - comp.dot(s_k);
                out = out + comm.mapv(|v| v * coeff);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::{SymmetryMode, Temperature};
    use crate::operator::{
        dagger, frob_norm, identity, max_abs_diff, proj_e, proj_g, sigma_minus, sigma_plus,
        sigma_z, vectorize,
    };
    use crate::quad::UniformGrid;
    use crate::testutil::{rand_density, rand_hermitian};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    pub(crate) fn thermal_bath(t: f64, scale: f64, width: f64) -> BathCorrelation {
        // smooth KMS-symmetric family, exact on every node
        let grid = UniformGrid::symmetric(40.0, 4001).unwrap();
        let gamma: Vec<CMat> = grid
            .nodes()
            .map(|o| {
                CMat::from_elem(
                    (1, 1),
                    C64::new(
                        scale * (-(o / width) * (o / width) + o / (2.0 * t)).exp(),
                        0.0,
                    ),
                )
            })
            .collect();
        let mut bath =
            BathCorrelation::from_matrices(grid, gamma, Temperature::Thermal(t), SymmetryMode::Thermal)
                .unwrap();
        bath.s_from_gamma().unwrap();
        bath
    }

    fn qubit_model(s_g: f64, s_e: f64, s_eg: C64, bath: BathCorrelation) -> WeakCouplingModel {
        let h = sigma_z().mapv(|v| v * 0.5);
        let s = proj_g().mapv(|v| v * s_g)
            + proj_e().mapv(|v| v * s_e)
            + sigma_plus().mapv(|v| v * s_eg)
            + sigma_minus().mapv(|v| v * s_eg.conj());
        WeakCouplingModel::new(h, vec![s], bath).unwrap()
    }

    #[test]
    fn zero_bath_gives_unitary_generator() {
        let grid = UniformGrid::symmetric(10.0, 401).unwrap();
        let mut bath = BathCorrelation::phenomenological_even(|_| 0.0, grid).unwrap();
        bath.s_from_gamma().unwrap();
        let model = qubit_model(0.3, -0.2, C64::new(0.4, 0.1), bath);
        let h = model.h().clone();
        let wl = liouvillian_weak(model).unwrap();
        for omega in [0.0, 0.7, -1.3] {
            let l = wl.eval(C64::new(omega, 0.0)).unwrap();
            assert!(max_abs_diff(l.mat(), commutator_superop(&h).mat()) < 1e-14);
            assert!(frob_norm(wl.relaxator(omega).unwrap().mat()) < 1e-14);
            assert!(frob_norm(wl.shift(omega).unwrap().mat()) < 1e-14);
        }
    }

    #[test]
    fn trace_conservation_over_frequencies() {
        let bath = thermal_bath(1.0, 0.1, 5.0);
        let model = qubit_model(0.2, -0.5, C64::new(0.8, 0.3), bath);
        let wl = liouvillian_weak(model).unwrap();
        for omega in [-2.0, -0.7, 0.0, 0.4, 1.9] {
            let l = wl.eval(C64::new(omega, 0.0)).unwrap();
            assert!(l.trace_conservation_residual() < 1e-10);
        }
    }

    #[test]
    fn commutator_structure_kills_traces_separately() {
        let bath = thermal_bath(0.8, 0.2, 4.0);
        let model = qubit_model(0.1, 0.6, C64::new(0.5, -0.2), bath);
        let wl = liouvillian_weak(model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        for omega in [0.0, 0.9] {
            let dh = wl.shift(omega).unwrap();
            let g = wl.relaxator(omega).unwrap();
            for _ in 0..5 {
                let rho = rand_density(&mut rng, 2);
                assert!(trace(&dh.apply(&rho)).norm() < 1e-12);
                assert!(trace(&g.apply(&rho)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn split_reassembles_boundary_generator() {
        let bath = thermal_bath(1.0, 0.15, 5.0);
        let model = qubit_model(0.3, -0.1, C64::new(0.7, 0.2), bath);
        let wl = liouvillian_weak(model).unwrap();
        for omega in [0.0, 1.2, -0.8] {
            let l = wl.eval(C64::new(omega, 0.0)).unwrap();
            let dh = wl.shift(omega).unwrap();
            let g = wl.relaxator(omega).unwrap();
            let rebuilt = &(&wl.hamiltonian_part() + &dh) - &g.scale(C64::new(0.0, 1.0));
            assert!(max_abs_diff(l.mat(), rebuilt.mat()) < 1e-12);
        }
    }

    #[test]
    fn hermiticity_pairings() {
        let bath = thermal_bath(1.3, 0.12, 6.0);
        let model = qubit_model(-0.2, 0.4, C64::new(0.6, 0.5), bath);
        let wl = liouvillian_weak(model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(72);
        for omega in [0.5, 1.7] {
            let dh_pos = wl.shift(omega).unwrap();
            let dh_neg = wl.shift(-omega).unwrap();
            let g_pos = wl.relaxator(omega).unwrap();
            let g_neg = wl.relaxator(-omega).unwrap();
            for _ in 0..5 {
                let rho = rand_hermitian(&mut rng, 2);
                let lhs = dagger(&dh_pos.apply(&rho));
                let rhs = dh_neg.apply(&rho).mapv(|v| -v);
                assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
                let lhs = dagger(&g_pos.apply(&rho));
                let rhs = g_neg.apply(&rho);
                assert!(max_abs_diff(&lhs, &rhs) < 1e-12);
            }
        }
    }

    #[test]
    fn diagonal_commuting_coupling_touches_only_coherences() {
        // S diagonal in the H eigenbasis: populations frozen, any diagonal ρ
        // maps to an off-diagonal-only image
        let bath = thermal_bath(1.0, 0.2, 5.0);
        let model = qubit_model(0.7, -0.4, C64::new(0.0, 0.0), bath);
        let wl = liouvillian_weak(model).unwrap();
        for omega in [0.0, 0.8] {
            let g = wl.relaxator(omega).unwrap();
            for rho in [proj_g(), proj_e(), identity(2).mapv(|v| v * 0.5)] {
                let out = g.apply(&rho);
                assert!(out[[0, 0]].norm() < 1e-13);
                assert!(out[[1, 1]].norm() < 1e-13);
            }
        }
    }

    #[test]
    fn uniform_mode_evenness_positivity_and_zero_shift() {
        let grid = UniformGrid::symmetric(40.0, 4001).unwrap();
        let mut bath = BathCorrelation::phenomenological_even(
            |w| 0.25 * (-(w / 6.0) * (w / 6.0)).exp(),
            grid,
        )
        .unwrap();
        bath.s_from_gamma().unwrap();
        let model = qubit_model(0.5, -0.3, C64::new(0.6, 0.2), bath.clone());
        let wl = liouvillian_weak(model).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(73);
        for omega in [0.0, 0.9, 2.2] {
            let g_pos = wl.relaxator(omega).unwrap();
            let g_neg = wl.relaxator(-omega).unwrap();
            for _ in 0..6 {
                let rho = rand_hermitian(&mut rng, 2);
                let v = vectorize(&rho);
                let f_pos: C64 = v
                    .iter()
                    .zip(g_pos.apply_vec(&v).iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let f_neg: C64 = v
                    .iter()
                    .zip(g_neg.apply_vec(&v).iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                assert!(f_pos.re > -1e-12, "positivity: {f_pos}");
                assert!((f_pos - f_neg).norm() < 1e-9, "evenness");
            }
        }
        // ΔH(0) vanishes as a quadratic form on Hermitian operators
        let dh0 = wl.shift(0.0).unwrap();
        for _ in 0..8 {
            let rho = rand_hermitian(&mut rng, 2);
            let v = vectorize(&rho);
            let form: C64 = v
                .iter()
                .zip(dh0.apply_vec(&v).iter())
                .map(|(a, b)| a.conj() * b)
                .sum();
            assert!(form.norm() < 1e-9, "⟨ρ|ΔH(0)|ρ⟩ = {form}");
        }
        // and in operator norm for a real coupling matrix
        let model = qubit_model(0.5, -0.3, C64::new(0.6, 0.0), bath);
        let wl = liouvillian_weak(model).unwrap();
        let dh0 = wl.shift(0.0).unwrap();
        assert!(
            frob_norm(dh0.mat()) < 1e-8,
            "‖ΔH(0)‖ = {}",
            frob_norm(dh0.mat())
        );
    }

    #[test]
    fn qubit_closed_form_matches_generic_assembly() {
        let bath = thermal_bath(1.0, 0.1, 5.0);
        let (s_g, s_e, s_eg) = (0.4, -0.3, C64::new(0.7, 0.25));
        let model = qubit_model(s_g, s_e, s_eg, bath.clone());
        let wl = liouvillian_weak(model).unwrap();
        let ql = qubit_liouvillian(1.0, s_g, s_e, s_eg, bath).unwrap();
        for omega in [0.0, 0.6, -1.4, 2.3] {
            let generic = wl.eval(C64::new(omega, 0.0)).unwrap();
            let closed = ql.eval(C64::new(omega, 0.0)).unwrap();
            assert!(
                max_abs_diff(generic.mat(), closed.mat()) < 1e-10,
                "mismatch at ω = {omega}: {:.3e}",
                max_abs_diff(generic.mat(), closed.mat())
            );
        }
        // and along the contour
        for z in [C64::new(0.3, 0.4), C64::new(-1.0, 1.5)] {
            let generic = wl.eval(z).unwrap();
            let closed = ql.eval(z).unwrap();
            assert!(max_abs_diff(generic.mat(), closed.mat()) < 1e-8);
        }
    }

    #[test]
    fn qubit_canonical_state_is_stationary_at_zero_frequency() {
        let t = 1.0;
        let bath = thermal_bath(t, 0.1, 5.0);
        let ql = qubit_liouvillian(1.0, 0.4, -0.2, C64::new(0.8, 0.1), bath).unwrap();
        let z = (-1.0 / t).exp();
        let rho_c = proj_g().mapv(|v| v / (1.0 + z)) + proj_e().mapv(|v| v * z / (1.0 + z));
        let l0 = ql.eval(C64::new(0.0, 0.0)).unwrap();
        let out = l0.apply(&rho_c);
        assert!(frob_norm(&out) < 1e-10, "‖L(0)ρ_c‖ = {}", frob_norm(&out));
    }

    #[test]
    fn qubit_population_block_vanishes_without_offdiagonal_coupling() {
        let bath = thermal_bath(1.0, 0.1, 5.0);
        let ql = qubit_liouvillian(1.0, 0.7, -0.5, C64::new(0.0, 0.0), bath).unwrap();
        let l = ql.eval(C64::new(0.4, 0.0)).unwrap();
        // population rows/columns of the dissipator vanish: any diagonal ρ is
        // mapped without population output
        for rho in [proj_g(), proj_e()] {
            let out = l.apply(&rho);
            assert!(out[[0, 0]].norm() < 1e-13);
            assert!(out[[1, 1]].norm() < 1e-13);
        }
    }

    #[test]
    fn qubit_rejects_sampled_bath() {
        let h_env = crate::operator::from_real(&[&[0.0, 0.0], &[0.0, 1.0]]);
        let b = crate::operator::from_real(&[&[0.0, 1.0], &[1.0, 0.0]]);
        let rho = identity(2).mapv(|v| v * 0.5);
        let grid = UniformGrid::symmetric(5.0, 201).unwrap();
        let bath = BathCorrelation::from_environment(&h_env, &[b], &rho, 0.1, grid).unwrap();
        assert!(matches!(
            qubit_liouvillian(1.0, 0.0, 0.0, C64::new(1.0, 0.0), bath),
            Err(Error::NonThermalBath)
        ));
    }

    #[test]
    fn shift_matches_entrywise_hilbert_transform_of_relaxator() {
        // ΔH(ω) = (1/π) P∫ Γ(Ω)/(ω−Ω) dΩ entrywise
        let grid = UniformGrid::symmetric(60.0, 6001).unwrap();
        let mut bath = BathCorrelation::phenomenological_even(
            |w| 0.2 * (-(w / 5.0) * (w / 5.0)).exp(),
            grid,
        )
        .unwrap();
        bath.s_from_gamma().unwrap();
        let model = qubit_model(0.4, -0.2, C64::new(0.5, 0.3), bath);
        let wl = liouvillian_weak(model).unwrap();

        // sample Γ on an ω-subgrid that stays within bath range after the
        // Bohr shifts, then Hilbert-transform each superoperator entry
        let sub = UniformGrid::symmetric(50.0, 2001).unwrap();
        let gammas: Vec<SuperOp> = sub
            .nodes()
            .map(|w| wl.relaxator(w).unwrap())
            .collect();
        let omega_probe = 0.75;
        let dh = wl.shift(omega_probe).unwrap();
        let mut worst: f64 = 0.0;
        for r in 0..4 {
            for c in 0..4 {
                let series: Vec<C64> = gammas.iter().map(|g| g.mat()[[r, c]]).collect();
                let transformed = crate::quad::pv_hilbert(&sub, &series);
                let j = sub.node_index(omega_probe).unwrap();
                worst = worst.max((transformed[j] - dh.mat()[[r, c]]).norm());
            }
        }
        assert!(worst < 1e-4, "entrywise KK deviation {worst:.3e}");
    }

    #[test]
    fn initial_corr_weak_basics() {
        let bath = thermal_bath(1.0, 0.1, 5.0);
        let model = qubit_model(0.2, -0.4, C64::new(0.6, 0.1), bath);

        // zero table gives zero
        let h_env = crate::operator::from_real(&[&[0.0, 0.0], &[0.0, 1.3]]);
        let b = crate::operator::from_real(&[&[0.1, 0.8], &[0.8, -0.1]]);
        let rho_env = identity(2).mapv(|v| v * 0.5);
        let zero_corr = vec![CMat::zeros((2, 2))];
        let grid = UniformGrid::symmetric(20.0, 801).unwrap();
        let table = crate::bath::InitialCorrelationTable::from_environment(
            &h_env,
            &[b.clone()],
            &rho_env,
            &zero_corr,
            0.1,
            grid.clone(),
        )
        .unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(74);
        let dr = vec![rand_hermitian(&mut rng, 2)];
        let out = initial_corr_weak(&model, &dr, &table, 0.3).unwrap();
        assert!(frob_norm(&out) < 1e-14);

        // non-trivial table: result is traceless
        let mut denv = rand_hermitian(&mut rng, 2);
        let tr = trace(&denv) / 2.0;
        for i in 0..2 {
            denv[[i, i]] -= tr;
        }
        let table = crate::bath::InitialCorrelationTable::from_environment(
            &h_env,
            &[b],
            &rho_env,
            &[denv],
            0.1,
            grid,
        )
        .unwrap();
        let out = initial_corr_weak(&model, &dr, &table, 0.3).unwrap();
        assert!(trace(&out).norm() < 1e-12);
        assert!(frob_norm(&out) > 1e-8);
    }
}
