//! The frequency-dependent generator interface shared by the exact, the
//! weak-coupling and the Markov constructions, plus the constraint checks
//! every such generator must satisfy.

use crate::error::Result;
use crate::operator::{dagger, max_abs_diff, trace, vectorize, CMat};
use crate::superop::SuperOp;
use num_complex::Complex64 as C64;

/// A generator `L(z) = L_P + ΔH(z) − iΓ(z)` evaluable in the closed upper
/// half plane. Real arguments return the boundary value (for generators with
/// a discrete complement spectrum, the broadened limit).
pub trait FreqLiouvillian {
    /// Hilbert dimension `d` of the system.
    fn dim(&self) -> usize;

    /// `L(z)` as a `d²×d²` superoperator, `Im z ≥ 0`.
    fn eval(&self, z: C64) -> Result<SuperOp>;

    /// The Hermitian commutator part `L_P`.
    fn hamiltonian_part(&self) -> SuperOp;

    /// Spectral shift `ΔH(ω)` at real frequency.
    fn shift(&self, omega: f64) -> Result<SuperOp>;

    /// Relaxator `Γ(ω)` at real frequency.
    fn relaxator(&self, omega: f64) -> Result<SuperOp>;

    /// Characteristic frequency scale, used by solvers to set steps and
    /// tolerances.
    fn frequency_scale(&self) -> f64 {
        1.0
    }
}

/// Residuals of the structural constraints of a relaxator Liouville
/// generator, evaluated on a frequency list and a set of Hermitian probes.
#[derive(Debug, Clone)]
pub struct ConstraintReport {
    /// max over ω of the trace-conservation residual of `L(ω)`
    pub trace_conservation: f64,
    /// max `‖(L(ω)ρ)† + L(−ω)ρ‖`
    pub generator_pairing: f64,
    /// max `‖(ΔH(ω)ρ)† + ΔH(−ω)ρ‖`
    pub shift_pairing: f64,
    /// max `‖(Γ(ω)ρ)† − Γ(−ω)ρ‖`
    pub relaxator_pairing: f64,
    /// most negative `⟨ρ|Γ(ω)|ρ⟩` (uniform mode only)
    pub gamma_positivity: Option<f64>,
    /// max `|⟨ρ|Γ(ω)ρ⟩ − ⟨ρ|Γ(−ω)ρ⟩|` (uniform mode only)
    pub gamma_evenness: Option<f64>,
    /// `‖ΔH(0)‖_F` (uniform mode only)
    pub shift_at_zero: Option<f64>,
}

impl ConstraintReport {
    pub fn lines(&self) -> Vec<(String, f64)> {
        let mut out = vec![
            ("trace_conservation".to_string(), self.trace_conservation),
            ("generator_pairing".to_string(), self.generator_pairing),
            ("shift_pairing".to_string(), self.shift_pairing),
            ("relaxator_pairing".to_string(), self.relaxator_pairing),
        ];
        if let Some(v) = self.gamma_positivity {
            out.push(("relaxator_positivity".to_string(), -v.min(0.0)));
        }
        if let Some(v) = self.gamma_evenness {
            out.push(("relaxator_evenness".to_string(), v));
        }
        if let Some(v) = self.shift_at_zero {
            out.push(("shift_at_zero".to_string(), v));
        }
        out
    }
}

/// Run the constraint suite on a generator. `uniform` enables the
/// positivity/evenness/zero-shift checks that hold only for the Hermitian
/// projector choice.
pub fn constraint_report(
    fl: &dyn FreqLiouvillian,
    omegas: &[f64],
    probes: &[CMat],
    uniform: bool,
) -> Result<ConstraintReport> {
    let mut trace_res: f64 = 0.0;
    let mut gen_pair: f64 = 0.0;
    let mut shift_pair: f64 = 0.0;
    let mut relax_pair: f64 = 0.0;
    let mut positivity: f64 = f64::INFINITY;
    let mut evenness: f64 = 0.0;

    for &omega in omegas {
        let l_pos = fl.eval(C64::new(omega, 0.0))?;
        let l_neg = fl.eval(C64::new(-omega, 0.0))?;
        trace_res = trace_res.max(l_pos.trace_conservation_residual());
        let dh_pos = fl.shift(omega)?;
        let dh_neg = fl.shift(-omega)?;
        let g_pos = fl.relaxator(omega)?;
        let g_neg = fl.relaxator(-omega)?;
        for rho in probes {
            let lhs = dagger(&l_pos.apply(rho));
            let rhs = l_neg.apply(rho).mapv(|v| -v);
            gen_pair = gen_pair.max(max_abs_diff(&lhs, &rhs));

            let lhs = dagger(&dh_pos.apply(rho));
            let rhs = dh_neg.apply(rho).mapv(|v| -v);
            shift_pair = shift_pair.max(max_abs_diff(&lhs, &rhs));

            let lhs = dagger(&g_pos.apply(rho));
            let rhs = g_neg.apply(rho);
            relax_pair = relax_pair.max(max_abs_diff(&lhs, &rhs));

            if uniform {
                let v = vectorize(rho);
                let form_pos: C64 = v
                    .iter()
                    .zip(g_pos.apply_vec(&v).iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                let form_neg: C64 = v
                    .iter()
                    .zip(g_neg.apply_vec(&v).iter())
                    .map(|(a, b)| a.conj() * b)
                    .sum();
                positivity = positivity.min(form_pos.re);
                evenness = evenness.max((form_pos - form_neg).norm());
            }
        }
    }

    let shift_at_zero = if uniform {
        Some(crate::operator::frob_norm(fl.shift(0.0)?.mat()))
    } else {
        None
    };

    Ok(ConstraintReport {
        trace_conservation: trace_res,
        generator_pairing: gen_pair,
        shift_pairing: shift_pair,
        relaxator_pairing: relax_pair,
        gamma_positivity: uniform.then_some(positivity),
        gamma_evenness: uniform.then_some(evenness),
        shift_at_zero,
    })
}

/// Verify that a state stays a density operator: returns
/// `(|Tr ρ − 1|, ‖ρ − ρ†‖, min eigenvalue)`.
pub fn density_health(rho: &CMat) -> (f64, f64, f64) {
    let tr = (trace(rho) - C64::new(1.0, 0.0)).norm();
    let herm = crate::operator::frob_norm(&(rho - &dagger(rho)));
    let min_eig = crate::linalg::eigvalsh(&crate::linalg::hermitize(rho))
        .map(|e| e.first().copied().unwrap_or(0.0))
        .unwrap_or(f64::NAN);
    (tr, herm, min_eig)
}
