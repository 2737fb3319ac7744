//! Lab-frame, displaced-frame and effective Hamiltonians (non-Hermitian:
//! level decay enters as an anti-Hermitian part).

use std::sync::Arc;

use crate::linalg::{Coefficient, DrivenOperator, SparseOp, C64, I};
use crate::quantum::params::SystemParams;
use crate::quantum::space::{EffectiveSector, Space};

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

/// Drive-independent part with an explicit collective lowering operator
/// (which may carry per-qubit couplings):
/// δ a†a + (Δ − iγ/2) n̂_e − iΓ₁/2 n̂ + g(a†S⁻ + a S⁺).
pub fn undriven_part<S: Space + ?Sized>(space: &S, params: &SystemParams, lowering: &SparseOp) -> SparseOp {
    let a = space.annihilation();
    let ad = a.adjoint();
    let coupling = ad.mul(lowering).add(&a.mul(&lowering.adjoint())).scale(real(params.g));
    ad.mul(&a)
        .scale(real(params.cavity_detuning))
        .add(&space.excited_number().scale(C64::new(params.transition_detuning, -params.gamma / 2.0)))
        .add(&space.one_number().scale(C64::new(0.0, -params.one_decay() / 2.0)))
        .add(&coupling)
}

/// Lab-frame Hamiltonian at a fixed drive amplitude η.
pub fn build_lab_hamiltonian<S: Space + ?Sized>(space: &S, params: &SystemParams, eta: C64) -> SparseOp {
    lab_hamiltonian(space, params, Arc::new(move |_| eta)).at(0.0)
}

/// Lab-frame Hamiltonian with drive iη(t)a† − iη*(t)a.
pub fn lab_hamiltonian<S: Space + ?Sized>(space: &S, params: &SystemParams, eta: Coefficient) -> DrivenOperator {
    lab_hamiltonian_with_lowering(space, params, &space.lowering(), eta)
}

pub fn lab_hamiltonian_with_lowering<S: Space + ?Sized>(space: &S, params: &SystemParams, lowering: &SparseOp, eta: Coefficient) -> DrivenOperator {
    let a = space.annihilation();
    let eta2 = eta.clone();
    DrivenOperator::constant(undriven_part(space, params, lowering))
        .with_drive(a.adjoint(), Arc::new(move |t| I * eta(t)))
        .with_drive(a, Arc::new(move |t| -I * eta2(t).conj()))
}

/// Displaced-frame Hamiltonian at a fixed cavity displacement α.
pub fn build_displaced_hamiltonian<S: Space + ?Sized>(space: &S, params: &SystemParams, alpha: C64) -> SparseOp {
    displaced_hamiltonian(space, params, Arc::new(move |_| alpha)).at(0.0)
}

/// Displaced-frame Hamiltonian: the coupling acquires −g(α*S⁻ + αS⁺).
pub fn displaced_hamiltonian<S: Space + ?Sized>(space: &S, params: &SystemParams, alpha: Coefficient) -> DrivenOperator {
    displaced_hamiltonian_with_lowering(space, params, &space.lowering(), alpha)
}

pub fn displaced_hamiltonian_with_lowering<S: Space + ?Sized>(
    space: &S,
    params: &SystemParams,
    lowering: &SparseOp,
    alpha: Coefficient,
) -> DrivenOperator {
    let g = params.g;
    let alpha2 = alpha.clone();
    DrivenOperator::constant(undriven_part(space, params, lowering))
        .with_drive(lowering.clone(), Arc::new(move |t| -g * alpha(t).conj()))
        .with_drive(lowering.adjoint(), Arc::new(move |t| -g * alpha2(t)))
}

/// Effective cavity Hamiltonian after eliminating |e⟩:
/// δ a†a + (−iγ₁(t)/2 − iΓ₁/2 + ζ(t) a† + ζ*(t) a) n.
pub fn effective_hamiltonian(
    space: &EffectiveSector,
    params: &SystemParams,
    zeta: Coefficient,
    gamma_1: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
) -> DrivenOperator {
    let n = space.excitations as f64;
    let a = space.annihilation();
    let ad = a.adjoint();
    let fixed = ad
        .mul(&a)
        .scale(real(params.cavity_detuning))
        .add(&SparseOp::identity(space.dim()).scale(C64::new(0.0, -params.one_decay() * n / 2.0)));
    let zeta2 = zeta.clone();
    DrivenOperator::constant(fixed)
        .with_drive(ad, Arc::new(move |t| zeta(t) * n))
        .with_drive(a, Arc::new(move |t| zeta2(t).conj() * n))
        .with_drive(SparseOp::identity(space.dim()), Arc::new(move |t| C64::new(0.0, -gamma_1(t) * n / 2.0)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{hermitian_eigenvalues, CMatrix};
    use crate::quantum::space::FullSpace;

    #[test]
    fn decoupled_limit_is_diagonal() {
        let mut p = SystemParams::new(2).with_detunings(0.7, 3.0).with_rates(0.2, 0.0);
        p.g = 0.0;
        let s = FullSpace::new(2, 2).unwrap();
        let h = build_lab_hamiltonian(&s, &p, C64::default()).to_dense();
        for i in 0..s.dim() {
            for j in 0..s.dim() {
                if i != j {
                    assert_eq!(h[(i, j)], C64::default());
                }
            }
            let photons = s.photon_number_of(i) as f64;
            let ne = s.excited_counts()[i % 9];
            assert!((h[(i, i)] - C64::new(0.7 * photons + 3.0 * ne, -0.1 * ne)).norm() < 1e-14);
        }
    }

    #[test]
    fn anti_hermitian_part_is_level_decay() {
        let p = SystemParams::new(2).with_detunings(0.4, -1.5).with_rates(0.3, 0.1).with_one_decay(0.05);
        let s = FullSpace::new(2, 2).unwrap();
        let h = build_lab_hamiltonian(&s, &p, C64::new(0.2, -0.7)).to_dense();
        let anti = (&h - h.adjoint()) * C64::new(0.5, 0.0);
        let expect = s.excited_number().scale(C64::new(0.0, -0.15)).add(&s.one_number().scale(C64::new(0.0, -0.025)));
        assert!((anti - expect.to_dense()).iter().all(|z| z.norm() < 1e-14));
    }

    #[test]
    fn single_qubit_spectrum() {
        // γ = 0, η = 0, N = 1, n_max = 1: blocks {|0,0⟩}, {|0,1⟩}, {|1,0⟩},
        // {|0,e⟩,|1,1⟩} coupled by g, {|1,e⟩}.
        let p = SystemParams::new(1).with_detunings(0.5, 2.0);
        let s = FullSpace::new(1, 1).unwrap();
        let ev = hermitian_eigenvalues(&build_lab_hamiltonian(&s, &p, C64::default()).to_dense());
        let mean = (0.5 + 2.0) / 2.0;
        let split = ((2.0f64 - 0.5).powi(2) / 4.0 + 1.0).sqrt();
        let mut expect = vec![0.0, 0.0, 0.5, mean - split, mean + split, 2.5];
        expect.sort_by(f64::total_cmp);
        for (a, b) in ev.iter().zip(&expect) {
            assert!((a - b).abs() < 1e-12, "{ev:?} vs {expect:?}");
        }
    }

    #[test]
    fn displaced_frame_at_zero_alpha() {
        let p = SystemParams::new(2).with_detunings(0.4, -1.5).with_rates(0.3, 0.1);
        let s = FullSpace::new(2, 3).unwrap();
        let lab = build_lab_hamiltonian(&s, &p, C64::default()).to_dense();
        let disp = build_displaced_hamiltonian(&s, &p, C64::default()).to_dense();
        assert_eq!(lab, disp);
        let d: CMatrix = build_displaced_hamiltonian(&s, &p, C64::new(1.2, -0.4)).to_dense()
            + s.excited_number().scale(C64::new(0.0, 0.15)).to_dense();
        assert!((&d - d.adjoint()).iter().all(|z| z.norm() < 1e-13));
    }
}
