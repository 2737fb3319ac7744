use std::f64::consts::PI;

use crate::quantum::fidelity::PhaseTarget;

/// exp(−iα Z⊗…⊗Z): φ_n = −α(−1)^n, compared up to local phases.
pub fn target_phase_rotation(alpha: f64, n_qubits: usize) -> PhaseTarget {
    PhaseTarget::up_to_local((0..=n_qubits).map(|n| if n % 2 == 0 { -alpha } else { alpha }).collect())
}

/// Multi-controlled Z: phase π on |1…1⟩ only.
pub fn target_cnz(n_qubits: usize) -> PhaseTarget {
    PhaseTarget::up_to_local((0..=n_qubits).map(|n| if n == n_qubits { PI } else { 0.0 }).collect())
}
