//! CZ-count baselines: the gate decomposed into CZs and perfect single-qubit
//! gates, each CZ costing the two-qubit adiabatic infidelity.

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BaselineKind {
    PhaseRotation,
    Cnz,
}

/// exp(−iα Z^⊗N) by a CNOT ladder onto one qubit and back: 2(N − 1) CZs.
pub fn phase_rotation_cz_count(n_qubits: usize) -> usize {
    2 * n_qubits.saturating_sub(1)
}

/// Ancilla-free Gray-code C_{N−1}Z: 2^N − 2 two-qubit gates for N ≥ 3, one CZ
/// for N = 2.
pub fn cnz_cz_count(n_qubits: usize) -> usize {
    match n_qubits {
        0 | 1 => 0,
        2 => 1,
        n => (1usize << n) - 2,
    }
}

impl BaselineKind {
    pub fn cz_count(self, n_qubits: usize) -> usize {
        match self {
            BaselineKind::PhaseRotation => phase_rotation_cz_count(n_qubits),
            BaselineKind::Cnz => cnz_cz_count(n_qubits),
        }
    }

    /// Count × per-CZ infidelity (additive first-order budget).
    pub fn infidelity(self, n_qubits: usize, per_cz: f64) -> f64 {
        self.cz_count(n_qubits) as f64 * per_cz
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts() {
        assert_eq!(phase_rotation_cz_count(2), 2);
        assert_eq!(phase_rotation_cz_count(5), 8);
        assert_eq!(cnz_cz_count(2), 1);
        assert_eq!(cnz_cz_count(3), 6);
        assert_eq!(cnz_cz_count(6), 62);
    }
}
