//! Coupling spread for the adiabatic gate.

use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::protocol_a::inhomogeneity::{monte_carlo_infidelity, MonteCarloEstimate};
use crate::protocol_b::phases::WorkingPoint;
use crate::quantum::fidelity::binomial;

/// Var[g²] 2^-N Σ C(N,n) n [IΔ/(δΔ − nḡ²)²]².
pub fn inhomogeneity_bound_b(n_qubits: usize, intensity: f64, wp: &WorkingPoint, var_g2: f64) -> Result<f64> {
    wp.check(n_qubits)?;
    let s: f64 = (0..=n_qubits)
        .map(|n| {
            let d = wp.delta * wp.big_delta - n as f64 * wp.g * wp.g;
            let k = intensity * wp.big_delta / (d * d);
            binomial(n_qubits, n) * n as f64 * k * k
        })
        .sum();
    Ok(var_g2 * s / 2f64.powi(n_qubits as i32))
}

/// −I / (δ − Σ_j q_j g_j² / Δ) for the computational state q (bit j ↔ qubit j).
pub fn phase_b(q: usize, g2: &[f64], intensity: f64, wp: &WorkingPoint) -> f64 {
    let s: f64 = g2.iter().enumerate().filter(|(j, _)| q >> j & 1 == 1).map(|(_, x)| x).sum();
    -intensity / (wp.delta - s / wp.big_delta)
}

/// Monte-Carlo mean infidelity against the homogeneous gate (couplings ḡ).
pub fn monte_carlo_inhomogeneity_b<S>(n_qubits: usize, intensity: f64, wp: &WorkingPoint, sample_g2: S, n_samples: usize, seed: u64) -> MonteCarloEstimate
where
    S: FnMut(&mut ChaCha8Rng) -> f64,
{
    let g2_bar = wp.g * wp.g;
    let ideal = |q: usize| -intensity / (wp.delta - q.count_ones() as f64 * g2_bar / wp.big_delta);
    monte_carlo_infidelity(n_qubits, n_samples, seed, sample_g2, |q, g2| phase_b(q, g2, intensity, wp) - ideal(q))
}
