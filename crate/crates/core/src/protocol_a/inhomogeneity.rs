//! Spread of the single-qubit couplings g_j: bounds on the average
//! infidelity and Monte-Carlo estimates.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::linalg::{C64, I};

/// N²(N+3) θ² Var[g²] / (2 ḡ⁴).
pub fn inhomogeneity_bound_a(n_qubits: usize, theta: f64, var_g2: f64, g_bar: f64) -> f64 {
    let n = n_qubits as f64;
    n * n * (n + 3.0) * theta * theta * var_g2 / (2.0 * g_bar.powi(4))
}

/// Phase of computational state q (bit j of `q` ↔ qubit j) under U_A with
/// couplings g_j²: (Σ q_j g_j²)² θ / ḡ⁴.
pub fn phase_a(q: usize, g2: &[f64], theta: f64, g_bar: f64) -> f64 {
    let s: f64 = g2.iter().enumerate().filter(|(j, _)| q >> j & 1 == 1).map(|(_, x)| x).sum();
    s * s * theta / g_bar.powi(4)
}

/// Average fidelity of the unitary diag(e^{iε_q}) against the identity:
/// (2^N + |Σ_q e^{iε_q}|²) / (2^N (2^N + 1)).
pub fn unitary_error_fidelity(errors: &[f64]) -> f64 {
    let d = errors.len() as f64;
    let s: C64 = errors.iter().map(|e| (I * e).exp()).sum();
    (d + s.norm_sqr()) / (d * (d + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
}

/// Draws `n_qubits` couplings g_j² per sample and averages 1 − F of the
/// phase errors `error(q, g²)` over all 2^N computational states.
pub fn monte_carlo_infidelity<S, E>(n_qubits: usize, n_samples: usize, seed: u64, mut sample_g2: S, error: E) -> MonteCarloEstimate
where
    S: FnMut(&mut ChaCha8Rng) -> f64,
    E: Fn(usize, &[f64]) -> f64,
{
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let dim = 1usize << n_qubits;
    let values: Vec<f64> = (0..n_samples)
        .map(|_| {
            let g2: Vec<f64> = (0..n_qubits).map(|_| sample_g2(&mut rng)).collect();
            let errs: Vec<f64> = (0..dim).map(|q| error(q, &g2)).collect();
            1.0 - unitary_error_fidelity(&errs)
        })
        .collect();
    let mean = values.iter().sum::<f64>() / n_samples as f64;
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n_samples.max(2) - 1) as f64;
    MonteCarloEstimate {
        mean,
        std_error: (var / n_samples as f64).sqrt(),
        samples: n_samples,
    }
}

/// Monte-Carlo mean infidelity of U_A under random couplings (long-pulse limit).
pub fn monte_carlo_inhomogeneity_a<S>(n_qubits: usize, theta: f64, g_bar: f64, sample_g2: S, n_samples: usize, seed: u64) -> MonteCarloEstimate
where
    S: FnMut(&mut ChaCha8Rng) -> f64,
{
    let ideal = |q: usize| (q.count_ones() as f64).powi(2) * theta;
    monte_carlo_infidelity(n_qubits, n_samples, seed, sample_g2, |q, g2| phase_a(q, g2, theta, g_bar) - ideal(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_couplings_are_exact() {
        let mc = monte_carlo_inhomogeneity_a(3, 1.0, 1.0, |_| 1.0, 10, 1);
        assert!(mc.mean.abs() < 1e-14);
        assert_eq!(inhomogeneity_bound_a(3, 1.0, 0.0, 1.0), 0.0);
    }

    #[test]
    fn bound_scaling() {
        let r = inhomogeneity_bound_a(4, 0.3, 0.01, 1.0) / inhomogeneity_bound_a(2, 0.3, 0.01, 1.0);
        assert!((r - 5.6).abs() < 1e-12);
    }
}
