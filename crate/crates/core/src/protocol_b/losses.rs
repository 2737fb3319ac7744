//! First-order loss model of one adiabatic pulse: c_nm and the resulting
//! average fidelity.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::protocol_b::phases::WorkingPoint;
use crate::quantum::channel::DiagonalChannel;
use crate::quantum::fidelity::binomial;
use crate::quantum::params::SystemParams;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LossCoefficients {
    pub gamma_n: Vec<f64>,
    pub s_n: Vec<f64>,
    /// c_nm = 1 − (γ_n + γ_m)/2 − (s_n − s_m)²/2.
    pub c_nm: DMatrix<f64>,
}

/// γ_n per unit pulse energy: γ n g² / (Δδ − n g²)².
fn gamma_rate(n: usize, wp: &WorkingPoint, gamma: f64) -> Result<f64> {
    let d = wp.big_delta * wp.denominator(n)?;
    Ok(gamma * n as f64 * wp.g * wp.g / (d * d))
}

/// s_n per √I: √κ Δ / (Δδ − n g²). The sign follows Δ/(Δδ − n g²).
fn s_rate(n: usize, wp: &WorkingPoint, kappa: f64) -> Result<f64> {
    Ok(kappa.sqrt() / wp.denominator(n)?)
}

/// Loss per unit pulse energy between sectors n and m, 1 − c_nm = I·ε^(n,m).
pub fn loss_rate(n: usize, m: usize, wp: &WorkingPoint, gamma: f64, kappa: f64) -> Result<f64> {
    let ds = s_rate(n, wp, kappa)? - s_rate(m, wp, kappa)?;
    Ok(0.5 * (gamma_rate(n, wp, gamma)? + gamma_rate(m, wp, gamma)?) + 0.5 * ds * ds)
}

pub fn loss_coefficients(n_qubits: usize, intensity: f64, wp: &WorkingPoint, params: &SystemParams) -> Result<LossCoefficients> {
    wp.check(n_qubits)?;
    let gamma_n: Vec<f64> = (0..=n_qubits).map(|n| gamma_rate(n, wp, params.gamma).map(|r| r * intensity)).collect::<Result<_>>()?;
    let s_n: Vec<f64> = (0..=n_qubits)
        .map(|n| s_rate(n, wp, params.kappa).map(|r| r * intensity.sqrt()))
        .collect::<Result<_>>()?;
    let c_nm = DMatrix::from_fn(n_qubits + 1, n_qubits + 1, |n, m| {
        1.0 - 0.5 * (gamma_n[n] + gamma_n[m]) - 0.5 * (s_n[n] - s_n[m]).powi(2)
    });
    Ok(LossCoefficients { gamma_n, s_n, c_nm })
}

/// Perturbative phases φ_n = I·A_n.
pub fn pulse_phases(n_qubits: usize, intensity: f64, wp: &WorkingPoint) -> Result<Vec<f64>> {
    (0..=n_qubits).map(|n| wp.phase_per_energy(n).map(|a| a * intensity)).collect()
}

/// Average fidelity of the pulse against its own ideal phase gate,
/// [Σ C(N,n) c_nn + Σ C(N,n)C(N,m) c_nm] / (2^N (2^N + 1)).
pub fn fidelity_from_coefficients(c: &DMatrix<f64>) -> f64 {
    let n_qubits = c.nrows() - 1;
    let d = 2f64.powi(n_qubits as i32);
    let w: Vec<f64> = (0..=n_qubits).map(|k| binomial(n_qubits, k)).collect();
    let mut s = 0.0;
    for n in 0..=n_qubits {
        s += w[n] * c[(n, n)];
        for m in 0..=n_qubits {
            s += w[n] * w[m] * c[(n, m)];
        }
    }
    s / (d * (d + 1.0))
}

pub fn predict_fidelity_b(n_qubits: usize, intensity: f64, wp: &WorkingPoint, params: &SystemParams) -> Result<f64> {
    Ok(fidelity_from_coefficients(&loss_coefficients(n_qubits, intensity, wp, params)?.c_nm))
}

/// Diagonal channel of the pulse, e^{iφ_nm} = c_nm e^{i(φ_n − φ_m)}.
pub fn pulse_channel(n_qubits: usize, intensity: f64, wp: &WorkingPoint, params: &SystemParams) -> Result<DiagonalChannel> {
    let c = loss_coefficients(n_qubits, intensity, wp, params)?;
    DiagonalChannel::from_coefficients(&pulse_phases(n_qubits, intensity, wp)?, &c.c_nm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wp() -> WorkingPoint {
        WorkingPoint::new(0.529, -2.09, 1.0).unwrap()
    }

    #[test]
    fn lossless_is_perfect() {
        let p = SystemParams::new(3);
        let c = loss_coefficients(3, 2.0, &wp(), &p).unwrap();
        assert!(c.c_nm.iter().all(|x| (x - 1.0).abs() < 1e-15));
        assert!((predict_fidelity_b(3, 2.0, &wp(), &p).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn structure() {
        let p = SystemParams::new(4).with_rates(0.01, 0.02);
        let c = loss_coefficients(4, 1.5, &wp(), &p).unwrap();
        assert_eq!(c.gamma_n[0], 0.0);
        for n in 0..=4 {
            assert!((c.c_nm[(n, n)] - (1.0 - c.gamma_n[n])).abs() < 1e-15);
            for m in 0..=4 {
                assert_eq!(c.c_nm[(n, m)], c.c_nm[(m, n)]);
                assert!(c.c_nm[(n, m)] <= 1.0);
            }
        }
    }

    #[test]
    fn s_sign_follows_ratio() {
        let p = SystemParams::new(2).with_rates(0.0, 0.04);
        let w = wp();
        let c = loss_coefficients(2, 1.0, &w, &p).unwrap();
        for n in 0..=2 {
            let ratio = w.big_delta / (w.big_delta * w.delta - n as f64);
            assert_eq!(c.s_n[n].signum(), ratio.signum());
            let alt = (p.kappa * w.big_delta.abs()).sqrt() / (w.big_delta * w.delta - n as f64).abs().sqrt()
                * (1.0f64 / w.denominator(n).unwrap()).abs().sqrt();
            assert!((c.s_n[n].abs() - alt).abs() < 1e-14);
        }
    }
}
