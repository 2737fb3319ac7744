//! GHZ preparation: |+⟩^⊗N → U_A(π/2) → local gates on every qubit.
//!
//! The local part is U₂ = (σ_x+σ_z)/√2 followed by the diagonal U₁ and U₃†.
//! Applying U₁ before U₂ leaves the complete-graph state, which a uniform
//! Hadamard does not map to GHZ; the order and the sign of U₃ here do.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{invalid, Result};
use crate::linalg::{C64, I};
use crate::protocol_a::analytic::ua_phases;
use crate::quantum::channel::DiagonalChannel;
use crate::quantum::fidelity::binomial;

pub type Gate2 = [[C64; 2]; 2];

#[derive(Clone, Debug, PartialEq)]
pub enum GhzStep {
    PreparePlus,
    PhaseGate { theta: f64 },
    Local { label: &'static str, gate: Gate2 },
}

fn diag(a: C64, b: C64) -> Gate2 {
    [[a, C64::default()], [C64::default(), b]]
}

fn mul(a: &Gate2, b: &Gate2) -> Gate2 {
    let mut out = [[C64::default(); 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
        }
    }
    out
}

/// exp(iφσ_z) with σ_z|0⟩ = |0⟩.
fn z_rotation(phi: f64) -> Gate2 {
    diag((I * phi).exp(), (-I * phi).exp())
}

pub fn ghz_circuit(n_qubits: usize) -> Vec<GhzStep> {
    let s = C64::new(FRAC_1_SQRT_2, 0.0);
    vec![
        GhzStep::PreparePlus,
        GhzStep::PhaseGate { theta: PI / 2.0 },
        GhzStep::Local {
            label: "U2",
            gate: [[s, s], [s, -s]],
        },
        GhzStep::Local {
            label: "U1",
            gate: z_rotation(PI / 4.0),
        },
        GhzStep::Local {
            label: "U3^dag",
            gate: z_rotation(-PI * (n_qubits + 1) as f64 / (4.0 * n_qubits as f64)),
        },
    ]
}

/// Product U₃†U₁U₂ of the local steps.
pub fn local_correction(n_qubits: usize) -> Gate2 {
    ghz_circuit(n_qubits).iter().fold(diag(C64::new(1.0, 0.0), C64::new(1.0, 0.0)), |acc, step| match step {
        GhzStep::Local { gate, .. } => mul(gate, &acc),
        _ => acc,
    })
}

/// GHZ fidelity after the phase gate acts through `channel` (ideal U_A when
/// `None`). Uses the excitation-number structure, so N in the hundreds is fine.
pub fn ghz_fidelity(n_qubits: usize, channel: Option<&DiagonalChannel>) -> Result<f64> {
    if n_qubits < 2 {
        return Err(invalid("GHZ preparation needs N >= 2"));
    }
    let ideal;
    let ch = match channel {
        Some(c) => c,
        None => {
            ideal = DiagonalChannel::unitary(&ua_phases(n_qubits, PI / 2.0));
            &ideal
        }
    };
    if ch.n_qubits != n_qubits {
        return Err(crate::error::Error::ShapeMismatch("channel size differs from N".into()));
    }
    let u = local_correction(n_qubits);
    // u_b = U†|b⟩, components ⟨c|U†|b⟩ = conj(U[b][c]).
    let u0 = [u[0][0].conj(), u[0][1].conj()];
    let u1 = [u[1][0].conj(), u[1][1].conj()];
    let nq = n_qubits as i32;
    let s: Vec<C64> = (0..=n_qubits)
        .map(|n| {
            let k = n as i32;
            (u0[0].powi(nq - k) * u0[1].powi(k) + u1[0].powi(nq - k) * u1[1].powi(k)) * (binomial(n_qubits, n) * FRAC_1_SQRT_2)
        })
        .collect();
    let mut f = C64::default();
    for n in 0..=n_qubits {
        for m in 0..=n_qubits {
            f += ch.element(n, m) * s[n].conj() * s[m];
        }
    }
    Ok(f.re / 2f64.powi(nq))
}

/// Plain statevector evaluation of the ideal circuit (N ≤ 20).
pub fn ghz_fidelity_statevector(n_qubits: usize) -> Result<f64> {
    if !(2..=20).contains(&n_qubits) {
        return Err(invalid("statevector GHZ check supports 2 <= N <= 20"));
    }
    let dim = 1usize << n_qubits;
    let mut psi = vec![C64::new(0.0, 0.0); dim];
    for step in ghz_circuit(n_qubits) {
        match step {
            GhzStep::PreparePlus => psi.iter_mut().for_each(|z| *z = C64::new((dim as f64).sqrt().recip(), 0.0)),
            GhzStep::PhaseGate { theta } => {
                for (q, z) in psi.iter_mut().enumerate() {
                    let n = q.count_ones() as f64;
                    *z *= (I * theta * n * n).exp();
                }
            }
            GhzStep::Local { gate, .. } => {
                for j in 0..n_qubits {
                    let bit = 1usize << (n_qubits - 1 - j);
                    for q in 0..dim {
                        if q & bit == 0 {
                            let (a, b) = (psi[q], psi[q | bit]);
                            psi[q] = gate[0][0] * a + gate[0][1] * b;
                            psi[q | bit] = gate[1][0] * a + gate[1][1] * b;
                        }
                    }
                }
            }
        }
    }
    let overlap = (psi[0] + psi[dim - 1]) * FRAC_1_SQRT_2;
    Ok(overlap.norm_sqr())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn correction_is_unitary() {
        let u = local_correction(5);
        let p = mul(&u, &[[u[0][0].conj(), u[1][0].conj()], [u[0][1].conj(), u[1][1].conj()]]);
        assert!((p[0][0] - 1.0).norm() < 1e-14 && p[0][1].norm() < 1e-14);
    }

    #[test]
    fn both_routes_agree_on_a_lossy_channel() {
        let ch = DiagonalChannel::from_fn(3, |n, m| {
            let t = PI / 2.0;
            C64::new(t * ((n * n) as f64 - (m * m) as f64) + 0.01 * (n as f64 - m as f64), 0.002 * (n + m) as f64)
        });
        let f = ghz_fidelity(3, Some(&ch)).unwrap();
        assert!(f < 1.0 && f > 0.98);
        assert!((ghz_fidelity(3, None).unwrap() - ghz_fidelity_statevector(3).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn ideal_preparation_is_exact() {
        for n in 2..=6 {
            assert!((ghz_fidelity(n, None).unwrap() - 1.0).abs() < 1e-10, "N={n}");
            assert!((ghz_fidelity_statevector(n).unwrap() - 1.0).abs() < 1e-10, "N={n}");
        }
        assert!((ghz_fidelity(40, None).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn uniform_decay_on_two_qubits() {
        let eps = 1e-3;
        let base = ua_phases(2, PI / 2.0);
        let ch = DiagonalChannel::from_fn(2, |n, m| {
            let d = C64::new(base[n] - base[m], 0.0);
            if n == m { d + I * eps } else { d }
        });
        let f = ghz_fidelity(2, Some(&ch)).unwrap();
        assert!(f < 1.0 && (f - (-eps).exp()).abs() < eps);
    }
}
