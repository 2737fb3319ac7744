//! Closed-form lossy channel of the effective Hamiltonian and its
//! asymptotic infidelity.
//!
//! With β_n = n·b, the coherent amplitudes obey ḃ = −(iδ + κ/2) b − iζ and
//! the phases follow from four running integrals:
//!   φ_nm = (m − n)(m ∫ζ b* + n ∫ζ* b) + i(m + n) ∫(γ₁ + Γ₁)/2 − (n − m) ∫ε₁.

use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::integrate::{rk4_converged, StepOptions};
use crate::linalg::{C64, I};
use crate::optimize::scan_then_golden;
use crate::protocol_a::design::{design_pulse_a, scaled_design, GeometricPulseDesign};
use crate::quantum::pulse::FlatTop;
use crate::protocol_a::effective::{gamma_1_of_zeta, gamma_1_small_drive};
use crate::quantum::channel::DiagonalChannel;
use crate::quantum::fidelity::{average_gate_fidelity, PhaseTarget};
use crate::quantum::params::SystemParams;
use crate::quantum::pulse::Pulse;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DetuningLimit {
    /// Δ → ∞: no dressed-state frequency shift.
    Infinite,
    /// Finite Δ: the qubit frequency shift ε₁(t) n̂ is kept in the phases.
    Finite(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum DecayModel {
    /// γ₁ = (γ/2)(1 − √(1 − 4|ζ|²/g²)).
    Exact,
    /// γ₁ ≈ γ|ζ|²/g².
    SmallDrive,
}

#[derive(Clone, Debug)]
pub struct ChannelSolution {
    /// b(t) on the design grid; β_n(t) = n b(t).
    pub unit_beta: Pulse,
    pub phi: DMatrix<C64>,
    pub channel: DiagonalChannel,
}

impl ChannelSolution {
    pub fn beta(&self, n: usize, k: usize) -> C64 {
        self.unit_beta.values[k] * n as f64
    }

    pub fn beta_final(&self, n: usize) -> C64 {
        self.beta(n, self.unit_beta.len() - 1)
    }
}

fn eps_1(zeta: C64, big_delta: f64, g: f64) -> f64 {
    let x = 4.0 * zeta.norm_sqr() / (g * g);
    (big_delta - big_delta.abs() / (1.0 - x).sqrt()) / 2.0
}

pub fn solve_channel_a(design: &GeometricPulseDesign, params: &SystemParams, limit: DetuningLimit, decay: DecayModel) -> Result<ChannelSolution> {
    params.validate()?;
    let n_q = params.n_qubits;
    let (delta, kappa, g) = (design.delta, params.kappa, params.g);
    let gamma_extra = params.one_decay();
    let rhs = |t: f64, y: &Vec<C64>| -> Vec<C64> {
        let z = design.zeta(t);
        let b = y[0];
        let g1 = match decay {
            DecayModel::Exact => gamma_1_of_zeta(z, params),
            DecayModel::SmallDrive => gamma_1_small_drive(z, params),
        };
        let e1 = match limit {
            DetuningLimit::Infinite => 0.0,
            DetuningLimit::Finite(big) => eps_1(z, big, g),
        };
        vec![
            -C64::new(kappa / 2.0, delta) * b - I * z,
            z * b.conj(),
            z.conj() * b,
            C64::new((g1 + gamma_extra) / 2.0, 0.0),
            C64::new(e1, 0.0),
        ]
    };
    let duration = design.duration();
    let intervals = design.grid_points - 1;
    let mut steps = intervals;
    while (duration / steps as f64) > 0.05 {
        steps += intervals;
    }
    let opts = StepOptions {
        initial_steps: steps,
        tol: 1e-10,
        max_halvings: 8,
    };
    let y0 = vec![C64::default(); 5];
    let out = rk4_converged(&rhs, &y0, 0.0, duration, opts, |_, _, _| Ok(()))?;

    // Trajectory b(t) at the design grid from the converged resolution.
    let per = out.steps / intervals;
    let mut traj = vec![C64::default(); design.grid_points];
    crate::integrate::rk4_fixed(&rhs, &y0, 0.0, duration, out.steps, |k, _, y| {
        if k % per == 0 {
            traj[k / per] = y[0];
        }
        Ok(())
    })?;

    let (j1, j2, gsum, esum) = (out.state[1], out.state[2], out.state[3].re, out.state[4].re);
    let phi = DMatrix::from_fn(n_q + 1, n_q + 1, |n, m| {
        let (nf, mf) = (n as f64, m as f64);
        (mf - nf) * (j1 * mf + j2 * nf) + I * (mf + nf) * gsum - C64::new((nf - mf) * esum, 0.0)
    });
    Ok(ChannelSolution {
        unit_beta: Pulse::new(duration, traj)?,
        channel: DiagonalChannel::new(n_q, phi.clone())?,
        phi,
    })
}

/// Target phases n²θ of U_A = exp(iθn̂²).
pub fn ua_phases(n_qubits: usize, theta: f64) -> Vec<f64> {
    (0..=n_qubits).map(|n| (n * n) as f64 * theta).collect()
}

/// 1 − F of the Δ → ∞ analytic channel against U_A.
pub fn analytic_infidelity(design: &GeometricPulseDesign, params: &SystemParams) -> Result<f64> {
    let sol = solve_channel_a(design, params, DetuningLimit::Infinite, DecayModel::Exact)?;
    Ok(1.0 - average_gate_fidelity(&sol.channel, &PhaseTarget::exact(ua_phases(params.n_qubits, design.theta)))?)
}

/// Long-pulse, weak-loss infidelity for a given δ.
pub fn infidelity_long_pulse(n_qubits: usize, theta: f64, gamma: f64, kappa: f64, delta: f64) -> f64 {
    let w = 1.0 + 2f64.powi(-(n_qubits as i32));
    (kappa / (4.0 * w * delta) + gamma * delta / 2.0) * n_qubits as f64 * theta
}

/// δ minimizing [`infidelity_long_pulse`].
pub fn optimal_delta_a(n_qubits: usize, gamma: f64, kappa: f64) -> f64 {
    (kappa / (2.0 * (1.0 + 2f64.powi(-(n_qubits as i32))) * gamma)).sqrt()
}

/// Optimized long-pulse infidelity Nθ/√(2(1 + 2^−N) C).
pub fn asymptotic_infidelity_a(n_qubits: usize, theta: f64, cooperativity: f64) -> f64 {
    n_qubits as f64 * theta / (2.0 * (1.0 + 2f64.powi(-(n_qubits as i32))) * cooperativity).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DeltaOptimum {
    pub delta: f64,
    pub infidelity: f64,
}

/// Optimizes δ of the sin² design at duration T for the analytic channel.
/// The search runs in log δ over [0.01, max(2, 4δ*)]; infeasible δ are
/// penalized by their |ζ| excess.
pub fn optimize_delta_a(theta: f64, duration: f64, params: &SystemParams, grid_points: usize) -> Result<DeltaOptimum> {
    let hi = if params.gamma > 0.0 {
        2f64.max(4.0 * optimal_delta_a(params.n_qubits, params.gamma, params.kappa))
    } else {
        20.0
    };
    let objective = |x: f64| -> f64 {
        let delta = x.exp();
        match design_pulse_a(theta, delta, duration, grid_points) {
            Ok(d) => analytic_infidelity(&d, params).unwrap_or(f64::INFINITY),
            Err(_) => 1.0 + scaled_design(theta, delta, Arc::new(FlatTop::sin_squared(duration)), 401).max_zeta_sq(),
        }
    };
    let (x, v) = scan_then_golden(objective, (0.01f64).ln(), hi.ln(), 41, 1e-7);
    if v >= 1.0 {
        return Err(crate::error::Error::Infeasible(format!("no feasible delta for T = {duration}")));
    }
    Ok(DeltaOptimum { delta: x.exp(), infidelity: v })
}
