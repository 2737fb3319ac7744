//! CZ working point and flat-top drive for the adiabatic gate.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::optimize::{nelder_mead, NelderMeadOptions};
use crate::protocol_b::losses::predict_fidelity_b;
use crate::protocol_b::phases::WorkingPoint;
use crate::quantum::params::SystemParams;
use crate::quantum::pulse::{FlatTop, Trajectory};

/// Phase curvature |φ₂ − 2φ₁ + φ₀| of a CZ gate.
pub const CZ_CURVATURE: f64 = PI;

const DESIGN_STARTS: usize = 8;
const DESIGN_SEED: u64 = 0x5eed_b;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CzDesignB {
    pub intensity: f64,
    pub delta: f64,
    pub big_delta: f64,
    pub infidelity: f64,
}

impl CzDesignB {
    pub fn working_point(&self, g: f64) -> WorkingPoint {
        WorkingPoint {
            delta: self.delta,
            big_delta: self.big_delta,
            g,
        }
    }
}

/// 1 − F of the two-qubit CZ pulse at (δ, Δ) with the pulse energy fixed by
/// the curvature condition.
pub fn cz_infidelity_at(delta: f64, big_delta: f64, params: &SystemParams) -> Result<(f64, f64)> {
    let wp = WorkingPoint::new(delta, big_delta, params.g)?;
    let energy = wp.energy_for_curvature(CZ_CURVATURE)?;
    Ok((energy, 1.0 - predict_fidelity_b(2, energy, &wp, params)?))
}

/// Minimizes the CZ infidelity over (δ, Δ) by Nelder–Mead from random
/// starts in δ ∈ [0.05, 5]·√(κ/γ), −Δ ∈ [0.2, 20]·√(γ/κ).
pub fn cz_design_b(params: &SystemParams) -> Result<CzDesignB> {
    if !(params.gamma > 0.0 && params.kappa > 0.0) {
        return Err(invalid("the CZ working point needs gamma > 0 and kappa > 0"));
    }
    let sd = (params.kappa / params.gamma).sqrt() * params.g;
    let sb = (params.gamma / params.kappa).sqrt() * params.g;
    let objective = |x: &[f64]| cz_infidelity_at(x[0] * sd, x[1] * sb, params).map(|r| r.1).unwrap_or(f64::INFINITY);
    let mut rng = ChaCha8Rng::seed_from_u64(DESIGN_SEED);
    let opts = NelderMeadOptions {
        xtol: 1e-9,
        ftol: 1e-15,
        ..Default::default()
    };
    let mut best: Option<crate::optimize::Minimum> = None;
    for _ in 0..DESIGN_STARTS {
        let x0: [f64; 2] = [rng.random_range(0.05..5.0), -rng.random_range(0.2..20.0)];
        let scale = [0.1 * x0[0], 0.1 * x0[1].abs()];
        if let Ok(m) = nelder_mead(objective, &x0, &scale, opts) {
            if best.as_ref().is_none_or(|b| m.value < b.value) {
                best = Some(m);
            }
        }
    }
    let best = best.ok_or(Error::Optimizer {
        reason: "no start converged".into(),
        best: f64::INFINITY,
    })?;
    let (delta, big_delta) = (best.x[0] * sd, best.x[1] * sb);
    let (intensity, infidelity) = cz_infidelity_at(delta, big_delta, params)?;
    Ok(CzDesignB {
        intensity,
        delta,
        big_delta,
        infidelity,
    })
}

/// Flat-top drive: sin² flanks of length `ramp_time`, plateau `eta_max`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdiabaticPulseConfig {
    pub eta_max: f64,
    pub ramp_time: f64,
    pub duration: f64,
    pub pulse_energy: f64,
}

impl AdiabaticPulseConfig {
    pub fn from_shape(duration: f64, ramp_time: f64, eta_max: f64) -> Result<Self> {
        let shape = FlatTop::new(duration, ramp_time)?;
        Ok(Self {
            eta_max,
            ramp_time: shape.ramp,
            duration,
            pulse_energy: eta_max * eta_max * shape.square_integral(),
        })
    }

    pub fn shape(&self) -> FlatTop {
        FlatTop {
            duration: self.duration,
            ramp: self.ramp_time,
        }
    }

    pub fn eta(&self, t: f64) -> f64 {
        self.eta_max * self.shape().value(t)
    }

    pub fn max_slope(&self) -> f64 {
        self.eta_max * self.shape().max_slope()
    }

    /// Same shape rescaled to a new pulse energy.
    pub fn with_energy(&self, energy: f64) -> Self {
        let eta_max = (energy / self.shape().square_integral()).sqrt();
        Self {
            eta_max,
            pulse_energy: energy,
            ..*self
        }
    }
}

/// Number of log-spaced ramp candidates in (0, T/2].
pub const RAMP_CANDIDATES: usize = 64;

/// Peak cavity population |η|²Δ²/(Δδ − ng²)² above which the weak-drive
/// picture is rejected outright.
pub const MAX_CAVITY_POPULATION: f64 = 25.0;

/// Flat-top pulse of duration T delivering `energy`, with the ramp that
/// minimizes max|η̇| among the candidates.
pub fn flat_top_pulse(energy: f64, duration: f64, wp: &WorkingPoint, n_qubits: usize) -> Result<AdiabaticPulseConfig> {
    if !(duration > 0.0) || !(energy > 0.0) {
        return Err(invalid(format!("flat-top pulse needs T > 0 and I > 0 (T={duration}, I={energy})")));
    }
    let lo = (duration / 2.0 * 1e-3).ln();
    let hi = (duration / 2.0).ln();
    let best = (0..RAMP_CANDIDATES)
        .map(|k| {
            let ramp = (lo + (hi - lo) * k as f64 / (RAMP_CANDIDATES - 1) as f64).exp().min(duration / 2.0);
            let probe = AdiabaticPulseConfig::from_shape(duration, ramp, 1.0)?;
            Ok(probe.with_energy(energy))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .min_by(|a, b| a.max_slope().total_cmp(&b.max_slope()))
        .expect("at least one candidate");
    let worst = (0..=n_qubits)
        .map(|n| wp.denominator(n).map(|d| (best.eta_max / d).powi(2)))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if worst > MAX_CAVITY_POPULATION {
        return Err(Error::Infeasible(format!(
            "T = {duration} needs eta_max = {:.3}, cavity population {worst:.2} is not perturbative",
            best.eta_max
        )));
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_rates_optimum() {
        let p = SystemParams::new(2).with_cooperativity(1e6, 1.0);
        let d = cz_design_b(&p).unwrap();
        assert!((d.delta / 0.529 - 1.0).abs() < 0.02, "{d:?}");
        assert!((d.big_delta / -2.09 - 1.0).abs() < 0.02, "{d:?}");
        assert!((d.infidelity * 1e3 / 1.79 - 1.0).abs() < 0.02, "{d:?}");
    }

    #[test]
    fn flat_top_invariants() {
        let wp = WorkingPoint::new(0.529, -2.09, 1.0).unwrap();
        let p = flat_top_pulse(3.0, 400.0, &wp, 2).unwrap();
        assert_eq!(p.eta(0.0), 0.0);
        assert_eq!(p.eta(400.0), 0.0);
        assert!((p.eta(200.0) - p.eta_max).abs() < 1e-15);
        let q = p.shape().sample(40001);
        assert!((q.energy() * p.eta_max * p.eta_max - 3.0).abs() < 1e-9);
        let longer = flat_top_pulse(3.0, 800.0, &wp, 2).unwrap();
        assert!(longer.max_slope() < p.max_slope());
        assert!(flat_top_pulse(3.0, 0.05, &wp, 2).is_err());
    }
}
