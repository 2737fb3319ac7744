use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Rates and detunings of the cavity/qubit system in units of the coupling g.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SystemParams {
    pub n_qubits: usize,
    /// Qubit–cavity coupling; fixed to 1, it defines the unit of frequency.
    pub g: f64,
    /// Decay rate of the ancillary level |e⟩.
    pub gamma: f64,
    /// Cavity field decay rate.
    pub kappa: f64,
    /// Drive–cavity detuning δ.
    #[serde(alias = "delta")]
    pub cavity_detuning: f64,
    /// Drive–transition detuning Δ.
    #[serde(alias = "Delta")]
    pub transition_detuning: f64,
    pub fock_cutoff: usize,
    /// Optional decay rate Γ₁ of the |1⟩ level, treated as leakage.
    #[serde(default)]
    pub extra_one_decay: Option<f64>,
    /// Optional dephasing time T₂* (units of 1/g).
    #[serde(default)]
    pub dephasing_time: Option<f64>,
}

impl SystemParams {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            g: 1.0,
            gamma: 0.0,
            kappa: 0.0,
            cavity_detuning: 0.0,
            transition_detuning: 0.0,
            fock_cutoff: 8,
            extra_one_decay: None,
            dephasing_time: None,
        }
    }

    /// Sets γ and κ from the cooperativity C = g²/(γκ) and the ratio γ/κ.
    pub fn with_cooperativity(mut self, cooperativity: f64, gamma_over_kappa: f64) -> Self {
        let (gamma, kappa) = rates_from_cooperativity(cooperativity, gamma_over_kappa);
        self.gamma = gamma;
        self.kappa = kappa;
        self
    }

    pub fn with_rates(mut self, gamma: f64, kappa: f64) -> Self {
        self.gamma = gamma;
        self.kappa = kappa;
        self
    }

    pub fn with_detunings(mut self, delta: f64, big_delta: f64) -> Self {
        self.cavity_detuning = delta;
        self.transition_detuning = big_delta;
        self
    }

    pub fn with_fock_cutoff(mut self, n_max: usize) -> Self {
        self.fock_cutoff = n_max;
        self
    }

    pub fn with_one_decay(mut self, rate: f64) -> Self {
        self.extra_one_decay = Some(rate);
        self
    }

    pub fn cooperativity(&self) -> f64 {
        self.g * self.g / (self.gamma * self.kappa)
    }

    pub fn one_decay(&self) -> f64 {
        self.extra_one_decay.unwrap_or(0.0)
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 {
            return Err(invalid("n_qubits must be at least 1"));
        }
        if self.g != 1.0 {
            return Err(invalid(format!("g is the unit and must equal 1, got {}", self.g)));
        }
        if !(self.gamma >= 0.0) || !(self.kappa >= 0.0) {
            return Err(invalid(format!("rates must be non-negative (gamma={}, kappa={})", self.gamma, self.kappa)));
        }
        if !(self.one_decay() >= 0.0) {
            return Err(invalid("extra_one_decay must be non-negative"));
        }
        if !self.cavity_detuning.is_finite() || !self.transition_detuning.is_finite() {
            return Err(invalid("detunings must be finite"));
        }
        Ok(())
    }
}

/// (γ, κ) with γκ = 1/C and γ/κ = r, in units of g.
pub fn rates_from_cooperativity(cooperativity: f64, gamma_over_kappa: f64) -> (f64, f64) {
    let gamma = (gamma_over_kappa / cooperativity).sqrt();
    let kappa = 1.0 / (gamma_over_kappa * cooperativity).sqrt();
    (gamma, kappa)
}
