//! Itemized gate error budgets for physical platforms.
//!
//! Contributions are additive to first order: the protocol's lossy channel,
//! the extra trace decay from a finite |1⟩ lifetime, and a dephasing term
//! T/T₂* added by hand.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::optimize::scan_then_golden;
use crate::platforms::presets::PlatformPreset;
use crate::quantum::fidelity::{average_gate_fidelity, PhaseTarget};
use crate::registry::{protocols, GateRequest};

/// Request in SI units (seconds, rad/s).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EstimateRequest {
    pub protocol: String,
    pub n_qubits: usize,
    #[serde(default)]
    pub theta: Option<f64>,
    #[serde(default)]
    pub target: Option<PhaseTarget>,
    /// Gate duration; `None` asks for the long-pulse limit.
    #[serde(default)]
    pub duration: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub big_delta: Option<f64>,
}

impl EstimateRequest {
    pub fn new(protocol: &str, n_qubits: usize) -> Self {
        Self {
            protocol: protocol.to_string(),
            n_qubits,
            theta: None,
            target: None,
            duration: None,
            delta: None,
            big_delta: None,
        }
    }

    pub fn with_duration(mut self, seconds: f64) -> Self {
        self.duration = Some(seconds);
        self
    }

    pub fn with_big_delta(mut self, omega: f64) -> Self {
        self.big_delta = Some(omega);
        self
    }

    pub fn with_delta(mut self, omega: f64) -> Self {
        self.delta = Some(omega);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateEstimate {
    pub platform: String,
    pub protocol: String,
    pub n_qubits: usize,
    pub asymptotic: bool,
    pub duration: Option<f64>,
    pub delta: Option<f64>,
    pub big_delta: Option<f64>,
    pub protocol_contribution: f64,
    pub one_state_decay_contribution: f64,
    pub t2_star_contribution: f64,
    pub total: f64,
}

pub fn estimate_gate(preset: &PlatformPreset, req: &EstimateRequest) -> Result<GateEstimate> {
    let proto = protocols().get(&req.protocol)?;
    let params = preset.system_params(req.n_qubits);
    let clean = crate::quantum::params::SystemParams {
        extra_one_decay: None,
        ..params.clone()
    };
    let mut greq = GateRequest {
        n_qubits: req.n_qubits,
        theta: req.theta,
        target: req.target.clone(),
        duration: req.duration.map(|t| preset.to_g_time(t)),
        delta: req.delta.map(|w| preset.to_g_rate(w)),
        big_delta: req.big_delta.map(|w| preset.to_g_rate(w)),
    };
    let mut est = GateEstimate {
        platform: preset.name.clone(),
        protocol: proto.name().to_string(),
        n_qubits: req.n_qubits,
        asymptotic: req.duration.is_none(),
        duration: req.duration,
        delta: req.delta,
        big_delta: req.big_delta,
        protocol_contribution: 0.0,
        one_state_decay_contribution: 0.0,
        t2_star_contribution: 0.0,
        total: 0.0,
    };
    match req.duration {
        None => est.protocol_contribution = proto.asymptotic_infidelity(&greq, &clean)?,
        Some(seconds) => {
            if !(seconds > 0.0) {
                return Err(invalid("duration must be positive"));
            }
            let full = proto.model(&greq, &params)?;
            let with_decay = 1.0 - average_gate_fidelity(&full.channel, &full.target)?;
            // Same working point without the |1⟩ decay isolates its share.
            greq.delta = full.delta.or(greq.delta);
            greq.big_delta = full.big_delta.or(greq.big_delta);
            let bare = proto.model(&greq, &clean)?;
            est.protocol_contribution = 1.0 - average_gate_fidelity(&bare.channel, &bare.target)?;
            est.one_state_decay_contribution = with_decay - est.protocol_contribution;
            est.t2_star_contribution = preset.t2_star.map_or(0.0, |t2| seconds / t2);
            est.delta = full.delta.map(|d| preset.from_g_rate(d));
            est.big_delta = full.big_delta.map(|d| preset.from_g_rate(d));
        }
    }
    est.total = est.protocol_contribution + est.one_state_decay_contribution + est.t2_star_contribution;
    Ok(est)
}

/// Duration in [lo, hi] seconds minimizing the total estimate (log scan
/// followed by golden-section refinement).
pub fn optimal_duration(preset: &PlatformPreset, req: &EstimateRequest, lo: f64, hi: f64, scan_points: usize) -> Result<GateEstimate> {
    if !(lo > 0.0 && hi > lo) {
        return Err(invalid("duration bracket must satisfy 0 < lo < hi"));
    }
    let total = |x: f64| {
        let r = req.clone().with_duration(x.exp());
        estimate_gate(preset, &r).map_or(f64::INFINITY, |e| e.total)
    };
    let (x, v) = scan_then_golden(total, lo.ln(), hi.ln(), scan_points, 1e-4);
    if !v.is_finite() {
        return Err(invalid("no feasible duration in the bracket"));
    }
    estimate_gate(preset, &req.clone().with_duration(x.exp()))
}
