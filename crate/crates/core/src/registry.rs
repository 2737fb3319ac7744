//! Named strategies selected at runtime: gate protocols and target families.

use std::f64::consts::{FRAC_PI_2, PI};
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::C64;
use crate::protocol_a::analytic::{asymptotic_infidelity_a, optimize_delta_a, solve_channel_a, ua_phases, DecayModel, DetuningLimit};
use crate::protocol_a::design::design_pulse_a;
use crate::protocol_a::simulate::{simulate_protocol_a, simulate_with_drive_cap, SimulationFrame, DISPLACED_FOCK_CUTOFF};
use crate::protocol_b::design::{cz_design_b, flat_top_pulse, CzDesignB, CZ_CURVATURE};
use crate::protocol_b::losses::{predict_fidelity_b, pulse_channel};
use crate::protocol_b::phases::WorkingPoint;
use crate::protocol_b::simulate::{adiabatic_options, simulate_cz_b, RECALIBRATION_BELOW};
use crate::quantum::channel::DiagonalChannel;
use crate::quantum::fidelity::{average_gate_fidelity, PhaseTarget};
use crate::quantum::params::SystemParams;
use crate::quantum::simulate::SimulationOptions;
use crate::synthesis::{plan_channel, synthesize, target_cnz, target_phase_rotation, BaselineKind, GridSpec, ObjectiveMode};

/// Grid used for geometric pulse designs built on demand.
pub const DESIGN_GRID_POINTS: usize = 2001;

/// Drive cap max|η| (units of g) used to pick Δ for full-model runs.
pub const DEFAULT_ETA_CAP: f64 = 30.0;

/// Ordered name → strategy table.
pub struct Registry<T: ?Sized> {
    kind: &'static str,
    entries: Vec<(&'static str, Box<T>)>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(kind: &'static str) -> Self {
        Self { kind, entries: Vec::new() }
    }

    pub fn register(&mut self, name: &'static str, item: Box<T>) {
        assert!(self.entries.iter().all(|(n, _)| *n != name), "duplicate {} `{name}`", self.kind);
        self.entries.push((name, item));
    }

    pub fn get(&self, name: &str) -> Result<&T> {
        self.entries
            .iter()
            .find(|(n, _)| n.eq_ignore_ascii_case(name))
            .map(|(_, t)| t.as_ref())
            .ok_or_else(|| Error::Unknown {
                kind: self.kind,
                name: name.to_string(),
            })
    }

    pub fn names(&self) -> Vec<&'static str> {
        self.entries.iter().map(|(n, _)| *n).collect()
    }
}

/// Gate request in units of g. Unset detunings are chosen by the protocol.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct GateRequest {
    pub n_qubits: usize,
    /// Geometric phase θ of U_A; defaults to π/2 (CZ on two qubits).
    #[serde(default)]
    pub theta: Option<f64>,
    /// Phase-gate target; defaults to CZ for the adiabatic protocol.
    #[serde(default)]
    pub target: Option<PhaseTarget>,
    #[serde(default)]
    pub duration: Option<f64>,
    #[serde(default)]
    pub delta: Option<f64>,
    #[serde(default)]
    pub big_delta: Option<f64>,
}

impl GateRequest {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ..Self::default()
        }
    }

    pub fn with_duration(mut self, duration: f64) -> Self {
        self.duration = Some(duration);
        self
    }

    pub fn with_detunings(mut self, delta: Option<f64>, big_delta: Option<f64>) -> Self {
        self.delta = delta;
        self.big_delta = big_delta;
        self
    }

    fn duration(&self) -> Result<f64> {
        match self.duration {
            Some(t) if t > 0.0 && t.is_finite() => Ok(t),
            Some(t) => Err(invalid(format!("duration must be positive and finite, got {t}"))),
            None => Err(invalid("a finite-duration model needs a duration")),
        }
    }
}

/// Lossy channel of one gate and the operation it approximates.
#[derive(Clone, Debug)]
pub struct GateModel {
    pub channel: DiagonalChannel,
    pub target: PhaseTarget,
    /// Working point; unset for multi-pulse sequences.
    pub delta: Option<f64>,
    pub big_delta: Option<f64>,
    pub duration: f64,
}

pub trait GateProtocol: Send + Sync {
    fn name(&self) -> &'static str;
    fn summary(&self) -> &'static str;
    /// Channel at the requested finite duration.
    fn model(&self, req: &GateRequest, params: &SystemParams) -> Result<GateModel>;
    /// Infidelity in the long-pulse limit.
    fn asymptotic_infidelity(&self, req: &GateRequest, params: &SystemParams) -> Result<f64>;
    /// Full-model master-equation run at the requested duration.
    fn simulate(&self, req: &GateRequest, params: &SystemParams) -> Result<SimulatedGate>;
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimulatedGate {
    pub infidelity: f64,
    pub delta: f64,
    pub big_delta: f64,
}

pub struct GeometricProtocol;

impl GateProtocol for GeometricProtocol {
    fn name(&self) -> &'static str {
        "A"
    }

    fn summary(&self) -> &'static str {
        "geometric phase exp(i theta n^2) from a closed cavity loop"
    }

    fn model(&self, req: &GateRequest, params: &SystemParams) -> Result<GateModel> {
        if req.target.is_some() {
            return Err(invalid("protocol A implements exp(i theta n^2); pass theta instead of a target"));
        }
        let theta = req.theta.unwrap_or(FRAC_PI_2);
        let duration = req.duration()?;
        let params = SystemParams {
            n_qubits: req.n_qubits,
            ..params.clone()
        };
        let delta = match req.delta {
            Some(d) => d,
            None => optimize_delta_a(theta, duration, &params, DESIGN_GRID_POINTS)?.delta,
        };
        let design = design_pulse_a(theta, delta, duration, DESIGN_GRID_POINTS)?;
        let (limit, target) = match req.big_delta {
            // The dressed-state shift is linear in n and is undone locally.
            Some(b) => (DetuningLimit::Finite(b), PhaseTarget::up_to_local(ua_phases(req.n_qubits, theta))),
            None => (DetuningLimit::Infinite, PhaseTarget::exact(ua_phases(req.n_qubits, theta))),
        };
        let sol = solve_channel_a(&design, &params, limit, DecayModel::Exact)?;
        Ok(GateModel {
            channel: sol.channel,
            target,
            delta: Some(delta),
            big_delta: req.big_delta,
            duration,
        })
    }

    fn asymptotic_infidelity(&self, req: &GateRequest, params: &SystemParams) -> Result<f64> {
        if !(params.gamma > 0.0 && params.kappa > 0.0) {
            return Err(invalid("the asymptotic limit needs gamma > 0 and kappa > 0"));
        }
        Ok(asymptotic_infidelity_a(req.n_qubits, req.theta.unwrap_or(FRAC_PI_2), params.cooperativity()))
    }

    /// Without an explicit Δ the drive is capped at [`DEFAULT_ETA_CAP`] and Δ
    /// calibrated to it.
    fn simulate(&self, req: &GateRequest, params: &SystemParams) -> Result<SimulatedGate> {
        let theta = req.theta.unwrap_or(FRAC_PI_2);
        let duration = req.duration()?;
        let params = SystemParams {
            n_qubits: req.n_qubits,
            ..params.clone()
        };
        let delta = match req.delta {
            Some(d) => d,
            None => optimize_delta_a(theta, duration, &params, DESIGN_GRID_POINTS)?.delta,
        };
        let design = design_pulse_a(theta, delta, duration, DESIGN_GRID_POINTS)?;
        let opts = SimulationOptions::new(DISPLACED_FOCK_CUTOFF);
        let (big_delta, channel) = match req.big_delta {
            Some(b) => (b, simulate_protocol_a(&design, &params, b, SimulationFrame::Displaced, &opts)?.extraction.channel),
            None => {
                let run = simulate_with_drive_cap(&design, &params, DEFAULT_ETA_CAP, &opts)?;
                (run.big_delta, run.output.extraction.channel)
            }
        };
        let target = PhaseTarget::up_to_local(ua_phases(req.n_qubits, theta));
        Ok(SimulatedGate {
            infidelity: 1.0 - average_gate_fidelity(&channel, &target)?,
            delta,
            big_delta,
        })
    }
}

pub struct AdiabaticProtocol;

impl AdiabaticProtocol {
    fn cz_working_point(req: &GateRequest, params: &SystemParams) -> Result<(WorkingPoint, f64)> {
        let wp = match (req.delta, req.big_delta) {
            (Some(d), Some(b)) => WorkingPoint::new(d, b, params.g)?,
            (None, None) => cz_design_b(params)?.working_point(params.g),
            _ => return Err(invalid("set both delta and Delta, or neither")),
        };
        let energy = wp.energy_for_curvature(CZ_CURVATURE)?;
        Ok((wp, energy))
    }

    fn one_decay(channel: &DiagonalChannel, rate: f64, duration: f64) -> Result<DiagonalChannel> {
        if rate == 0.0 {
            return Ok(channel.clone());
        }
        let decay = DiagonalChannel::from_fn(channel.n_qubits, |n, m| C64::new(0.0, (n + m) as f64 * rate * duration / 2.0));
        channel.then(&decay)
    }
}

impl GateProtocol for AdiabaticProtocol {
    fn name(&self) -> &'static str {
        "B"
    }

    fn summary(&self) -> &'static str {
        "adiabatic dynamical phase exp(i c1/(c2 - n)) from a weak detuned drive"
    }

    fn model(&self, req: &GateRequest, params: &SystemParams) -> Result<GateModel> {
        let duration = req.duration()?;
        let params = SystemParams {
            n_qubits: req.n_qubits,
            ..params.clone()
        };
        let (channel, target, wp) = match &req.target {
            None => {
                if req.n_qubits != 2 {
                    return Err(invalid("the default adiabatic target is a two-qubit CZ"));
                }
                let (wp, energy) = Self::cz_working_point(req, &params)?;
                flat_top_pulse(energy, duration, &wp, 2)?;
                let ch = pulse_channel(2, energy, &wp, &params)?;
                (ch, PhaseTarget::up_to_local(vec![0.0, 0.0, PI]), Some(wp))
            }
            Some(t) => {
                let plan = synthesize(t, &params, &GridSpec::default(), ObjectiveMode::Average)?;
                let slot = duration / plan.pulses.len().max(1) as f64;
                for p in &plan.pulses {
                    let wp = WorkingPoint::new(p.delta, p.big_delta, params.g)?;
                    flat_top_pulse(p.energy, slot, &wp, req.n_qubits)?;
                }
                (plan_channel(&plan, &params)?, t.clone(), None)
            }
        };
        Ok(GateModel {
            channel: Self::one_decay(&channel, params.one_decay(), duration)?,
            target,
            delta: wp.map(|w| w.delta),
            big_delta: wp.map(|w| w.big_delta),
            duration,
        })
    }

    fn asymptotic_infidelity(&self, req: &GateRequest, params: &SystemParams) -> Result<f64> {
        let params = SystemParams {
            n_qubits: req.n_qubits,
            ..params.clone()
        };
        match &req.target {
            None if req.n_qubits == 2 => {
                let (wp, energy) = Self::cz_working_point(req, &params)?;
                Ok(1.0 - predict_fidelity_b(2, energy, &wp, &params)?)
            }
            None => Err(invalid("the default adiabatic target is a two-qubit CZ")),
            Some(t) => Ok(synthesize(t, &params, &GridSpec::default(), ObjectiveMode::Average)?.average_infidelity),
        }
    }

    /// Lab-frame run of the flat-top CZ pulse; short pulses are recalibrated
    /// to the target curvature.
    fn simulate(&self, req: &GateRequest, params: &SystemParams) -> Result<SimulatedGate> {
        if req.n_qubits != 2 || req.target.is_some() {
            return Err(invalid("full simulation of protocol B covers the two-qubit CZ"));
        }
        let duration = req.duration()?;
        let params = SystemParams {
            n_qubits: 2,
            ..params.clone()
        };
        let design = match (req.delta, req.big_delta) {
            (None, None) => cz_design_b(&params)?,
            _ => {
                let (wp, energy) = Self::cz_working_point(req, &params)?;
                CzDesignB {
                    intensity: energy,
                    delta: wp.delta,
                    big_delta: wp.big_delta,
                    infidelity: 1.0 - predict_fidelity_b(2, energy, &wp, &params)?,
                }
            }
        };
        let run = simulate_cz_b(&design, &params, duration, RECALIBRATION_BELOW, &adiabatic_options())?;
        Ok(SimulatedGate {
            infidelity: run.infidelity(),
            delta: design.delta,
            big_delta: design.big_delta,
        })
    }
}

pub fn protocols() -> &'static Registry<dyn GateProtocol> {
    static REG: OnceLock<Registry<dyn GateProtocol>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn GateProtocol> = Registry::new("protocol");
        r.register("A", Box::new(GeometricProtocol));
        r.register("B", Box::new(AdiabaticProtocol));
        r
    })
}

/// A family of symmetric phase gates parameterized by N (and an angle).
pub trait TargetFamily: Send + Sync {
    fn name(&self) -> &'static str;
    fn build(&self, n_qubits: usize, alpha: Option<f64>) -> Result<PhaseTarget>;
    /// LP objective used when synthesizing this family.
    fn objective(&self) -> ObjectiveMode;
    /// Figure of merit used to compare gates across N.
    fn metric(&self) -> FidelityMetric {
        FidelityMetric::Average
    }
    fn baseline(&self) -> Option<BaselineKind>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FidelityMetric {
    Average,
    Minimum,
}

struct Cz;
struct PhaseRotation;
struct Cnz;

impl TargetFamily for Cz {
    fn name(&self) -> &'static str {
        "cz"
    }
    fn build(&self, n_qubits: usize, _alpha: Option<f64>) -> Result<PhaseTarget> {
        if n_qubits != 2 {
            return Err(invalid("cz acts on exactly two qubits; use cnz for more"));
        }
        Ok(target_cnz(2))
    }
    fn objective(&self) -> ObjectiveMode {
        ObjectiveMode::Average
    }
    fn baseline(&self) -> Option<BaselineKind> {
        Some(BaselineKind::Cnz)
    }
}

impl TargetFamily for PhaseRotation {
    fn name(&self) -> &'static str {
        "phase-rotation"
    }
    fn build(&self, n_qubits: usize, alpha: Option<f64>) -> Result<PhaseTarget> {
        let alpha = alpha.ok_or_else(|| invalid("phase-rotation needs an angle alpha"))?;
        Ok(target_phase_rotation(alpha, n_qubits))
    }
    fn objective(&self) -> ObjectiveMode {
        ObjectiveMode::Average
    }
    fn baseline(&self) -> Option<BaselineKind> {
        Some(BaselineKind::PhaseRotation)
    }
}

impl TargetFamily for Cnz {
    fn name(&self) -> &'static str {
        "cnz"
    }
    fn build(&self, n_qubits: usize, _alpha: Option<f64>) -> Result<PhaseTarget> {
        if n_qubits < 2 {
            return Err(invalid("cnz needs at least two qubits"));
        }
        Ok(target_cnz(n_qubits))
    }
    fn objective(&self) -> ObjectiveMode {
        ObjectiveMode::Uniform
    }
    fn metric(&self) -> FidelityMetric {
        FidelityMetric::Minimum
    }
    fn baseline(&self) -> Option<BaselineKind> {
        Some(BaselineKind::Cnz)
    }
}

pub fn target_families() -> &'static Registry<dyn TargetFamily> {
    static REG: OnceLock<Registry<dyn TargetFamily>> = OnceLock::new();
    REG.get_or_init(|| {
        let mut r: Registry<dyn TargetFamily> = Registry::new("target");
        for f in [Box::new(Cz) as Box<dyn TargetFamily>, Box::new(PhaseRotation), Box::new(Cnz)] {
            r.register(f.name(), f);
        }
        r
    })
}
