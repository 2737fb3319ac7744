//! The synthesis linear program: columns are candidate pulses (δ_k, Δ_k)
//! with Δ_k − δ_k fixed, variables are the pulse energies I_k ≥ 0.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::protocol_b::losses::{loss_rate, pulse_channel};
use crate::protocol_b::phases::WorkingPoint;
use crate::quantum::channel::DiagonalChannel;
use crate::quantum::fidelity::{binomial, ComparisonMode, PhaseTarget};
use crate::quantum::params::SystemParams;
use crate::synthesis::simplex::simplex_solve;

/// Detuning grid: `k` values of δ, log-spaced in |δ| over
/// [`delta_min`, `delta_max`] on both signs, with Δ = δ + `offset`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub k: usize,
    pub delta_min: f64,
    pub delta_max: f64,
    /// Δ_k − δ_k; `None` takes the two-qubit optimum −2.09√(γ/κ) − 0.529√(κ/γ).
    pub offset: Option<f64>,
    /// Each constraint may be met modulo 2π·j for |j| ≤ `branch_range`.
    pub branch_range: i32,
}

impl Default for GridSpec {
    fn default() -> Self {
        Self {
            k: 256,
            delta_min: 0.05,
            delta_max: 20.0,
            offset: None,
            branch_range: 1,
        }
    }
}

impl GridSpec {
    pub fn with_k(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn offset_for(&self, params: &SystemParams) -> f64 {
        self.offset.unwrap_or_else(|| {
            let r = if params.gamma > 0.0 && params.kappa > 0.0 { (params.gamma / params.kappa).sqrt() } else { 1.0 };
            -(2.09 * r + 0.529 / r) * params.g
        })
    }

    /// Candidate working points, pole-guard filtered, sorted by δ.
    pub fn points(&self, params: &SystemParams, n_qubits: usize) -> Vec<WorkingPoint> {
        let offset = self.offset_for(params);
        let half = (self.k / 2).max(1);
        let (lo, hi) = (self.delta_min.ln(), self.delta_max.ln());
        let mut out: Vec<WorkingPoint> = (0..half)
            .flat_map(|i| {
                let m = if half == 1 { lo.exp() } else { (lo + (hi - lo) * i as f64 / (half - 1) as f64).exp() };
                [m * params.g, -m * params.g]
            })
            .filter_map(|d| WorkingPoint::new(d, d + offset, params.g).ok())
            .filter(|wp| wp.check(n_qubits).is_ok() && wp.big_delta.abs() > 1e-6 * params.g)
            .collect();
        out.sort_by(|a, b| a.delta.total_cmp(&b.delta));
        out
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ObjectiveMode {
    /// Binomially weighted: b·I is the first-order average infidelity.
    Average,
    /// Equal weight on every (n, m) pair; used for multi-controlled Z.
    Uniform,
}

#[derive(Clone, Debug)]
pub struct SynthesisProblem {
    pub n_qubits: usize,
    pub points: Vec<WorkingPoint>,
    /// A_nk = −1/(δ_k − n g²/Δ_k), (N+1) × K.
    pub a: DMatrix<f64>,
    pub b: Vec<f64>,
    /// First-order average infidelity per unit energy (equals `b` in average mode).
    pub b_average: Vec<f64>,
    pub target: PhaseTarget,
    pub objective: ObjectiveMode,
    /// Mode-adjusted constraint rows and right-hand side.
    pub constraints: DMatrix<f64>,
    pub rhs: Vec<f64>,
}

fn loss_weights(n_qubits: usize, wp: &WorkingPoint, params: &SystemParams, mode: ObjectiveMode) -> Result<f64> {
    let d = 2f64.powi(n_qubits as i32);
    let mut s = 0.0;
    for n in 0..=n_qubits {
        if mode == ObjectiveMode::Average {
            s += binomial(n_qubits, n) * loss_rate(n, n, wp, params.gamma, params.kappa)?;
        }
        for m in 0..=n_qubits {
            let w = match mode {
                ObjectiveMode::Average => binomial(n_qubits, n) * binomial(n_qubits, m),
                ObjectiveMode::Uniform => 1.0,
            };
            s += w * loss_rate(n, m, wp, params.gamma, params.kappa)?;
        }
    }
    Ok(match mode {
        ObjectiveMode::Average => s / (d * (d + 1.0)),
        ObjectiveMode::Uniform => s / ((n_qubits + 1) as f64).powi(2),
    })
}

/// Rows n ≥ 2 of x_n − n x_1 + (n − 1) x_0.
fn reduce_rows(x: &DMatrix<f64>) -> DMatrix<f64> {
    let n = x.nrows() - 1;
    DMatrix::from_fn(n.saturating_sub(1), x.ncols(), |r, k| {
        let row = r + 2;
        x[(row, k)] - row as f64 * x[(1, k)] + (row as f64 - 1.0) * x[(0, k)]
    })
}

pub fn build_synthesis_lp(target: &PhaseTarget, params: &SystemParams, grid: &GridSpec, objective: ObjectiveMode) -> Result<SynthesisProblem> {
    let n_qubits = target.n_qubits();
    if n_qubits < 1 {
        return Err(invalid("synthesis needs N >= 1"));
    }
    let points = grid.points(params, n_qubits);
    if points.is_empty() {
        return Err(invalid("no detuning grid point survives the pole guard"));
    }
    let k = points.len();
    let a = DMatrix::from_fn(n_qubits + 1, k, |n, j| points[j].phase_per_energy(n).expect("grid is pole filtered"));
    let b = points.iter().map(|wp| loss_weights(n_qubits, wp, params, objective)).collect::<Result<Vec<_>>>()?;
    let b_average = points
        .iter()
        .map(|wp| loss_weights(n_qubits, wp, params, ObjectiveMode::Average))
        .collect::<Result<Vec<_>>>()?;
    let phases = DMatrix::from_column_slice(n_qubits + 1, 1, &target.phases);
    let (constraints, rhs) = match target.mode {
        ComparisonMode::Exact => (a.clone(), target.phases.clone()),
        ComparisonMode::UpToLocal => (reduce_rows(&a), reduce_rows(&phases).iter().copied().collect()),
    };
    Ok(SynthesisProblem {
        n_qubits,
        points,
        a,
        b,
        b_average,
        target: target.clone(),
        objective,
        constraints,
        rhs,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlannedPulse {
    pub delta: f64,
    pub big_delta: f64,
    pub energy: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SynthesisPlan {
    pub n_qubits: usize,
    pub mode: ComparisonMode,
    pub objective: ObjectiveMode,
    pub target_phases: Vec<f64>,
    pub pulses: Vec<PlannedPulse>,
    pub theta_g: f64,
    pub theta_s: f64,
    /// b·I for the objective in use.
    pub predicted_infidelity: f64,
    /// First-order average-gate infidelity of the plan.
    pub average_infidelity: f64,
    /// A·I, before θ_g + nθ_s.
    pub achieved_phases: Vec<f64>,
    /// The 2π offsets applied per constraint row.
    pub branches: Vec<i32>,
}

fn wrap(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(2.0 * PI) - PI;
    if y <= -PI { y + 2.0 * PI } else { y }
}

fn branch_offsets(rows: usize, range: i32) -> Vec<Vec<i32>> {
    let mut out = vec![vec![]];
    for _ in 0..rows {
        out = out
            .into_iter()
            .flat_map(|p| {
                (-range..=range).map(move |j| {
                    let mut q = p.clone();
                    q.push(j);
                    q
                })
            })
            .collect();
    }
    out
}

fn empty_plan(problem: &SynthesisProblem, branches: Vec<i32>) -> SynthesisPlan {
    let t = &problem.target.phases;
    let (theta_g, theta_s) = match problem.target.mode {
        ComparisonMode::Exact => (0.0, 0.0),
        ComparisonMode::UpToLocal => (wrap(t[0]), wrap(t.get(1).copied().unwrap_or(0.0) - t[0])),
    };
    SynthesisPlan {
        n_qubits: problem.n_qubits,
        mode: problem.target.mode,
        objective: problem.objective,
        target_phases: t.clone(),
        pulses: vec![],
        theta_g,
        theta_s,
        predicted_infidelity: 0.0,
        average_infidelity: 0.0,
        achieved_phases: vec![0.0; problem.n_qubits + 1],
        branches,
    }
}

/// Solves the LP over every 2π branch of the constraints and keeps the
/// cheapest plan.
pub fn solve_problem(problem: &SynthesisProblem, branch_range: i32) -> Result<SynthesisPlan> {
    let rows = problem.rhs.len();
    if rows == 0 || problem.rhs.iter().all(|r| wrap(*r).abs() < 1e-12) {
        let br = problem.rhs.iter().map(|r| ((r - wrap(*r)) / (2.0 * PI)).round() as i32).collect();
        return Ok(empty_plan(problem, br));
    }
    let mut best: Option<(f64, Vec<f64>, Vec<i32>)> = None;
    for br in branch_offsets(rows, branch_range) {
        let rhs: Vec<f64> = problem.rhs.iter().zip(&br).map(|(r, j)| r - 2.0 * PI * *j as f64).collect();
        match simplex_solve(&problem.constraints, &rhs, &problem.b) {
            Ok(sol) => {
                if best.as_ref().is_none_or(|b| sol.objective < b.0) {
                    best = Some((sol.objective, sol.x, br));
                }
            }
            Err(Error::LpInfeasible) => {}
            Err(e) => return Err(e),
        }
    }
    let (objective, x, branches) = best.ok_or(Error::LpInfeasible)?;
    let xmax = x.iter().fold(0.0f64, |m, v| m.max(*v));
    let pulses: Vec<PlannedPulse> = x
        .iter()
        .zip(&problem.points)
        .filter(|(v, _)| **v > 1e-14 * xmax)
        .map(|(v, wp)| PlannedPulse {
            delta: wp.delta,
            big_delta: wp.big_delta,
            energy: *v,
        })
        .collect();
    let achieved: Vec<f64> = (0..=problem.n_qubits).map(|n| (0..x.len()).map(|k| problem.a[(n, k)] * x[k]).sum()).collect();
    let average_infidelity = x.iter().zip(&problem.b_average).map(|(a, b)| a * b).sum();
    let t = &problem.target.phases;
    let (theta_g, theta_s) = match problem.target.mode {
        ComparisonMode::Exact => (0.0, 0.0),
        ComparisonMode::UpToLocal => {
            let g = wrap(t[0] - achieved[0]);
            (g, wrap(t[1] - achieved[1] - g))
        }
    };
    Ok(SynthesisPlan {
        n_qubits: problem.n_qubits,
        mode: problem.target.mode,
        objective: problem.objective,
        target_phases: t.clone(),
        pulses,
        theta_g,
        theta_s,
        predicted_infidelity: objective,
        average_infidelity,
        achieved_phases: achieved,
        branches,
    })
}

pub fn synthesize(target: &PhaseTarget, params: &SystemParams, grid: &GridSpec, objective: ObjectiveMode) -> Result<SynthesisPlan> {
    let problem = build_synthesis_lp(target, params, grid, objective)?;
    solve_problem(&problem, grid.branch_range)
}

impl SynthesisPlan {
    /// Largest |achieved + θ_g + nθ_s − target| modulo 2π.
    pub fn phase_error(&self) -> f64 {
        self.achieved_phases
            .iter()
            .enumerate()
            .map(|(n, a)| wrap(a + self.theta_g + n as f64 * self.theta_s - self.target_phases[n]).abs())
            .fold(0.0, f64::max)
    }
}

/// Channel of the whole pulse sequence (phases add, c-coefficients
/// multiply) followed by the local phases θ_g + nθ_s.
pub fn plan_channel(plan: &SynthesisPlan, params: &SystemParams) -> Result<DiagonalChannel> {
    let n = plan.n_qubits;
    let mut ch = DiagonalChannel::identity(n);
    for p in &plan.pulses {
        let wp = WorkingPoint::new(p.delta, p.big_delta, params.g)?;
        ch = ch.then(&pulse_channel(n, p.energy, &wp, params)?)?;
    }
    let local: Vec<f64> = (0..=n).map(|k| plan.theta_g + k as f64 * plan.theta_s).collect();
    ch.then(&DiagonalChannel::unitary(&local))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::synthesis::targets::{target_cnz, target_phase_rotation};

    fn params() -> SystemParams {
        SystemParams::new(2).with_cooperativity(1e6, 1.0)
    }

    #[test]
    fn shapes() {
        let grid = GridSpec::default().with_k(50);
        let p = build_synthesis_lp(&target_cnz(2), &params(), &grid, ObjectiveMode::Average).unwrap();
        assert_eq!(p.a.nrows(), 3);
        assert!(p.a.ncols() <= 50);
        assert_eq!(p.constraints.nrows(), 1);
        assert!(p.b.iter().all(|b| *b > 0.0));
        let offs: Vec<f64> = p.points.iter().map(|w| w.big_delta - w.delta).collect();
        assert!(offs.iter().all(|o| (o - offs[0]).abs() < 1e-12));
    }

    #[test]
    fn zero_target_is_empty() {
        let plan = synthesize(&target_phase_rotation(0.0, 3), &params(), &GridSpec::default(), ObjectiveMode::Average).unwrap();
        assert!(plan.pulses.is_empty());
        assert_eq!(plan.predicted_infidelity, 0.0);
    }

    #[test]
    fn plans_meet_constraints_with_vertex_support() {
        for n in 2..=5 {
            let plan = synthesize(&target_cnz(n), &params(), &GridSpec::default(), ObjectiveMode::Uniform).unwrap();
            assert!(plan.pulses.len() <= n - 1, "N={n}: {} pulses", plan.pulses.len());
            assert!(plan.phase_error() < 1e-8, "N={n}: {}", plan.phase_error());
            assert!(plan.pulses.iter().all(|p| p.energy > 0.0));
        }
        let exact = PhaseTarget::exact(vec![0.1, -0.4, 0.9]);
        let plan = synthesize(&exact, &params(), &GridSpec::default(), ObjectiveMode::Average).unwrap();
        assert!(plan.pulses.len() <= 3);
        assert!(plan.phase_error() < 1e-8);
    }
}
