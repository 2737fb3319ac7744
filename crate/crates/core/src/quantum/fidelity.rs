//! Average and worst-case gate fidelities of diagonal channels against
//! symmetric phase gates.

use std::f64::consts::PI;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{C64, I};
use crate::optimize::golden_section;
use crate::quantum::channel::DiagonalChannel;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ComparisonMode {
    Exact,
    /// Compare modulo a global phase θ_g and a collective single-qubit phase nθ_s.
    UpToLocal,
}

/// Target gate exp(iφ(n̂)) with φ given per excitation number.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhaseTarget {
    pub phases: Vec<f64>,
    pub mode: ComparisonMode,
}

impl PhaseTarget {
    pub fn new(phases: Vec<f64>, mode: ComparisonMode) -> Self {
        assert!(!phases.is_empty(), "a phase target needs at least one entry");
        Self { phases, mode }
    }

    pub fn exact(phases: Vec<f64>) -> Self {
        Self::new(phases, ComparisonMode::Exact)
    }

    pub fn up_to_local(phases: Vec<f64>) -> Self {
        Self::new(phases, ComparisonMode::UpToLocal)
    }

    pub fn n_qubits(&self) -> usize {
        self.phases.len() - 1
    }

    /// φ(n) + θ_g + nθ_s.
    pub fn shifted(&self, theta_g: f64, theta_s: f64) -> Vec<f64> {
        self.phases.iter().enumerate().map(|(n, p)| p + theta_g + n as f64 * theta_s).collect()
    }

    fn check(&self, channel: &DiagonalChannel) -> Result<()> {
        if channel.n_qubits != self.n_qubits() {
            return Err(Error::ShapeMismatch(format!(
                "channel on {} qubits vs target on {}",
                channel.n_qubits,
                self.n_qubits()
            )));
        }
        Ok(())
    }
}

pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Average gate fidelity against the exact phases `target_phases`.
pub fn fidelity_against(channel: &DiagonalChannel, target_phases: &[f64]) -> f64 {
    let n = channel.n_qubits;
    let w: Vec<f64> = (0..=n).map(|k| binomial(n, k)).collect();
    let dim = 2f64.powi(n as i32);
    let mut sum = C64::default();
    for a in 0..=n {
        sum += channel.element(a, a) * w[a];
        for b in 0..=n {
            sum += (I * (channel.phi[(a, b)] - (target_phases[a] - target_phases[b]))).exp() * (w[a] * w[b]);
        }
    }
    sum.re / (dim * (dim + 1.0))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FidelityReport {
    pub fidelity: f64,
    /// Collective single-qubit phase added to the target (0 in exact mode).
    pub theta_s: f64,
}

/// Maximizes a 2π-periodic function of θ by a grid scan plus golden refinement.
pub fn maximize_periodic(f: impl Fn(f64) -> f64, grid: usize) -> (f64, f64) {
    let h = 2.0 * PI / grid as f64;
    let (k, _) = (0..grid)
        .map(|k| (k, f(k as f64 * h)))
        .fold((0, f64::NEG_INFINITY), |acc, (k, v)| if v > acc.1 { (k, v) } else { acc });
    let c = k as f64 * h;
    let (x, v) = golden_section(|x| -f(x), c - h, c + h, 1e-12);
    (x.rem_euclid(2.0 * PI), -v)
}

pub fn average_gate_fidelity_report(channel: &DiagonalChannel, target: &PhaseTarget) -> Result<FidelityReport> {
    target.check(channel)?;
    Ok(match target.mode {
        ComparisonMode::Exact => FidelityReport {
            fidelity: fidelity_against(channel, &target.phases),
            theta_s: 0.0,
        },
        ComparisonMode::UpToLocal => {
            let (theta_s, fidelity) = maximize_periodic(
                |ts| fidelity_against(channel, &target.shifted(0.0, ts)),
                64 * (target.n_qubits() + 1),
            );
            FidelityReport { fidelity, theta_s }
        }
    })
}

pub fn average_gate_fidelity(channel: &DiagonalChannel, target: &PhaseTarget) -> Result<f64> {
    average_gate_fidelity_report(channel, target).map(|r| r.fidelity)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchSpace {
    /// Permutation-symmetric states (N+1 amplitudes).
    Symmetric,
    /// All 2^N computational amplitudes.
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MinFidelityOptions {
    pub restarts: usize,
    pub max_iterations: usize,
    pub tol: f64,
    pub seed: u64,
    pub space: SearchSpace,
}

impl Default for MinFidelityOptions {
    fn default() -> Self {
        Self {
            restarts: 32,
            max_iterations: 5000,
            tol: 1e-13,
            seed: 0x5eed,
            space: SearchSpace::Symmetric,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MinFidelity {
    pub value: f64,
    /// Squared amplitudes of the minimizing state (per excitation number for
    /// the symmetric search, per basis state for the full search).
    pub weights: Vec<f64>,
    pub theta_s: f64,
    pub converged: bool,
}

/// State fidelity ⟨ψ|U†E(ψ)U|ψ⟩ for a diagonal channel depends on ψ only
/// through the squared amplitudes p: it equals pᵀWp with
/// W_qq' = Re exp(i(φ_{n(q)m(q')} − φ_t(n) + φ_t(m))).
pub fn weight_matrix(channel: &DiagonalChannel, target_phases: &[f64]) -> Vec<Vec<f64>> {
    let n = channel.n_qubits;
    (0..=n)
        .map(|a| (0..=n).map(|b| (I * (channel.phi[(a, b)] - target_phases[a] + target_phases[b])).exp().re).collect())
        .collect()
}

/// Euclidean projection onto the probability simplex.
pub fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut theta = 0.0;
    for (k, x) in u.iter().enumerate() {
        cum += x;
        let t = (cum - 1.0) / (k + 1) as f64;
        if x - t > 0.0 {
            theta = t;
        }
    }
    v.iter().map(|x| (x - theta).max(0.0)).collect()
}

fn quadratic(w: &[Vec<f64>], p: &[f64]) -> f64 {
    w.iter().zip(p).map(|(row, pi)| pi * row.iter().zip(p).map(|(a, b)| a * b).sum::<f64>()).sum()
}

struct LocalMin {
    value: f64,
    point: Vec<f64>,
    converged: bool,
}

fn projected_gradient(w_full: &[Vec<f64>], start: Vec<f64>, opts: &MinFidelityOptions) -> LocalMin {
    // A constant offset in W is invisible on the simplex but dominates the
    // Lipschitz bound when every entry is close to one.
    let len = w_full.iter().map(|r| r.len()).sum::<usize>().max(1) as f64;
    let mean = w_full.iter().flatten().sum::<f64>() / len;
    let shifted: Vec<Vec<f64>> = w_full.iter().map(|r| r.iter().map(|x| x - mean).collect()).collect();
    let w = &shifted[..];
    let lipschitz = 2.0 * w.iter().flatten().map(|x| x * x).sum::<f64>().sqrt() + 1e-300;
    let step = 1.0 / lipschitz;
    let mut p = project_to_simplex(&start);
    for _ in 0..opts.max_iterations {
        let grad: Vec<f64> = w.iter().map(|row| 2.0 * row.iter().zip(&p).map(|(a, b)| a * b).sum::<f64>()).collect();
        let trial: Vec<f64> = p.iter().zip(&grad).map(|(x, g)| x - step * g).collect();
        let next = project_to_simplex(&trial);
        let moved = next.iter().zip(&p).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        // Frank–Wolfe gap: first-order stationarity on the simplex.
        let gmin = grad.iter().copied().fold(f64::INFINITY, f64::min);
        let gap = grad.iter().zip(&p).map(|(g, x)| g * x).sum::<f64>() - gmin;
        p = next;
        if moved < opts.tol || gap < opts.tol {
            return LocalMin {
                value: quadratic(w_full, &p),
                point: p,
                converged: true,
            };
        }
    }
    LocalMin {
        value: quadratic(w_full, &p),
        point: p,
        converged: false,
    }
}

fn expand_to_full(w: &[Vec<f64>], n_qubits: usize) -> Vec<Vec<f64>> {
    let count = |q: usize| q.count_ones() as usize;
    let d = 1usize << n_qubits;
    (0..d).map(|q| (0..d).map(|r| w[count(q)][count(r)]).collect()).collect()
}

fn min_quadratic(w: &[Vec<f64>], opts: &MinFidelityOptions) -> LocalMin {
    let d = w.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if d <= 64 {
        for k in 0..d {
            let mut e = vec![0.0; d];
            e[k] = 1.0;
            starts.push(e);
        }
    }
    for _ in 0..opts.restarts {
        let x: Vec<f64> = (0..d).map(|_| Exp1.sample(&mut rng)).collect();
        let s: f64 = x.iter().sum();
        starts.push(x.into_iter().map(|v| v / s).collect());
    }
    let mut best: Option<LocalMin> = None;
    let mut all_converged = true;
    for s in starts {
        let r = projected_gradient(w, s, opts);
        all_converged &= r.converged;
        if best.as_ref().map_or(true, |b| r.value < b.value) {
            best = Some(r);
        }
    }
    let mut b = best.expect("at least one start");
    b.converged = all_converged;
    b
}

/// Minimal state fidelity over pure inputs; the returned value is attained by
/// the reported state and therefore bounds the true minimum from above.
pub fn min_fidelity(channel: &DiagonalChannel, target: &PhaseTarget, opts: &MinFidelityOptions) -> Result<MinFidelity> {
    target.check(channel)?;
    let n = channel.n_qubits;
    if opts.space == SearchSpace::Full && n > 12 {
        return Err(crate::error::invalid("full-space minimal fidelity is limited to N <= 12"));
    }
    let solve = |theta_s: f64| {
        let w = weight_matrix(channel, &target.shifted(0.0, theta_s));
        match opts.space {
            SearchSpace::Symmetric => min_quadratic(&w, opts),
            SearchSpace::Full => min_quadratic(&expand_to_full(&w, n), opts),
        }
    };
    let theta_s = match target.mode {
        ComparisonMode::Exact => 0.0,
        ComparisonMode::UpToLocal => maximize_periodic(|ts| solve(ts).value, 32 * (n + 1)).0,
    };
    let r = solve(theta_s);
    if !r.converged {
        return Err(Error::Optimizer {
            reason: "projected gradient did not converge on every restart".into(),
            best: r.value,
        });
    }
    Ok(MinFidelity {
        value: r.value,
        weights: r.point,
        theta_s,
        converged: r.converged,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_channel() {
        let target = PhaseTarget::exact(vec![0.3, -1.0, 2.0]);
        let ch = DiagonalChannel::unitary(&target.phases);
        assert!((average_gate_fidelity(&ch, &target).unwrap() - 1.0).abs() < 1e-14);
        let m = min_fidelity(&ch, &target, &MinFidelityOptions::default()).unwrap();
        assert!((m.value - 1.0).abs() < 1e-12);
    }

    #[test]
    fn up_to_local_absorbs_linear_phase() {
        let target = PhaseTarget::up_to_local(vec![0.0, 0.0, PI]);
        let ch = DiagonalChannel::unitary(&target.shifted(0.4, -1.1));
        let r = average_gate_fidelity_report(&ch, &target).unwrap();
        assert!((r.fidelity - 1.0).abs() < 1e-12);
        assert!((r.theta_s - (2.0 * PI - 1.1)).abs() < 1e-6);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(4, 0), 1.0);
        assert_eq!(binomial(3, 4), 0.0);
    }

    #[test]
    fn simplex_projection() {
        let p = project_to_simplex(&[0.5, 0.8, -0.2]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        assert!((p[0] - 0.35).abs() < 1e-15 && (p[1] - 0.65).abs() < 1e-15 && p[2] == 0.0);
    }

    #[test]
    fn shape_mismatch() {
        let t = PhaseTarget::exact(vec![0.0; 3]);
        assert!(average_gate_fidelity(&DiagonalChannel::identity(3), &t).is_err());
    }
}
