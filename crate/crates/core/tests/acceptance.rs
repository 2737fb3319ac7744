//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Run in release mode; the full-model criteria take minutes.

use std::f64::consts::{FRAC_PI_2, TAU};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Instant;

use cavgate::integrate::StepOptions;
use cavgate::linalg::C64;
use cavgate::platforms::{estimate_gate, optimal_duration, preset, EstimateRequest};
use cavgate::protocol_a::analytic::{asymptotic_infidelity_a, solve_channel_a, ua_phases, DecayModel, DetuningLimit};
use cavgate::protocol_a::design::{design_pulse_a, design_with_shape};
use cavgate::protocol_a::ghz::{ghz_fidelity, ghz_fidelity_statevector};
use cavgate::protocol_a::inhomogeneity::{inhomogeneity_bound_a, monte_carlo_inhomogeneity_a};
use cavgate::protocol_a::simulate::{simulate_protocol_a, SimulationFrame};
use cavgate::protocol_b::design::{cz_design_b, AdiabaticPulseConfig};
use cavgate::protocol_b::inhomogeneity::{inhomogeneity_bound_b, monte_carlo_inhomogeneity_b};
use cavgate::protocol_b::phases::{exact_shift, second_order_shift};
use cavgate::protocol_b::simulate::{adiabatic_options, simulate_protocol_b};
use cavgate::quantum::channel::DiagonalChannel;
use cavgate::quantum::density::{DensityOperator, Frame};
use cavgate::quantum::fidelity::{average_gate_fidelity, PhaseTarget};
use cavgate::quantum::params::SystemParams;
use cavgate::quantum::pulse::{FlatTop, Trajectory};
use cavgate::quantum::simulate::{SimulationOptions, SimulationOutput};
use cavgate::registry::{protocols, target_families, GateRequest};
use cavgate::figures::synthesized_point;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = cavgate::Result<(bool, String)>;

fn rel(a: f64, b: f64) -> f64 {
    (a / b - 1.0).abs()
}

fn asymptotics() -> Outcome {
    let mut worst: f64 = 0.0;
    let start = Instant::now();
    let cs = [1e2, 1e4, 1e6, 1e8];
    for c in cs {
        worst = worst.max((asymptotic_infidelity_a(2, FRAC_PI_2, c) * c.sqrt() - 1.99).abs());
    }
    let per_call = start.elapsed().as_secs_f64() / cs.len() as f64;
    Ok((worst <= 0.005 && per_call < 1e-3, format!("max |(1-F)sqrt(C) - 1.99| = {worst:.4}, {:.1} us per call", per_call * 1e6)))
}

fn analytic_channel() -> Outcome {
    let c = 1500.0;
    let reference = asymptotic_infidelity_a(2, FRAC_PI_2, c);
    let mut values = Vec::new();
    for r in [0.1, 1.0, 10.0] {
        let params = SystemParams::new(2).with_cooperativity(c, r);
        let m = protocols().get("A")?.model(&GateRequest::new(2).with_duration(2000.0), &params)?;
        values.push(1.0 - average_gate_fidelity(&m.channel, &m.target)?);
    }
    let worst = values.iter().map(|v| rel(*v, reference)).fold(0.0, f64::max);
    let hi = values.iter().copied().fold(f64::MIN, f64::max);
    let lo = values.iter().copied().fold(f64::MAX, f64::min);
    let spread = hi / lo - 1.0;
    Ok((
        worst <= 0.02 && spread <= 0.02,
        format!(
            "(1-F)sqrt(C) = {:.3}/{:.3}/{:.3} vs {:.3}, worst {:.1}%, spread {:.1}%",
            values[0] * c.sqrt(),
            values[1] * c.sqrt(),
            values[2] * c.sqrt(),
            reference * c.sqrt(),
            worst * 100.0,
            spread * 100.0
        ),
    ))
}

fn full_model_a() -> Outcome {
    let params = SystemParams::new(2).with_cooperativity(1500.0, 0.3);
    let req = GateRequest::new(2).with_duration(80.0);
    let a = protocols().get("A")?;
    let m = a.model(&req, &params)?;
    let analytic = 1.0 - average_gate_fidelity(&m.channel, &m.target)?;
    let sim = a.simulate(&req, &params)?;
    let sim_ok = rel(sim.infidelity, analytic) <= 0.15;

    let rb = preset("rb_optical")?;
    let e = estimate_gate(&rb, &EstimateRequest::new("A", 2).with_duration(80e-9).with_big_delta(TAU * 1e9))?;
    let rb_ok = (e.total - 0.064).abs() <= 0.01;
    Ok((
        sim_ok && rb_ok,
        format!(
            "simulated {:.4e} vs analytic {:.4e} ({:.1}%, Delta = {:.1} g); rb_optical at 80 ns: {:.2}%",
            sim.infidelity,
            analytic,
            rel(sim.infidelity, analytic) * 100.0,
            sim.big_delta,
            e.total * 100.0
        ),
    ))
}

fn protocol_b_optimum() -> Outcome {
    let c = 1e6;
    let d = cz_design_b(&SystemParams::new(2).with_cooperativity(c, 1.0))?;
    let scaled = d.infidelity * c.sqrt();
    let ok = rel(d.delta.abs(), 0.529) <= 0.02 && rel(d.big_delta.abs(), 2.09) <= 0.02 && d.delta * d.big_delta < 0.0 && (scaled - 1.79).abs() <= 0.04;
    Ok((ok, format!("delta = {:.4}, Delta = {:.4}, (1-F)sqrt(C) = {scaled:.4}", d.delta, d.big_delta)))
}

fn adiabatic_window() -> Outcome {
    let c = 1e6;
    let params = SystemParams::new(2).with_cooperativity(c, 1.0);
    let asymptote = 1.79 / c.sqrt();
    let b = protocols().get("B")?;
    let mut best = (f64::NAN, f64::INFINITY);
    for t in [100.0, 200.0, 400.0, 1000.0] {
        let v = b.simulate(&GateRequest::new(2).with_duration(t), &params)?.infidelity;
        if rel(v, asymptote) < rel(best.1, asymptote) {
            best = (t, v);
        }
        if rel(v, asymptote) <= 0.1 {
            break;
        }
    }
    let short = b.simulate(&GateRequest::new(2).with_duration(30.0), &params)?.infidelity;
    Ok((
        rel(best.1, asymptote) <= 0.1 && short >= 1.5 * asymptote,
        format!("Tg = {} gives {:.3e} ({:.1}% off 1.79/sqrt(C)); Tg = 30 gives {:.2}x the asymptote", best.0, best.1, rel(best.1, asymptote) * 100.0, short / asymptote),
    ))
}

fn perturbation_oracle() -> Outcome {
    let d = cz_design_b(&SystemParams::new(2).with_cooperativity(1e6, 1.0))?;
    let wp = d.working_point(1.0);
    let err = |eta: f64| -> cavgate::Result<f64> {
        let mut worst: f64 = 0.0;
        for n in 0..=2 {
            let approx = second_order_shift(n, eta, &wp)?;
            let exact = exact_shift(n, eta, &wp);
            worst = worst.max((approx - exact).abs() / exact.abs());
        }
        Ok(worst)
    };
    let (e1, e2) = (err(0.01)?, err(0.001)?);
    let ratio = e1 / e2;
    Ok((e1 < 0.01 && (70.0..=140.0).contains(&ratio), format!("relative error {e1:.2e} at eta = 0.01, {e2:.2e} at 0.001 (ratio {ratio:.1})")))
}

fn ghz() -> Outcome {
    let mut worst: f64 = 0.0;
    for n in 2..=6 {
        worst = worst.max((ghz_fidelity(n, None)? - 1.0).abs());
        worst = worst.max((ghz_fidelity_statevector(n)? - 1.0).abs());
    }
    Ok((worst <= 1e-10, format!("max |F - 1| = {worst:.1e} over N = 2..6, both routes")))
}

/// Coefficient of determination of the least-squares line through (x, y).
fn r_squared(x: &[f64], y: &[f64]) -> f64 {
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    let syy: f64 = y.iter().map(|b| (b - my).powi(2)).sum();
    sxy * sxy / (sxx * syy)
}

fn synthesis_scaling() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    for family in ["phase-rotation", "cnz"] {
        let fam = target_families().get(family)?;
        for r in [0.1, 1.0, 10.0] {
            let mut ns = Vec::new();
            let mut ys = Vec::new();
            let mut beats = true;
            for n in 2..=6 {
                let params = SystemParams::new(n).with_cooperativity(1e6, r);
                let p = synthesized_point(fam, n, &params, 0)?;
                ns.push(n as f64);
                ys.push(p.infidelity);
                if n >= 3 && !(p.infidelity < p.baseline) {
                    beats = false;
                }
            }
            let r2 = r_squared(&ns, &ys);
            ok &= r2 > 0.95 && beats;
            notes.push(format!("{family} g/k={r}: R2 {r2:.3}{}", if beats { "" } else { " (baseline not beaten)" }));
        }
    }
    Ok((ok, notes.join("; ")))
}

fn inhomogeneity() -> Outcome {
    let spread = 0.1;
    let var_g2 = (2.0 * spread) * (2.0 * spread) / 12.0;
    let sample = |rng: &mut ChaCha8Rng| 1.0 + rng.random_range(-spread..spread);
    let d = cz_design_b(&SystemParams::new(2).with_cooperativity(1e6, 1.0))?;
    let wp = d.working_point(1.0);
    let mut ok = true;
    let mut worst_ratio: f64 = 0.0;
    for n in 2..=4 {
        let bound_a = inhomogeneity_bound_a(n, FRAC_PI_2, var_g2, 1.0);
        let bound_b = inhomogeneity_bound_b(n, d.intensity, &wp, var_g2)?;
        for seed in 0..5 {
            let a = monte_carlo_inhomogeneity_a(n, FRAC_PI_2, 1.0, sample, 1000, seed);
            let b = monte_carlo_inhomogeneity_b(n, d.intensity, &wp, sample, 1000, seed);
            ok &= a.mean <= bound_a && b.mean <= bound_b;
            worst_ratio = worst_ratio.max(a.mean / bound_a).max(b.mean / bound_b);
        }
    }
    Ok((ok, format!("largest Monte-Carlo mean / bound = {worst_ratio:.3} over N = 2..4, 5 runs each")))
}

fn platforms() -> Outcome {
    let mut ok = true;
    let mut notes = Vec::new();
    let rb = preset("rb_optical")?;
    for (p, target) in [("A", 0.051), ("B", 0.046)] {
        let e = estimate_gate(&rb, &EstimateRequest::new(p, 2))?;
        ok &= (e.total - target).abs() <= 0.002;
        notes.push(format!("rb {p} {:.2}%", e.total * 100.0));
    }
    let pm = preset("polar_molecule")?;
    let req = |p: &str| EstimateRequest::new(p, 2).with_duration(80e-6).with_big_delta(TAU * 1.2e6);
    for (p, target) in [("A", 1.0e-5), ("B", 8.7e-5)] {
        match estimate_gate(&pm, &req(p)) {
            Ok(e) => {
                ok &= rel(e.total, target) <= 0.25;
                notes.push(format!("polar {p} {:.2e}", e.total));
            }
            Err(err) => {
                ok = false;
                notes.push(format!("polar {p} error: {err}"));
            }
        }
    }
    let fx = preset("fluxonium")?;
    let e = estimate_gate(&fx, &EstimateRequest::new("A", 2).with_duration(640e-9).with_big_delta(TAU * 30e6))?;
    ok &= (e.t2_star_contribution - 0.032).abs() < 1e-12;
    notes.push(format!("fluxonium T/T2* {}", e.t2_star_contribution));
    let ry = preset("rydberg_microwave")?;
    let opt = optimal_duration(&ry, &EstimateRequest::new("A", 2).with_big_delta(TAU * 400e6), 1e-7, 1e-5, 24)?;
    let factor = (opt.total / 2.3e-4).max(2.3e-4 / opt.total);
    ok &= factor <= 3.0;
    notes.push(format!("rydberg A optimum {:.2e} at {:.0} ns", opt.total, opt.duration.unwrap_or(f64::NAN) * 1e9));
    Ok((ok, notes.join("; ")))
}

fn haar_agreement() -> cavgate::Result<(bool, String)> {
    let theta = [0.3, -1.1, 2.0, 0.7];
    let lambda = [0.0, 0.05, 0.12, 0.2];
    let ch = DiagonalChannel::from_fn(3, |n, m| {
        let d = n as f64 - m as f64;
        C64::new(theta[n] - theta[m], (lambda[n] + lambda[m]) / 2.0 + 0.02 * d * d)
    });
    let target = vec![0.0, -1.0, 2.2, 0.5];
    let closed = average_gate_fidelity(&ch, &PhaseTarget::exact(target.clone()))?;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let samples = 20000;
    let fs: Vec<f64> = (0..samples)
        .map(|_| {
            let p: Vec<f64> = (0..8)
                .map(|_| {
                    let (a, b): (f64, f64) = (rng.sample(rand_distr::StandardNormal), rng.sample(rand_distr::StandardNormal));
                    a * a + b * b
                })
                .collect();
            let s: f64 = p.iter().sum();
            let mut f = 0.0;
            for q in 0..8usize {
                for r in 0..8usize {
                    let (n, m) = (q.count_ones() as usize, r.count_ones() as usize);
                    f += p[q] * p[r] / (s * s) * (ch.element(n, m) * C64::from_polar(1.0, -(target[n] - target[m]))).re;
                }
            }
            f
        })
        .collect();
    let mean = fs.iter().sum::<f64>() / samples as f64;
    let sigma = (fs.iter().map(|f| (f - mean).powi(2)).sum::<f64>() / ((samples - 1) * samples) as f64).sqrt();
    Ok(((mean - closed).abs() <= 3.0 * sigma, format!("Haar {:.2} sigma", (mean - closed).abs() / sigma)))
}

fn channel_gap(a: &DiagonalChannel, b: &DiagonalChannel, n: usize) -> f64 {
    let mut worst: f64 = 0.0;
    for i in 0..=n {
        for j in 0..=n {
            worst = worst.max((a.element(i, j) - b.element(i, j)).norm());
        }
    }
    worst
}

fn snapshots_physical(out: &SimulationOutput) -> bool {
    out.diagonal_checkpoints.iter().all(|(_, snaps)| {
        let mut last = 1.0 + 1e-12;
        snaps.iter().all(|(_, m)| {
            let rho = DensityOperator {
                matrix: m.clone(),
                frame: Frame::Lab,
            };
            let tr = rho.trace();
            let fine = tr <= last + 1e-10 && rho.hermiticity_error() < 1e-10 && rho.min_eigenvalue() > -1e-8;
            last = tr;
            fine
        })
    }) && !out.diagonal_checkpoints.is_empty()
}

fn property_suites() -> Outcome {
    let (haar_ok, haar_note) = haar_agreement()?;

    let params = SystemParams::new(2).with_cooperativity(1e3, 1.0);
    let design = design_pulse_a(0.1, 0.5, 40.0, 401)?;
    let opts = SimulationOptions {
        leakage_threshold: f64::INFINITY,
        steps: StepOptions {
            initial_steps: 400,
            tol: 1e-10,
            max_halvings: 10,
        },
        ..SimulationOptions::new(14)
    };
    let lab = simulate_protocol_a(&design, &params, 20.0, SimulationFrame::Lab, &opts)?;
    let displaced = simulate_protocol_a(&design, &params, 20.0, SimulationFrame::Displaced, &opts)?;
    let frame_gap = channel_gap(&lab.extraction.channel, &displaced.extraction.channel, 2);

    let mut shape_err: f64 = 0.0;
    for (theta, delta, ramp) in [(0.4, 0.3, 0.1), (1.3, 1.0, 0.3), (3.0, 0.2, 0.5)] {
        let shape: Arc<dyn Trajectory> = Arc::new(FlatTop::new(100.0, ramp * 100.0)?);
        for d in [design_with_shape(theta, delta, shape, 401)?, design_pulse_a(theta, delta, 100.0, 401)?] {
            let sol = solve_channel_a(&d, &SystemParams::new(3), DetuningLimit::Infinite, DecayModel::Exact)?;
            shape_err = shape_err.max(channel_gap(&sol.channel, &DiagonalChannel::unitary(&ua_phases(3, theta)), 3));
        }
    }

    let snap_a = simulate_protocol_a(
        &design_pulse_a(0.5, 0.5, 40.0, 401)?,
        &params,
        50.0,
        SimulationFrame::Displaced,
        &SimulationOptions {
            checkpoints: 8,
            leakage_threshold: f64::INFINITY,
            ..SimulationOptions::new(8)
        },
    )?;
    let snap_b = simulate_protocol_b(
        &AdiabaticPulseConfig::from_shape(30.0, 8.0, 0.4)?,
        &SystemParams::new(2).with_cooperativity(1e3, 1.0).with_detunings(3.0, 30.0),
        &SimulationOptions {
            checkpoints: 8,
            ..adiabatic_options()
        },
    )?;
    let physical = snapshots_physical(&snap_a) && snapshots_physical(&snap_b);

    Ok((
        haar_ok && frame_gap < 1e-6 && shape_err < 1e-8 && physical,
        format!("{haar_note}; frames differ by {frame_gap:.1e}; shape invariance {shape_err:.1e}; snapshots physical: {physical}"),
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("closed-form asymptotics", asymptotics),
        ("analytic channel convergence", analytic_channel),
        ("full model vs analytic (A)", full_model_a),
        ("adiabatic CZ optimum", protocol_b_optimum),
        ("adiabatic window", adiabatic_window),
        ("second-order phase oracle", perturbation_oracle),
        ("GHZ correctness", ghz),
        ("synthesis scaling", synthesis_scaling),
        ("inhomogeneity bounds", inhomogeneity),
        ("platform numbers", platforms),
        ("property suites", property_suites),
    ];
    let only: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let mut failed = 0;
    for (k, (name, run)) in criteria.iter().enumerate() {
        let id = k + 1;
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let start = Instant::now();
        let (pass, note) = match run() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        failed += usize::from(!pass);
        println!("{} {id:>2} {name}: {note} [{:.1} s]", if pass { "PASS" } else { "FAIL" }, start.elapsed().as_secs_f64());
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

