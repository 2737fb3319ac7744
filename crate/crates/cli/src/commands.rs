use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context, Result};
use clap::builder::{PossibleValuesParser, TypedValueParser};
use clap::Args;
use serde_json::json;

use cavgate::figures::{figures, FigureConfig};
use cavgate::platforms::{estimate_gate, optimal_duration, preset, preset_names, presets, EstimateRequest};
use cavgate::protocol_a::ghz::{ghz_fidelity, ghz_fidelity_statevector};
use cavgate::quantum::fidelity::{average_gate_fidelity, min_fidelity, MinFidelityOptions, PhaseTarget};
use cavgate::quantum::params::SystemParams;
use cavgate::registry::{protocols, target_families, FidelityMetric, GateProtocol, GateRequest, Registry, TargetFamily};
use cavgate::sweep::{read_csv, run_sweep, to_csv_string, SweepSpec};
use cavgate::synthesis::{plan_channel, synthesize as synthesize_plan, GridSpec};

use crate::units::{parse_duration, parse_frequency};

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn emit_json(out: Option<&Path>, value: &serde_json::Value) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    emit(out, &text)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn list(protos: &Registry<dyn GateProtocol>, families: &Registry<dyn TargetFamily>) -> Result<()> {
    let mut s = String::from("protocols:\n");
    for name in protos.names() {
        s += &format!("  {name}  {}\n", protos.get(name)?.summary());
    }
    s += "targets:\n";
    for name in families.names() {
        s += &format!("  {name}\n");
    }
    s += "figures:\n";
    for name in figures().names() {
        s += &format!("  {name}  {}\n", figures().get(name)?.caption());
    }
    s += "platforms:\n";
    for p in presets() {
        s += &format!("  {}  {}\n", p.name, p.notes);
    }
    emit(None, &s)
}

pub fn figure(name: &str, config: Option<&Path>, out: Option<&Path>, dense: bool, analytic_only: bool, seed: Option<u64>) -> Result<()> {
    let mut cfg: FigureConfig = match config {
        Some(path) => read_json(path)?,
        None => FigureConfig::default(),
    };
    cfg.dense |= dense;
    if analytic_only {
        cfg.simulate = false;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    let rows = figures().get(name)?.rows(&cfg)?;
    emit(out, &to_csv_string(&rows)?)
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// JSON sweep spec; flags given here override it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long, value_parser = PossibleValuesParser::new(protocols().names()).map(|s| s.to_string()), ignore_case = true)]
    protocol: Option<String>,
    #[arg(long = "n", short = 'n')]
    n_qubits: Option<usize>,
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Gate durations in units of 1/g, comma separated.
    #[arg(long = "T", alias = "durations", value_delimiter = ',')]
    durations: Vec<f64>,
    #[arg(long = "C", alias = "cooperativities", value_delimiter = ',')]
    cooperativities: Vec<f64>,
    #[arg(long, value_delimiter = ',')]
    gamma_over_kappa: Vec<f64>,
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    #[arg(long = "Delta", alias = "big-delta", allow_hyphen_values = true)]
    big_delta: Option<f64>,
    /// Also run the full master-equation model.
    #[arg(long)]
    simulate: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl SweepArgs {
    fn spec(&self) -> Result<SweepSpec> {
        let mut spec = match &self.config {
            Some(path) => read_json(path)?,
            None => SweepSpec {
                protocol: self.protocol.clone().ok_or_else(|| anyhow!("--protocol is required without --config"))?,
                n_qubits: 2,
                theta: None,
                durations: vec![],
                cooperativities: vec![],
                gamma_over_kappa: vec![1.0],
                delta: None,
                big_delta: None,
                simulate: false,
            },
        };
        if let Some(p) = &self.protocol {
            spec.protocol = p.clone();
        }
        if let Some(n) = self.n_qubits {
            spec.n_qubits = n;
        }
        if self.theta.is_some() {
            spec.theta = self.theta;
        }
        if !self.durations.is_empty() {
            spec.durations = self.durations.clone();
        }
        if !self.cooperativities.is_empty() {
            spec.cooperativities = self.cooperativities.clone();
        }
        if !self.gamma_over_kappa.is_empty() {
            spec.gamma_over_kappa = self.gamma_over_kappa.clone();
        }
        if self.delta.is_some() {
            spec.delta = self.delta;
        }
        if self.big_delta.is_some() {
            spec.big_delta = self.big_delta;
        }
        spec.simulate |= self.simulate;
        spec.validate()?;
        Ok(spec)
    }
}

pub fn sweep(args: &SweepArgs) -> Result<()> {
    let rows = run_sweep(&args.spec()?)?;
    emit(args.out.as_deref(), &to_csv_string(&rows)?)
}

#[allow(clippy::too_many_arguments)]
pub fn synthesize(
    target: &str,
    n_qubits: usize,
    alpha: Option<f64>,
    cooperativity: f64,
    gamma_over_kappa: f64,
    k: Option<usize>,
    seed: u64,
    out: Option<&Path>,
) -> Result<()> {
    let family = target_families().get(target)?;
    let phase_target = family.build(n_qubits, alpha)?;
    let params = SystemParams::new(n_qubits).with_cooperativity(cooperativity, gamma_over_kappa);
    let mut grid = GridSpec::default();
    if let Some(k) = k {
        grid = grid.with_k(k);
    }
    let plan = synthesize_plan(&phase_target, &params, &grid, family.objective())?;
    let channel = plan_channel(&plan, &params)?;
    let exact = PhaseTarget::exact(plan.target_phases.clone());
    let average = 1.0 - average_gate_fidelity(&channel, &exact)?;
    let minimum = match family.metric() {
        FidelityMetric::Minimum => {
            let opts = MinFidelityOptions {
                seed,
                ..MinFidelityOptions::default()
            };
            Some(1.0 - min_fidelity(&channel, &exact, &opts)?.value)
        }
        FidelityMetric::Average => None,
    };
    let per_cz = cavgate::protocol_b::cz_design_b(&SystemParams { n_qubits: 2, ..params.clone() })?.infidelity;
    let baseline = family.baseline().map(|b| {
        json!({
            "kind": b,
            "cz_count": b.cz_count(n_qubits),
            "per_cz_infidelity": per_cz,
            "infidelity": b.infidelity(n_qubits, per_cz),
        })
    });
    emit_json(
        out,
        &json!({
            "target": family.name(),
            "n_qubits": n_qubits,
            "alpha": alpha,
            "cooperativity": cooperativity,
            "gamma_over_kappa": gamma_over_kappa,
            "metric": family.metric(),
            "pulse_count": plan.pulses.len(),
            "average_infidelity": average,
            "min_fidelity_infidelity": minimum,
            "baseline": baseline,
            "plan": plan,
        }),
    )
}

fn platform_name(s: &str) -> std::result::Result<String, String> {
    preset(s)
        .map(|p| p.name)
        .map_err(|_| format!("unknown platform; expected one of: {}", preset_names().join(", ")))
}

#[derive(Args, Debug)]
pub struct EstimateArgs {
    #[arg(value_parser = platform_name)]
    platform: String,
    #[arg(long, default_value = "A", value_parser = PossibleValuesParser::new(protocols().names()).map(|s| s.to_string()), ignore_case = true)]
    protocol: String,
    #[arg(long = "n", short = 'n', default_value_t = 2)]
    n_qubits: usize,
    /// Geometric phase of protocol A (default pi/2).
    #[arg(long, allow_hyphen_values = true)]
    theta: Option<f64>,
    /// Gate duration, e.g. 640ns; the long-pulse limit when unset.
    #[arg(long = "T", alias = "duration", value_parser = parse_duration)]
    duration: Option<f64>,
    /// Drive-cavity detuning as a cyclic frequency, e.g. 5MHz.
    #[arg(long, value_parser = parse_frequency, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Drive-transition detuning as a cyclic frequency, e.g. 30MHz.
    #[arg(long = "Delta", alias = "big-delta", value_parser = parse_frequency, allow_hyphen_values = true)]
    big_delta: Option<f64>,
    /// Report the long-pulse limit even if --T is given.
    #[arg(long)]
    asymptotic: bool,
    /// Minimize the total over durations in [LO, HI].
    #[arg(long, num_args = 2, value_names = ["LO", "HI"], value_parser = parse_duration, conflicts_with = "duration")]
    optimize_duration: Option<Vec<f64>>,
    #[arg(long)]
    out: Option<PathBuf>,
}

pub fn estimate(args: &EstimateArgs) -> Result<()> {
    let p = preset(&args.platform)?;
    let mut req = EstimateRequest::new(&args.protocol, args.n_qubits);
    req.theta = args.theta;
    req.delta = args.delta.map(|f| TAU * f);
    req.big_delta = args.big_delta.map(|f| TAU * f);
    if !args.asymptotic {
        req.duration = args.duration;
    }
    let est = match &args.optimize_duration {
        Some(b) if !args.asymptotic => optimal_duration(&p, &req, b[0], b[1], 24)?,
        _ => estimate_gate(&p, &req)?,
    };
    let mut value = serde_json::to_value(&est)?;
    value["platform_parameters"] = json!({
        "g": p.g,
        "gamma": p.gamma,
        "kappa": p.kappa,
        "cooperativity": p.cooperativity,
        "t2_star": p.t2_star,
        "one_state_lifetime": p.one_state_lifetime,
        "citation": p.citation,
    });
    emit_json(args.out.as_deref(), &value)
}

pub fn ghz(n_qubits: usize, cooperativity: Option<f64>, gamma_over_kappa: f64, duration: f64, out: Option<&Path>) -> Result<()> {
    let ideal = ghz_fidelity(n_qubits, None)?;
    let statevector = if n_qubits <= 16 { Some(ghz_fidelity_statevector(n_qubits)?) } else { None };
    let lossy = match cooperativity {
        Some(c) => {
            let params = SystemParams::new(n_qubits).with_cooperativity(c, gamma_over_kappa);
            let model = protocols().get("A")?.model(&GateRequest::new(n_qubits).with_duration(duration), &params)?;
            Some(json!({
                "fidelity": ghz_fidelity(n_qubits, Some(&model.channel))?,
                "gate_infidelity": 1.0 - average_gate_fidelity(&model.channel, &model.target)?,
                "delta": model.delta,
            }))
        }
        None => None,
    };
    emit_json(
        out,
        &json!({
            "n_qubits": n_qubits,
            "ideal_fidelity": ideal,
            "statevector_fidelity": statevector,
            "cooperativity": cooperativity,
            "gamma_over_kappa": gamma_over_kappa,
            "duration": cooperativity.map(|_| duration),
            "lossy": lossy,
        }),
    )
}

fn check(name: &str, ok: Result<bool>, failures: &mut usize) {
    match ok {
        Ok(true) => println!("PASS {name}"),
        Ok(false) => {
            *failures += 1;
            println!("FAIL {name}");
        }
        Err(e) => {
            *failures += 1;
            println!("FAIL {name}: {e:#}");
        }
    }
}

pub fn selftest() -> Result<ExitCode> {
    let mut failures = 0;
    check(
        "geometric long-pulse limit",
        (|| {
            let p = SystemParams::new(2).with_cooperativity(1e4, 1.0);
            let v = protocols().get("A")?.asymptotic_infidelity(&GateRequest::new(2), &p)?;
            Ok((v * 100.0 - PI / 2.5f64.sqrt()).abs() < 1e-9)
        })(),
        &mut failures,
    );
    check(
        "adiabatic CZ design",
        (|| {
            let p = SystemParams::new(2).with_cooperativity(1e4, 1.0);
            let d = cavgate::protocol_b::cz_design_b(&p)?;
            Ok((d.infidelity * 100.0 / 1.79 - 1.0).abs() < 0.03)
        })(),
        &mut failures,
    );
    check(
        "ideal GHZ preparation",
        (|| Ok((ghz_fidelity(6, None)? - 1.0).abs() < 1e-12 && (ghz_fidelity_statevector(6)? - 1.0).abs() < 1e-12))(),
        &mut failures,
    );
    check(
        "three-qubit CCZ synthesis",
        (|| {
            let t = target_families().get("cnz")?.build(3, None)?;
            let p = SystemParams::new(3).with_cooperativity(1e6, 1.0);
            let plan = synthesize_plan(&t, &p, &GridSpec::default().with_k(64), target_families().get("cnz")?.objective())?;
            Ok(plan.phase_error() < 1e-6 && !plan.pulses.is_empty())
        })(),
        &mut failures,
    );
    check(
        "platform table",
        (|| {
            let fx = preset("fluxonium")?;
            let e = estimate_gate(&fx, &EstimateRequest::new("A", 2).with_duration(640e-9).with_big_delta(TAU * 30e6))?;
            Ok((e.t2_star_contribution - 0.032).abs() < 1e-12 && presets().len() == preset_names().len())
        })(),
        &mut failures,
    );
    check(
        "CSV round trip",
        (|| {
            let cfg = FigureConfig {
                simulate: false,
                ..FigureConfig::default()
            };
            let rows = figures().get("fig2b")?.rows(&cfg)?;
            Ok(read_csv(to_csv_string(&rows)?.as_bytes())? == rows)
        })(),
        &mut failures,
    );
    check(
        "theta defaults to CZ",
        (|| {
            let p = SystemParams::new(2).with_cooperativity(1e4, 1.0);
            let a = protocols().get("A")?.asymptotic_infidelity(&GateRequest::new(2), &p)?;
            let req = GateRequest {
                theta: Some(FRAC_PI_2),
                ..GateRequest::new(2)
            };
            Ok(a == protocols().get("A")?.asymptotic_infidelity(&req, &p)?)
        })(),
        &mut failures,
    );
    if failures > 0 {
        bail!("{failures} selftest check(s) failed");
    }
    Ok(ExitCode::SUCCESS)
}
