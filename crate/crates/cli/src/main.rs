mod commands;
mod units;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::builder::PossibleValuesParser;
use clap::{Parser, Subcommand};

use cavgate::figures::figures;
use cavgate::registry::{protocols, target_families};

#[derive(Parser, Debug)]
#[command(name = "cavgate", version, about = "Cavity-mediated multi-qubit phase gates: sweeps, figures, synthesis and platform estimates")]
struct Cli {
    /// Worker threads for sweeps and figures (all cores when unset).
    #[arg(long, global = true, env = "CAVGATE_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the registered protocols, targets, figures and platforms.
    List,

    /// Write the CSV series behind one figure.
    Figure {
        #[arg(value_parser = PossibleValuesParser::new(figures().names()))]
        name: String,
        /// JSON figure config; flags given here override it.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Publication-density grids.
        #[arg(long)]
        dense: bool,
        /// Skip the full master-equation runs.
        #[arg(long)]
        analytic_only: bool,
        #[arg(long)]
        seed: Option<u64>,
    },

    /// Sweep one protocol over durations, C and gamma/kappa (units of g).
    Sweep(commands::SweepArgs),

    /// Synthesize a symmetric phase gate from adiabatic pulses; prints JSON.
    Synthesize {
        #[arg(long, value_parser = PossibleValuesParser::new(target_families().names()))]
        target: String,
        #[arg(long = "n", short = 'n')]
        n_qubits: usize,
        /// Rotation angle for phase-rotation targets (radians).
        #[arg(long, allow_hyphen_values = true)]
        alpha: Option<f64>,
        #[arg(long = "C", alias = "cooperativity", default_value_t = 1e6)]
        cooperativity: f64,
        #[arg(long, default_value_t = 1.0)]
        gamma_over_kappa: f64,
        /// Number of grid detunings per sign.
        #[arg(long)]
        k: Option<usize>,
        /// Seed for the minimal-fidelity restarts.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Error budget of a gate on a physical platform; prints JSON.
    Estimate(commands::EstimateArgs),

    /// GHZ-state fidelity after the geometric phase gate; prints JSON.
    Ghz {
        #[arg(long = "n", short = 'n')]
        n_qubits: usize,
        /// Cooperativity; the ideal gate when unset.
        #[arg(long = "C", alias = "cooperativity")]
        cooperativity: Option<f64>,
        #[arg(long, default_value_t = 1.0)]
        gamma_over_kappa: f64,
        /// Gate duration in units of 1/g.
        #[arg(long = "T", alias = "duration", default_value_t = 2000.0)]
        duration: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },

    /// Fast consistency checks of the installed build.
    Selftest,
}

fn run(cli: Cli) -> Result<ExitCode> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .context("configuring the worker pool")?;
    }
    match cli.command {
        Command::List => commands::list(protocols(), target_families()),
        Command::Figure {
            name,
            config,
            out,
            dense,
            analytic_only,
            seed,
        } => commands::figure(&name, config.as_deref(), out.as_deref(), dense, analytic_only, seed),
        Command::Sweep(args) => commands::sweep(&args),
        Command::Synthesize {
            target,
            n_qubits,
            alpha,
            cooperativity,
            gamma_over_kappa,
            k,
            seed,
            out,
        } => commands::synthesize(&target, n_qubits, alpha, cooperativity, gamma_over_kappa, k, seed, out.as_deref()),
        Command::Estimate(args) => commands::estimate(&args),
        Command::Ghz {
            n_qubits,
            cooperativity,
            gamma_over_kappa,
            duration,
            out,
        } => commands::ghz(n_qubits, cooperativity, gamma_over_kappa, duration, out.as_deref()),
        Command::Selftest => return commands::selftest(),
    }?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
