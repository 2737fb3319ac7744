//! Channel extraction by master-equation simulation, per excitation-number
//! sector (default) or in the full product space.

use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::integrate::StepOptions;
use crate::linalg::{CMatrix, DrivenOperator, C64};
use crate::quantum::channel::{channel_from_simulation, ChannelExtraction, SectorOutcome, DEFAULT_LEAKAGE_THRESHOLD};
use crate::quantum::master::{evolve, CutoffGuard, EvolveOptions, Liouvillian};
use crate::quantum::space::{FullSpace, Space, SymmetricSector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Basis {
    /// One permutation-symmetric sector per excitation number.
    Symmetric,
    /// Full cavity ⊗ 3^N space; needed for inhomogeneous couplings.
    Full,
}

#[derive(Clone, Debug)]
pub struct SimulationOptions {
    pub basis: Basis,
    pub fock_cutoff: usize,
    pub steps: StepOptions,
    pub leakage_threshold: f64,
    pub cutoff_threshold: f64,
    /// Snapshots kept per diagonal (n, n) run for invariant checks.
    pub checkpoints: usize,
}

impl SimulationOptions {
    pub fn new(fock_cutoff: usize) -> Self {
        Self {
            basis: Basis::Symmetric,
            fock_cutoff,
            steps: StepOptions::default(),
            leakage_threshold: DEFAULT_LEAKAGE_THRESHOLD,
            cutoff_threshold: CutoffGuard::DEFAULT_THRESHOLD,
            checkpoints: 0,
        }
    }

    fn evolve_options(&self, guard: CutoffGuard) -> EvolveOptions {
        EvolveOptions {
            steps: self.steps,
            cutoff: Some(CutoffGuard {
                threshold: self.cutoff_threshold,
                ..guard
            }),
            checkpoints: self.checkpoints,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SimulationOutput {
    pub extraction: ChannelExtraction,
    pub max_top_weight: f64,
    /// Snapshots of the (n, n) runs, which are genuine density operators.
    pub diagonal_checkpoints: Vec<(usize, Vec<(f64, CMatrix)>)>,
}

fn unit_corner(rows: usize, cols: usize, i: usize, j: usize) -> CMatrix {
    let mut m = CMatrix::zeros(rows, cols);
    m[(i, j)] = C64::new(1.0, 0.0);
    m
}

/// Evolves |0, q⟩⟨0, q'| in the full space.
pub fn simulate_pair_full(
    space: &FullSpace,
    hamiltonian: &DrivenOperator,
    kappa: f64,
    duration: f64,
    q: &[bool],
    q_prime: &[bool],
    opts: &SimulationOptions,
) -> Result<(SectorOutcome, crate::quantum::master::Evolution)> {
    let (i, j) = (space.computational_index(q), space.computational_index(q_prime));
    let dim = space.dim();
    let a = space.annihilation();
    let generator = Liouvillian::square(hamiltonian.clone(), a, kappa);
    let qdim = space.qubit_dim();
    let guard = if i == j { CutoffGuard::for_density(dim, qdim) } else { CutoffGuard::for_blocks(dim, qdim, dim, qdim) };
    let evo = evolve(&generator, &unit_corner(dim, dim, i, j), duration, &opts.evolve_options(guard))?;
    Ok((
        SectorOutcome {
            state: evo.state.clone(),
            qubit_dims: (qdim, qdim),
            qubit_indices: (i, j),
        },
        evo,
    ))
}

/// Representative computational state with the first `n` qubits in |1⟩.
pub fn representative(n_qubits: usize, n: usize) -> Vec<bool> {
    (0..n_qubits).map(|j| j < n).collect()
}

/// Simulates the channel produced by the Hamiltonian returned by `build` for
/// each space, and the cavity jump operator √κ a.
pub fn simulate_channel(
    n_qubits: usize,
    kappa: f64,
    duration: f64,
    build: &(dyn Fn(&dyn Space) -> DrivenOperator + Sync),
    opts: &SimulationOptions,
) -> Result<SimulationOutput> {
    let top = Mutex::new(0.0f64);
    let snaps: Mutex<Vec<(usize, Vec<(f64, CMatrix)>)>> = Mutex::new(Vec::new());
    let record = |n: usize, m: usize, evo: &crate::quantum::master::Evolution| {
        let mut t = top.lock().unwrap();
        *t = t.max(evo.max_top_weight);
        if n == m && opts.checkpoints > 0 {
            snaps.lock().unwrap().push((n, evo.checkpoints.clone()));
        }
    };
    let extraction = match opts.basis {
        Basis::Symmetric => channel_from_simulation(
            n_qubits,
            |n, m| {
                let (sl, sr) = (SymmetricSector::new(n, opts.fock_cutoff), SymmetricSector::new(m, opts.fock_cutoff));
                let generator = Liouvillian::new(build(&sl), build(&sr), sl.annihilation(), sr.annihilation(), kappa);
                let guard = if n == m {
                    CutoffGuard::for_density(sl.dim(), sl.qubit_dim())
                } else {
                    CutoffGuard::for_blocks(sl.dim(), sl.qubit_dim(), sr.dim(), sr.qubit_dim())
                };
                let evo = evolve(&generator, &unit_corner(sl.dim(), sr.dim(), 0, 0), duration, &opts.evolve_options(guard))?;
                record(n, m, &evo);
                Ok(SectorOutcome {
                    state: evo.state,
                    qubit_dims: (sl.qubit_dim(), sr.qubit_dim()),
                    qubit_indices: (sl.computational_index(), sr.computational_index()),
                })
            },
            opts.leakage_threshold,
        )?,
        Basis::Full => {
            let space = FullSpace::new(n_qubits, opts.fock_cutoff)?;
            let h = build(&space);
            channel_from_simulation(
                n_qubits,
                |n, m| {
                    let (out, evo) = simulate_pair_full(
                        &space,
                        &h,
                        kappa,
                        duration,
                        &representative(n_qubits, n),
                        &representative(n_qubits, m),
                        opts,
                    )?;
                    record(n, m, &evo);
                    Ok(out)
                },
                opts.leakage_threshold,
            )?
        }
    };
    let mut diagonal_checkpoints = snaps.into_inner().unwrap();
    diagonal_checkpoints.sort_by_key(|(n, _)| *n);
    Ok(SimulationOutput {
        extraction,
        max_top_weight: top.into_inner().unwrap(),
        diagonal_checkpoints,
    })
}
