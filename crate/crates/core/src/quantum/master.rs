//! Lindblad evolution with a single jump operator √κ a and non-Hermitian
//! Hamiltonians:
//!   ρ̇ = −i H_L ρ + i ρ H_R† + κ a ρ a† − κ/2 (a†a ρ + ρ a†a).
//! Left and right spaces may differ; this lets one evolve the coherence
//! |ψ_n⟩⟨ψ_m| between two symmetric sectors directly.

use crate::error::{Error, Result};
use crate::integrate::{rk4_converged, StepOptions};
use crate::linalg::{CMatrix, DrivenOperator, SparseOp, C64, I};
use crate::quantum::density::DensityOperator;

/// Generator acting on rectangular operators.
#[derive(Clone)]
pub struct Liouvillian {
    left: DrivenOperator,
    right: DrivenOperator,
    jump_left: SparseOp,
    jump_right: SparseOp,
    kappa: f64,
}

impl Liouvillian {
    pub fn new(left: DrivenOperator, right: DrivenOperator, jump_left: SparseOp, jump_right: SparseOp, kappa: f64) -> Self {
        let damp = |h: DrivenOperator, a: &SparseOp| DrivenOperator {
            fixed: h.fixed.add(&a.adjoint().mul(a).scale(C64::new(0.0, -kappa / 2.0))),
            driven: h.driven,
        };
        Self {
            left: damp(left, &jump_left),
            right: damp(right, &jump_right),
            jump_left,
            jump_right,
            kappa,
        }
    }

    pub fn square(h: DrivenOperator, jump: SparseOp, kappa: f64) -> Self {
        Self::new(h.clone(), h, jump.clone(), jump, kappa)
    }

    pub fn apply(&self, t: f64, rho: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(rho.nrows(), rho.ncols());
        self.left.left_mul_acc(t, -I, rho, &mut out);
        self.right.right_mul_adjoint_acc(t, I, rho, &mut out);
        if self.kappa != 0.0 {
            let mut tmp = CMatrix::zeros(self.jump_left.nrows(), rho.ncols());
            self.jump_left.left_mul_acc(C64::new(1.0, 0.0), rho, &mut tmp);
            self.jump_right.right_mul_adjoint_acc(C64::new(self.kappa, 0.0), &tmp, &mut out);
        }
        out
    }

    /// Upper bound on the generator's rate scale over [0, T], sampled at a
    /// few times (row-sum norms of both Hamiltonians plus the jump term).
    pub fn rate_bound(&self, duration: f64) -> f64 {
        let norm = |op: &SparseOp| (0..op.nrows()).map(|i| op.row(i).iter().map(|(_, v)| v.norm()).sum::<f64>()).fold(0.0, f64::max);
        let samples = 17;
        let h = (0..samples)
            .map(|k| {
                let t = duration * k as f64 / (samples - 1) as f64;
                norm(&self.left.at(t)).max(norm(&self.right.at(t)))
            })
            .fold(0.0, f64::max);
        2.0 * h + self.kappa * norm(&self.jump_left.adjoint().mul(&self.jump_left))
    }
}

/// Abort threshold on the weight of the highest Fock level.
#[derive(Clone, Debug)]
pub struct CutoffGuard {
    /// Row indices belonging to the highest Fock level.
    pub top_rows: Vec<usize>,
    /// Column indices belonging to the highest Fock level.
    pub top_cols: Vec<usize>,
    pub threshold: f64,
    /// The evolved operator is a density operator (use populations).
    pub density: bool,
}

impl CutoffGuard {
    pub const DEFAULT_THRESHOLD: f64 = 1e-6;

    /// Guard for an operator on `dim_l × dim_r` with `qdim_*` qubit states per Fock level.
    pub fn for_blocks(dim_l: usize, qdim_l: usize, dim_r: usize, qdim_r: usize) -> Self {
        Self {
            top_rows: (dim_l - qdim_l..dim_l).collect(),
            top_cols: (dim_r - qdim_r..dim_r).collect(),
            threshold: Self::DEFAULT_THRESHOLD,
            density: false,
        }
    }

    pub fn for_density(dim: usize, qdim: usize) -> Self {
        Self {
            density: true,
            ..Self::for_blocks(dim, qdim, dim, qdim)
        }
    }

    /// Weight of the top level. For square operators this is the population;
    /// for coherences the larger of the squared row/column weights.
    pub fn weight(&self, rho: &CMatrix) -> f64 {
        if self.density {
            return self.top_rows.iter().map(|&i| rho[(i, i)].re).sum::<f64>().abs();
        }
        let rows: f64 = self.top_rows.iter().map(|&i| rho.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>()).sum();
        let cols: f64 = self.top_cols.iter().map(|&j| rho.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>()).sum();
        rows.max(cols)
    }
}

#[derive(Clone, Debug, Default)]
pub struct EvolveOptions {
    pub steps: StepOptions,
    pub cutoff: Option<CutoffGuard>,
    /// Number of evenly spaced snapshots kept from the final resolution.
    pub checkpoints: usize,
}

#[derive(Clone, Debug)]
pub struct Evolution {
    pub state: CMatrix,
    pub steps: usize,
    pub checkpoints: Vec<(f64, CMatrix)>,
    pub max_top_weight: f64,
}

/// Integrates from 0 to `duration` with step doubling.
pub fn evolve(generator: &Liouvillian, rho0: &CMatrix, duration: f64, opts: &EvolveOptions) -> Result<Evolution> {
    let rhs = |t: f64, rho: &CMatrix| generator.apply(t, rho);
    let mut checkpoints: Vec<(f64, CMatrix)> = Vec::new();
    let mut max_top = 0.0f64;
    let mut last_k = 0usize;
    let spacing = duration / opts.checkpoints.max(1) as f64;
    let observe = |k: usize, t: f64, rho: &CMatrix| -> Result<()> {
        if k <= last_k {
            // a new, finer resolution started; keep only its snapshots
            checkpoints.clear();
            max_top = 0.0;
        }
        last_k = k;
        if let Some(guard) = &opts.cutoff {
            let w = guard.weight(rho);
            max_top = max_top.max(w);
            if w > guard.threshold {
                return Err(Error::FockCutoff { time: t, weight: w });
            }
        }
        if opts.checkpoints > 0 && t >= (checkpoints.len() + 1) as f64 * spacing - 1e-9 * duration {
            checkpoints.push((t, rho.clone()));
        }
        Ok(())
    };
    // Start inside the RK4 stability region so coarse passes cannot blow up
    // and trip the cutoff guard.
    let mut steps = opts.steps;
    steps.initial_steps = steps.initial_steps.max((duration * generator.rate_bound(duration)).ceil() as usize);
    let out = rk4_converged(&rhs, rho0, 0.0, duration, steps, observe)?;
    Ok(Evolution {
        state: out.state,
        steps: out.steps,
        checkpoints,
        max_top_weight: max_top,
    })
}

/// Square-space master equation for a density operator.
pub fn evolve_master_equation(
    hamiltonian: &DrivenOperator,
    jump: &SparseOp,
    kappa: f64,
    rho0: &DensityOperator,
    duration: f64,
    opts: &EvolveOptions,
) -> Result<(DensityOperator, Evolution)> {
    let generator = Liouvillian::square(hamiltonian.clone(), jump.clone(), kappa);
    let evo = evolve(&generator, &rho0.matrix, duration, opts)?;
    Ok((
        DensityOperator {
            matrix: evo.state.clone(),
            frame: rho0.frame,
        },
        evo,
    ))
}
