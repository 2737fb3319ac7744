//! Hilbert spaces: cavity ⊗ qubits, with the cavity index as the major index.
//!
//! Three variants share the [`Space`] interface: the full product space of N
//! three-level (or two-level) qubits, the permutation-symmetric sector with a
//! fixed number of excitations, and the effective sector in which |e⟩ has been
//! eliminated and the qubits only enter through n̂ = n.

use crate::error::{Error, Result};
use crate::linalg::{SparseOp, C64};

pub const DEFAULT_DIMENSION_CAP: usize = 4096;

/// Local qubit levels.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    Zero = 0,
    One = 1,
    Excited = 2,
}

pub trait Space: Send + Sync {
    /// Dimension of the qubit factor.
    fn qubit_dim(&self) -> usize;
    fn fock_cutoff(&self) -> usize;

    fn dim(&self) -> usize {
        (self.fock_cutoff() + 1) * self.qubit_dim()
    }

    /// Diagonal of n̂ (number of qubits in |1⟩) on the qubit factor.
    fn one_counts(&self) -> Vec<f64>;
    /// Diagonal of n̂_e on the qubit factor.
    fn excited_counts(&self) -> Vec<f64>;
    /// Collective lowering operator S⁻ = Σ_j |1⟩⟨e|_j on the qubit factor.
    fn qubit_lowering(&self) -> SparseOp;

    fn photon_number_of(&self, index: usize) -> usize {
        index / self.qubit_dim()
    }

    /// Cavity annihilation operator on the full space.
    fn annihilation(&self) -> SparseOp {
        destroy(self.fock_cutoff()).kron(&SparseOp::identity(self.qubit_dim()))
    }

    fn photon_number(&self) -> SparseOp {
        let a = self.annihilation();
        a.adjoint().mul(&a)
    }

    fn one_number(&self) -> SparseOp {
        qubit_diag(self, &self.one_counts())
    }

    fn excited_number(&self) -> SparseOp {
        qubit_diag(self, &self.excited_counts())
    }

    fn lowering(&self) -> SparseOp {
        SparseOp::identity(self.fock_cutoff() + 1).kron(&self.qubit_lowering())
    }

    fn basis_index(&self, photons: usize, qubit_index: usize) -> usize {
        photons * self.qubit_dim() + qubit_index
    }
}

fn qubit_diag<S: Space + ?Sized>(space: &S, diag: &[f64]) -> SparseOp {
    let d: Vec<C64> = diag.iter().map(|x| C64::new(*x, 0.0)).collect();
    SparseOp::identity(space.fock_cutoff() + 1).kron(&SparseOp::diagonal(&d))
}

/// Truncated cavity annihilation operator on Fock levels 0..=n_max.
pub fn destroy(n_max: usize) -> SparseOp {
    let mut a = SparseOp::zeros(n_max + 1, n_max + 1);
    for k in 1..=n_max {
        a.add_entry(k - 1, k, C64::new((k as f64).sqrt(), 0.0));
    }
    a
}

/// Cavity ⊗ N qubits with `levels` local levels (3, or 2 when |e⟩ is dropped).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FullSpace {
    pub n_qubits: usize,
    pub fock_cutoff: usize,
    pub levels: usize,
}

impl FullSpace {
    pub fn new(n_qubits: usize, fock_cutoff: usize) -> Result<Self> {
        Self::with_cap(n_qubits, fock_cutoff, 3, DEFAULT_DIMENSION_CAP)
    }

    pub fn with_cap(n_qubits: usize, fock_cutoff: usize, levels: usize, cap: usize) -> Result<Self> {
        assert!(levels == 2 || levels == 3, "qubits carry 2 or 3 levels");
        let dim = (levels as u32)
            .checked_pow(n_qubits as u32)
            .and_then(|q| (q as usize).checked_mul(fock_cutoff + 1))
            .unwrap_or(usize::MAX);
        if dim > cap {
            return Err(Error::DimensionOverflow { dim, cap });
        }
        Ok(Self {
            n_qubits,
            fock_cutoff,
            levels,
        })
    }

    /// Index of a qubit configuration; qubit 0 is the most significant digit.
    pub fn qubit_index(&self, config: &[Level]) -> usize {
        assert_eq!(config.len(), self.n_qubits);
        config.iter().fold(0, |acc, l| acc * self.levels + *l as usize)
    }

    pub fn qubit_config(&self, mut index: usize) -> Vec<Level> {
        let mut out = vec![Level::Zero; self.n_qubits];
        for j in (0..self.n_qubits).rev() {
            out[j] = match index % self.levels {
                0 => Level::Zero,
                1 => Level::One,
                _ => Level::Excited,
            };
            index /= self.levels;
        }
        out
    }

    /// Computational basis state with the bits of `q` (qubit 0 = most significant).
    pub fn computational_index(&self, bits: &[bool]) -> usize {
        let config: Vec<Level> = bits.iter().map(|b| if *b { Level::One } else { Level::Zero }).collect();
        self.qubit_index(&config)
    }

    /// Single-qubit lowering |1⟩⟨e| on qubit `j` (qubit factor only).
    pub fn local_lowering(&self, j: usize) -> SparseOp {
        let qdim = self.qubit_dim();
        let mut op = SparseOp::zeros(qdim, qdim);
        if self.levels == 3 {
            for idx in 0..qdim {
                let mut cfg = self.qubit_config(idx);
                if cfg[j] == Level::Excited {
                    cfg[j] = Level::One;
                    op.add_entry(self.qubit_index(&cfg), idx, C64::new(1.0, 0.0));
                }
            }
        }
        op
    }

    /// S⁻ with per-qubit couplings g_j / g.
    pub fn weighted_lowering(&self, weights: &[f64]) -> SparseOp {
        assert_eq!(weights.len(), self.n_qubits);
        let qdim = self.qubit_dim();
        weights
            .iter()
            .enumerate()
            .fold(SparseOp::zeros(qdim, qdim), |acc, (j, w)| acc.add(&self.local_lowering(j).scale(C64::new(*w, 0.0))))
    }
}

impl Space for FullSpace {
    fn qubit_dim(&self) -> usize {
        self.levels.pow(self.n_qubits as u32)
    }

    fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    fn one_counts(&self) -> Vec<f64> {
        (0..self.qubit_dim())
            .map(|i| self.qubit_config(i).iter().filter(|l| **l == Level::One).count() as f64)
            .collect()
    }

    fn excited_counts(&self) -> Vec<f64> {
        (0..self.qubit_dim())
            .map(|i| self.qubit_config(i).iter().filter(|l| **l == Level::Excited).count() as f64)
            .collect()
    }

    fn qubit_lowering(&self) -> SparseOp {
        self.weighted_lowering(&vec![1.0; self.n_qubits])
    }
}

/// Permutation-symmetric sector reached from a computational state with `n`
/// qubits in |1⟩. Basis index k counts qubits promoted to |e⟩ (0..=n).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricSector {
    pub excitations: usize,
    pub fock_cutoff: usize,
}

impl SymmetricSector {
    pub fn new(excitations: usize, fock_cutoff: usize) -> Self {
        Self {
            excitations,
            fock_cutoff,
        }
    }

    /// Qubit index of the computational state (no |e⟩).
    pub fn computational_index(&self) -> usize {
        0
    }
}

impl Space for SymmetricSector {
    fn qubit_dim(&self) -> usize {
        self.excitations + 1
    }

    fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    fn one_counts(&self) -> Vec<f64> {
        (0..=self.excitations).map(|k| (self.excitations - k) as f64).collect()
    }

    fn excited_counts(&self) -> Vec<f64> {
        (0..=self.excitations).map(|k| k as f64).collect()
    }

    fn qubit_lowering(&self) -> SparseOp {
        let n = self.excitations;
        let mut op = SparseOp::zeros(n + 1, n + 1);
        for k in 1..=n {
            op.add_entry(k - 1, k, C64::new(((k * (n - k + 1)) as f64).sqrt(), 0.0));
        }
        op
    }
}

/// Cavity only, with the qubits fixed in a computational state with `n`
/// excitations; the setting of the |e⟩-eliminated effective Hamiltonian.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EffectiveSector {
    pub excitations: usize,
    pub fock_cutoff: usize,
}

impl Space for EffectiveSector {
    fn qubit_dim(&self) -> usize {
        1
    }

    fn fock_cutoff(&self) -> usize {
        self.fock_cutoff
    }

    fn one_counts(&self) -> Vec<f64> {
        vec![self.excitations as f64]
    }

    fn excited_counts(&self) -> Vec<f64> {
        vec![0.0]
    }

    fn qubit_lowering(&self) -> SparseOp {
        SparseOp::zeros(1, 1)
    }
}
