//! Diagonal qubit channels E(|q⟩⟨q'|) = e^{iφ_nm} |q⟩⟨q'| and their
//! extraction from joint-space simulations.

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::linalg::{CMatrix, C64, I};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DiagonalChannel {
    pub n_qubits: usize,
    /// φ_nm for excitation numbers n, m = 0..=N.
    pub phi: DMatrix<C64>,
}

impl DiagonalChannel {
    pub fn new(n_qubits: usize, phi: DMatrix<C64>) -> Result<Self> {
        if phi.nrows() != n_qubits + 1 || phi.ncols() != n_qubits + 1 {
            return Err(Error::ShapeMismatch(format!(
                "channel for N={n_qubits} needs a {0}x{0} matrix, got {1}x{2}",
                n_qubits + 1,
                phi.nrows(),
                phi.ncols()
            )));
        }
        Ok(Self { n_qubits, phi })
    }

    pub fn from_fn(n_qubits: usize, f: impl Fn(usize, usize) -> C64) -> Self {
        Self {
            n_qubits,
            phi: DMatrix::from_fn(n_qubits + 1, n_qubits + 1, f),
        }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::from_fn(n_qubits, |_, _| C64::default())
    }

    /// Unitary channel with phases φ_n: φ_nm = φ_n − φ_m.
    pub fn unitary(phases: &[f64]) -> Self {
        Self::from_fn(phases.len() - 1, |n, m| C64::new(phases[n] - phases[m], 0.0))
    }

    /// Channel from real phases φ_n and real damping coefficients c_nm:
    /// e^{iφ_nm} = c_nm e^{i(φ_n − φ_m)}.
    pub fn from_coefficients(phases: &[f64], c: &DMatrix<f64>) -> Result<Self> {
        let n = phases.len() - 1;
        if c.nrows() != n + 1 || c.ncols() != n + 1 {
            return Err(Error::ShapeMismatch("coefficient matrix does not match phases".into()));
        }
        if c.iter().any(|x| !(*x > 0.0)) {
            return Err(invalid("damping coefficients must be positive to form a phase matrix"));
        }
        Ok(Self::from_fn(n, |i, j| C64::new(phases[i] - phases[j], -c[(i, j)].ln())))
    }

    /// Matrix of e^{iφ_nm}.
    pub fn action(&self) -> DMatrix<C64> {
        self.phi.map(|p| (I * p).exp())
    }

    pub fn element(&self, n: usize, m: usize) -> C64 {
        (I * self.phi[(n, m)]).exp()
    }

    /// Sequential application: e^{iφ} multiply elementwise, so phases add.
    pub fn then(&self, other: &DiagonalChannel) -> Result<Self> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::ShapeMismatch("composing channels on different N".into()));
        }
        Ok(Self {
            n_qubits: self.n_qubits,
            phi: &self.phi + &other.phi,
        })
    }

    /// Largest violation of φ_nm = −conj(φ_mn), Im φ_nn ≥ 0 and Re φ_nn = 0.
    pub fn invariant_violation(&self) -> f64 {
        let n = self.n_qubits + 1;
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                worst = worst.max((self.phi[(i, j)] + self.phi[(j, i)].conj()).norm());
            }
            worst = worst.max(self.phi[(i, i)].re.abs()).max((-self.phi[(i, i)].im).max(0.0));
        }
        worst
    }
}

/// Final joint operator for the pair of initial states |0, q⟩⟨0, q'|.
#[derive(Clone, Debug)]
pub struct SectorOutcome {
    pub state: CMatrix,
    /// Number of qubit basis states per Fock level on each side.
    pub qubit_dims: (usize, usize),
    /// Qubit-factor indices of q and q'.
    pub qubit_indices: (usize, usize),
}

impl SectorOutcome {
    /// Partial trace over the cavity.
    pub fn reduced(&self) -> CMatrix {
        let (ql, qr) = self.qubit_dims;
        let levels = self.state.nrows() / ql;
        debug_assert_eq!(levels, self.state.ncols() / qr);
        CMatrix::from_fn(ql, qr, |i, j| (0..levels).map(|p| self.state[(p * ql + i, p * qr + j)]).sum())
    }
}

#[derive(Clone, Debug)]
pub struct ChannelExtraction {
    pub channel: DiagonalChannel,
    /// Largest Frobenius norm of reduced-matrix elements other than ⟨q|·|q'⟩.
    pub leakage: f64,
}

pub const DEFAULT_LEAKAGE_THRESHOLD: f64 = 1e-4;

/// φ from a traced matrix element e^{iφ}.
pub fn phase_of(element: C64) -> C64 {
    C64::new(element.arg(), -element.norm().ln())
}

/// Builds the channel by simulating one representative pair per (n, m) with
/// n ≤ m and filling the rest by φ_mn = −conj(φ_nm).
pub fn channel_from_simulation<F>(n_qubits: usize, simulate: F, leakage_threshold: f64) -> Result<ChannelExtraction>
where
    F: Fn(usize, usize) -> Result<SectorOutcome> + Sync,
{
    use rayon::prelude::*;
    let pairs: Vec<(usize, usize)> = (0..=n_qubits).flat_map(|n| (n..=n_qubits).map(move |m| (n, m))).collect();
    let results: Vec<((usize, usize), Result<(C64, f64)>)> = pairs
        .par_iter()
        .map(|&(n, m)| {
            let r = simulate(n, m).map(|out| {
                let red = out.reduced();
                let (i, j) = out.qubit_indices;
                let el = red[(i, j)];
                let leak = red
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i + j * red.nrows())
                    .map(|(_, z)| z.norm_sqr())
                    .sum::<f64>()
                    .sqrt();
                (el, leak)
            });
            ((n, m), r)
        })
        .collect();

    let mut phi = DMatrix::from_element(n_qubits + 1, n_qubits + 1, C64::default());
    let mut leakage = 0.0f64;
    for ((n, m), r) in results {
        let (el, leak) = r?;
        leakage = leakage.max(leak);
        let p = phase_of(el);
        phi[(n, m)] = p;
        phi[(m, n)] = -p.conj();
    }
    if leakage > leakage_threshold {
        return Err(Error::Leakage {
            leakage,
            threshold: leakage_threshold,
        });
    }
    Ok(ChannelExtraction {
        channel: DiagonalChannel { n_qubits, phi },
        leakage,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_outcomes_give_zero_phases() {
        let ex = channel_from_simulation(
            2,
            |_, _| {
                let mut s = CMatrix::zeros(3, 3);
                s[(0, 0)] = C64::new(1.0, 0.0);
                Ok(SectorOutcome {
                    state: s,
                    qubit_dims: (1, 1),
                    qubit_indices: (0, 0),
                })
            },
            1e-4,
        )
        .unwrap();
        assert!(ex.channel.phi.iter().all(|p| p.norm() < 1e-15));
        assert_eq!(ex.leakage, 0.0);
    }

    #[test]
    fn leakage_is_flagged() {
        let r = channel_from_simulation(
            1,
            |_, _| {
                let mut s = CMatrix::zeros(2, 2);
                s[(0, 0)] = C64::new(0.9, 0.0);
                s[(1, 0)] = C64::new(0.1, 0.0);
                Ok(SectorOutcome {
                    state: s,
                    qubit_dims: (2, 2),
                    qubit_indices: (0, 0),
                })
            },
            1e-4,
        );
        assert!(matches!(r, Err(Error::Leakage { .. })));
    }

    #[test]
    fn coefficient_form_round_trip() {
        let c = DMatrix::from_fn(3, 3, |i, j| 1.0 - 0.01 * (i + j) as f64);
        let ch = DiagonalChannel::from_coefficients(&[0.1, -0.3, 2.0], &c).unwrap();
        assert!((ch.element(1, 2).norm() - c[(1, 2)]).abs() < 1e-14);
        assert!(ch.invariant_violation() < 1e-14);
    }
}
