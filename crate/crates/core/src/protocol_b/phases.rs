//! Second-order (dispersive) phases of the weakly driven cavity and the
//! exact three-level block they approximate.

use crate::error::{invalid, Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix, C64};

/// Smallest allowed |δ − n g²/Δ| in units of g.
pub const POLE_GUARD: f64 = 1e-6;

/// Detuning pair (δ, Δ) of one adiabatic pulse.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WorkingPoint {
    pub delta: f64,
    pub big_delta: f64,
    pub g: f64,
}

impl WorkingPoint {
    pub fn new(delta: f64, big_delta: f64, g: f64) -> Result<Self> {
        if !delta.is_finite() || !big_delta.is_finite() || big_delta == 0.0 || !(g > 0.0) {
            return Err(invalid(format!("working point needs finite δ and nonzero Δ (δ={delta}, Δ={big_delta})")));
        }
        Ok(Self { delta, big_delta, g })
    }

    /// δ − n g²/Δ, checked against the pole guard.
    pub fn denominator(&self, n: usize) -> Result<f64> {
        let d = self.delta - n as f64 * self.g * self.g / self.big_delta;
        if d.abs() <= POLE_GUARD * self.g {
            return Err(Error::PoleProximity { n, distance: d.abs() });
        }
        Ok(d)
    }

    /// Checks every n ≤ N.
    pub fn check(&self, n_qubits: usize) -> Result<()> {
        (0..=n_qubits).try_for_each(|n| self.denominator(n).map(|_| ()))
    }

    /// Phase per unit pulse energy, A_n = −1/(δ − n g²/Δ).
    pub fn phase_per_energy(&self, n: usize) -> Result<f64> {
        Ok(-1.0 / self.denominator(n)?)
    }

    /// Pulse energy that makes |φ₂ − 2φ₁ + φ₀| equal to `target` (π for CZ).
    pub fn energy_for_curvature(&self, target: f64) -> Result<f64> {
        let a: Vec<f64> = (0..3).map(|n| self.phase_per_energy(n)).collect::<Result<_>>()?;
        let k = (a[2] - 2.0 * a[1] + a[0]).abs();
        if k == 0.0 {
            return Err(invalid("the working point produces no two-qubit phase"));
        }
        Ok(target / k)
    }
}

/// φ_n = −I / (δ − n g²/Δ).
///
/// The lab Hamiltonian δa†a + Δn̂_e gives these phases at detunings (−δ, −Δ);
/// at (δ, Δ) it gives their negatives, see [`hamiltonian_phase`]. Losses are
/// invariant under the joint sign flip.
pub fn perturbative_phase(n: usize, intensity: f64, delta: f64, big_delta: f64, g: f64) -> Result<f64> {
    Ok(intensity * WorkingPoint::new(delta, big_delta, g)?.phase_per_energy(n)?)
}

/// Phase −∫ε_n dt accumulated under the lab Hamiltonian at (δ, Δ):
/// +I / (δ − n g²/Δ).
pub fn hamiltonian_phase(n: usize, intensity: f64, wp: &WorkingPoint) -> Result<f64> {
    Ok(-intensity * wp.phase_per_energy(n)?)
}

/// Energy shift of |0, q⟩ to second order in η: −|η|²Δ/(Δδ − n g²).
pub fn second_order_shift(n: usize, eta: f64, wp: &WorkingPoint) -> Result<f64> {
    Ok(-eta * eta / wp.denominator(n)?)
}

/// H₀ + V restricted to {|0,q⟩, |1,q⟩, S⁺|0,q⟩/√n}.
pub fn three_level_block(n: usize, eta: C64, wp: &WorkingPoint) -> CMatrix {
    let i = C64::new(0.0, 1.0);
    let mut h = CMatrix::zeros(3, 3);
    h[(1, 1)] = C64::new(wp.delta, 0.0);
    h[(2, 2)] = C64::new(wp.big_delta, 0.0);
    let c = C64::new(wp.g * (n as f64).sqrt(), 0.0);
    h[(1, 2)] = c;
    h[(2, 1)] = c;
    h[(1, 0)] = i * eta;
    h[(0, 1)] = -i * eta.conj();
    h
}

/// Exact eigenvalue of the block that connects to 0 as η → 0 (the one
/// nearest the second-order estimate).
pub fn exact_shift(n: usize, eta: f64, wp: &WorkingPoint) -> f64 {
    let guess = second_order_shift(n, eta, wp).unwrap_or(0.0);
    hermitian_eigenvalues(&three_level_block(n, C64::new(eta, 0.0), wp))
        .into_iter()
        .min_by(|a, b| (a - guess).abs().total_cmp(&(b - guess).abs()))
        .unwrap_or(0.0)
}

/// Adiabatic phase −∫ ε(t) dt of the exact block for the drive `eta(t)` on
/// [0, T] (composite Simpson with `points` nodes).
pub fn exact_adiabatic_phase(n: usize, wp: &WorkingPoint, duration: f64, points: usize, eta: impl Fn(f64) -> f64) -> f64 {
    let points = points.max(3) | 1;
    let h = duration / (points - 1) as f64;
    let w: Vec<f64> = (0..points).map(|k| exact_shift(n, eta(k as f64 * h), wp)).collect();
    -crate::quantum::pulse::integrate_samples(&w, h)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuum_phase() {
        assert!((perturbative_phase(0, 0.7, 1.3, -2.0, 1.0).unwrap() + 0.7 / 1.3).abs() < 1e-15);
    }

    #[test]
    fn one_excitation_phase() {
        assert!((perturbative_phase(1, 1.0, 1.0, 2.0, 1.0).unwrap() + 2.0).abs() < 1e-15);
    }

    #[test]
    fn pole_is_rejected() {
        let e = perturbative_phase(2, 1.0, 1.0, 2.0, 1.0).unwrap_err();
        assert!(matches!(e, Error::PoleProximity { n: 2, .. }));
        assert!(perturbative_phase(2, 1.0, 1.0 + 1e-3, 2.0, 1.0).is_ok());
    }

    #[test]
    fn adiabatic_phase_of_block() {
        let wp = WorkingPoint::new(0.529, -2.09, 1.0).unwrap();
        let shape = crate::quantum::pulse::FlatTop::new(200.0, 40.0).unwrap();
        let eta = 0.01;
        let energy = eta * eta * crate::quantum::pulse::Trajectory::square_integral(&shape);
        for n in 0..=2 {
            let exact = exact_adiabatic_phase(n, &wp, 200.0, 4001, |t| eta * crate::quantum::pulse::Trajectory::value(&shape, t));
            let approx = hamiltonian_phase(n, energy, &wp).unwrap();
            assert!(((exact - approx) / approx).abs() < 1e-2, "n={n}");
        }
    }

    #[test]
    fn block_shift_converges_at_fourth_order() {
        let wp = WorkingPoint::new(0.529, -2.09, 1.0).unwrap();
        for n in 0..=3 {
            let err = |eta: f64| ((exact_shift(n, eta, &wp) - second_order_shift(n, eta, &wp).unwrap()) / second_order_shift(n, eta, &wp).unwrap()).abs();
            let (e1, e2) = (err(0.01), err(0.001));
            assert!(e1 < 1e-2, "n={n} e1={e1}");
            let ratio = e1 / e2;
            assert!(ratio > 80.0 && ratio < 120.0, "n={n} ratio={ratio}");
        }
    }
}
