use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Frame {
    Lab,
    Displaced,
    Effective,
}

/// Square joint-space operator with its frame tag.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    pub matrix: CMatrix,
    pub frame: Frame,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StateTolerances {
    pub hermiticity: f64,
    pub trace_excess: f64,
    pub positivity: f64,
}

impl Default for StateTolerances {
    fn default() -> Self {
        Self {
            hermiticity: 1e-10,
            trace_excess: 1e-9,
            positivity: 1e-8,
        }
    }
}

impl DensityOperator {
    pub fn pure(state: &[C64], frame: Frame) -> Self {
        let v = CMatrix::from_column_slice(state.len(), 1, state);
        Self {
            matrix: &v * v.adjoint(),
            frame,
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn hermiticity_error(&self) -> f64 {
        (&self.matrix - self.matrix.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        hermitian_eigenvalues(&self.matrix).first().copied().unwrap_or(0.0)
    }

    pub fn validate(&self, tol: StateTolerances) -> Result<()> {
        let h = self.hermiticity_error();
        if h > tol.hermiticity {
            return Err(invalid(format!("density operator not Hermitian (deviation {h:e})")));
        }
        let tr = self.trace();
        if tr > 1.0 + tol.trace_excess {
            return Err(invalid(format!("density operator trace {tr} exceeds 1")));
        }
        let ev = self.min_eigenvalue();
        if ev < -tol.positivity {
            return Err(invalid(format!("density operator has negative eigenvalue {ev:e}")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pure_state_is_valid() {
        let s = [C64::new(0.6, 0.0), C64::new(0.0, 0.8)];
        let rho = DensityOperator::pure(&s, Frame::Lab);
        assert!((rho.trace() - 1.0).abs() < 1e-15);
        rho.validate(StateTolerances::default()).unwrap();
        let mut bad = rho.clone();
        bad.matrix[(0, 1)] += C64::new(0.1, 0.0);
        assert!(bad.validate(StateTolerances::default()).is_err());
    }
}
