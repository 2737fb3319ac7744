use thiserror::Error;

/// Errors raised by the simulation, design and synthesis routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Hilbert space dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("integrator did not converge after {halvings} step halvings (last max-norm difference {difference:e})")]
    NonConvergence { halvings: u32, difference: f64 },

    #[error("Fock cutoff violated at t = {time}: top-level weight {weight:e}")]
    FockCutoff { time: f64, weight: f64 },

    #[error("pulse infeasible: {0}")]
    Infeasible(String),

    #[error("drive not invertible at t = {time}: |zeta| = {zeta} reaches g/2")]
    NotInvertible { time: f64, zeta: f64 },

    #[error("working point within {distance:e} of the pole at n = {n}")]
    PoleProximity { n: usize, distance: f64 },

    #[error("channel leakage norm {leakage:e} exceeds threshold {threshold:e}")]
    Leakage { leakage: f64, threshold: f64 },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("linear program is infeasible")]
    LpInfeasible,

    #[error("linear program is unbounded")]
    LpUnbounded,

    #[error("optimizer failed: {reason} (best value {best})")]
    Optimizer { reason: String, best: f64 },

    #[error("no root in bracket [{lo}, {hi}]")]
    NoRoot { lo: f64, hi: f64 },

    #[error("unknown {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
