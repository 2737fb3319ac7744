//! Arbitrary symmetric phase gates from sequences of adiabatic pulses,
//! chosen by a linear program over a grid of detunings.

pub mod baseline;
pub mod lp;
pub mod simplex;
pub mod targets;

pub use baseline::{cnz_cz_count, phase_rotation_cz_count, BaselineKind};
pub use lp::{build_synthesis_lp, plan_channel, synthesize, GridSpec, ObjectiveMode, PlannedPulse, SynthesisPlan, SynthesisProblem};
pub use simplex::{simplex_solve, LpSolution};
pub use targets::{target_cnz, target_phase_rotation};
