//! Simulation, design and synthesis of cavity-mediated multi-qubit phase
//! gates: a geometric-phase protocol driven through a dispersive cavity
//! displacement (`protocol_a`) and an adiabatic dynamical-phase protocol
//! (`protocol_b`), plus linear-programming synthesis of arbitrary symmetric
//! phase gates and physical platform estimates.
//!
//! All frequencies are in units of the qubit–cavity coupling g.

pub mod error;
pub mod figures;
pub mod integrate;
pub mod linalg;
pub mod optimize;
pub mod platforms;
pub mod protocol_a;
pub mod protocol_b;
pub mod quantum;
pub mod registry;
pub mod sweep;
pub mod synthesis;

pub use error::{Error, Result};
