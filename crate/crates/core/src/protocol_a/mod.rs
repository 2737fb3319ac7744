//! Geometric-phase gate U_A = exp(iθ n̂²).

pub mod analytic;
pub mod design;
pub mod effective;
pub mod ghz;
pub mod inhomogeneity;
pub mod inversion;
pub mod simulate;

pub use analytic::{asymptotic_infidelity_a, solve_channel_a, ChannelSolution, DecayModel, DetuningLimit};
pub use design::{design_pulse_a, GeometricPulseDesign};
pub use effective::{effective_drive_params, EffectiveDriveParams};
pub use inversion::{calibrate_delta, invert_to_alpha, invert_to_eta};
pub use simulate::{simulate_protocol_a, SimulationFrame};
