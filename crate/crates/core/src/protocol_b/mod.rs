//! Adiabatic phase gate U_B = exp[−iI/(δ − n̂g²/Δ)].

pub mod design;
pub mod inhomogeneity;
pub mod losses;
pub mod phases;
pub mod simulate;

pub use design::{cz_design_b, flat_top_pulse, AdiabaticPulseConfig, CzDesignB};
pub use inhomogeneity::{inhomogeneity_bound_b, monte_carlo_inhomogeneity_b};
pub use losses::{loss_coefficients, predict_fidelity_b, LossCoefficients};
pub use phases::{perturbative_phase, WorkingPoint};
pub use simulate::{simulate_cz_b, simulate_protocol_b};
