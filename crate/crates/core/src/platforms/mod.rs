//! Physical platforms: preset parameters, cavity geometry and error budgets.

pub mod estimate;
pub mod geometry;
pub mod presets;

pub use estimate::{estimate_gate, optimal_duration, EstimateRequest, GateEstimate};
pub use geometry::{cavity_from_geometry, CavityGeometry, CavityRates};
pub use presets::{preset, preset_names, presets, PlatformPreset};
