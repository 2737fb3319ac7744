pub mod channel;
pub mod coherent;
pub mod density;
pub mod fidelity;
pub mod hamiltonian;
pub mod master;
pub mod params;
pub mod pulse;
pub mod simulate;
pub mod space;

pub use channel::{channel_from_simulation, ChannelExtraction, DiagonalChannel, SectorOutcome};
pub use density::{DensityOperator, Frame};
pub use fidelity::{average_gate_fidelity, min_fidelity, ComparisonMode, MinFidelityOptions, PhaseTarget};
pub use params::SystemParams;
pub use pulse::{FlatTop, Pulse, Trajectory};
