//! Private-state channels, coherent-information functionals, capacity
//! bounds and amplification thresholds.
//!
//! All entropies and capacities are in bits (log base 2). Trace distances
//! are unhalved, `‖ρ − σ‖₁`.

pub mod bounds;
pub mod capacity;
pub mod channels;
pub mod error;
pub mod matcore;
pub mod random;
pub mod states;
pub mod thresholds;

pub use channels::{Channel, ChannelStructure, FlaggedChannel};
pub use error::{Error, Result};
pub use matcore::{ComplexMatrix, SubsystemDims, C64};
pub use states::{CcqState, DensityOperator, PbitSpec};
