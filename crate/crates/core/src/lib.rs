//! Resonant relay-coil chains for NFC range extension.
//!
//! * [`geometry`] describes coils, pairwise poses and chains.
//! * [`em`] computes mutual inductance (closed form and filament oracle),
//!   self-inductance, AC resistance and resonant capacitance.
//! * [`circuit`] solves the series/parallel tuned chain for currents and power.
//! * [`search`] runs the ant-colony geometry search and its exhaustive oracle.
//! * [`scenario`] and [`cli`] read scenario files and drive the command line.

pub mod circuit;
pub mod cli;
pub mod em;
pub mod geometry;
pub mod scenario;
pub mod search;

pub use geometry::{
    validate_chain, ChainConfig, CoilShape, CoilSpec, Placement, ReaderSpec, RelaySpec, TagSpec,
    Violation,
};
