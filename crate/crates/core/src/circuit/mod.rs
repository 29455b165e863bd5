//! Equivalent circuit of the reader / relay / tag chain.
//!
//! The reader is driven by a fixed RMS current and series-tuned; relays are
//! series RLC loops; the tag coil feeds a parallel `C_o ∥ R_o` tank. Only
//! neighbouring coils couple unless the config asks for all pairs, which only
//! the mesh solver honours.
//!
//! Two solvers work on the same [`Network`]:
//! * [`solve_network`] walks the ladder: reflected impedances from the tag
//!   back to the reader, then currents forward. [`SolverMode::PaperLiteral`]
//!   evaluates the real-valued shortcut recursion term by term; [`SolverMode::CorrectedPhasor`]
//!   uses the complex phasor form.
//! * [`mesh_solve_network`] assembles the full complex mesh-impedance matrix
//!   and solves it directly.

mod ladder;
mod mesh;
mod network;
mod sweep;

pub use ladder::{reflected_impedances, solve_chain, solve_network};
pub use mesh::{mesh_solve, mesh_solve_network};
pub use network::{mutual_inductances, Network, SeriesBranch, TagBranch, FILAMENT_SEGMENTS};
pub use sweep::{
    frequency_sweep, log_space, matched_tag_load, power_by_relay_count, wake_cutoff,
};

use crate::em::EmError;
use crate::geometry::Violation;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolverMode {
    /// Real-valued recursion: `Z_n = M R_o / L_o²`, `I_k = ω² M I_{k-1} / (R_k + Z_k)`,
    /// `I_o = M I_n / L_o`, `P_in = (Z_in + ω L_in) I_in²`. Not energy
    /// conserving; kept for comparison.
    PaperLiteral,
    #[default]
    CorrectedPhasor,
}

impl std::str::FromStr for SolverMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "paper_literal" | "literal" => Ok(SolverMode::PaperLiteral),
            "corrected_phasor" | "corrected" => Ok(SolverMode::CorrectedPhasor),
            other => Err(format!("unknown solver mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    /// RMS magnitudes `[I_in, I_1, …, I_n, I_o]`; `I_o` is the load current.
    pub currents: Vec<f64>,
    /// RMS current in the tag coil itself, ahead of the `C_o ∥ R_o` split.
    pub tag_coil_current: f64,
    pub input_power: f64,
    pub output_power: f64,
    pub efficiency: f64,
    /// Impedance reflected into the reader by the rest of the chain.
    pub input_impedance: Complex64,
}

impl SolveResult {
    pub fn output_current(&self) -> f64 {
        *self.currents.last().expect("currents always hold reader and tag")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CircuitError {
    #[error("invalid chain: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("coupling {index}: {source}")]
    Coupling { index: usize, source: EmError },
    #[error("self-inductance of {coil}: {source}")]
    Inductance { coil: String, source: EmError },
    #[error("expected {expected} mutual inductances, got {got}")]
    CouplingCount { expected: usize, got: usize },
    #[error("division by zero at {0}")]
    DivisionByZero(String),
    #[error("singular mesh matrix")]
    SingularMatrix,
    #[error("nonphysical result: efficiency {0} > 1")]
    Nonphysical(f64),
    #[error("{0}")]
    BadArgument(String),
}
