//! Electromagnetic primitives for planar rectangular coils.
//!
//! Two independent routes give the mutual inductance of a coil pair: the
//! closed-form misalignment integral in [`analytic`] (circular-filament kernel
//! with elliptic integrals) and a first-principles Neumann sum over straight
//! filaments in [`filament`]. The filament route is the reference.

pub mod analytic;
pub mod elliptic;
pub mod filament;
pub mod inductance;
pub mod quadrature;
pub mod resistance;

pub use analytic::{equivalent_radius, mutual_inductance_analytic};
pub use elliptic::{elliptic_e, elliptic_k};
pub use filament::{mutual_inductance_filament, mutual_inductance_filament_frames};
pub use inductance::{self_inductance, DEFAULT_SEGMENTS_PER_SIDE};
pub use resistance::{ac_resistance, dc_resistance, skin_depth, COPPER_RESISTIVITY};

use thiserror::Error;

/// Vacuum permeability, H/m.
pub const MU_0: f64 = 4.0e-7 * std::f64::consts::PI;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EmError {
    #[error("{function} argument {argument} outside its domain")]
    Domain { function: &'static str, argument: f64 },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("singular configuration: {0}")]
    Singular(String),
    #[error("filaments intersect: closest approach {distance:.3e} m < clearance {clearance:.3e} m")]
    Intersection { distance: f64, clearance: f64 },
}

/// Series or parallel capacitance that resonates `inductance` at `frequency`:
/// `C = 1 / ((2πf)² L)`.
pub fn match_capacitor(inductance: f64, frequency: f64) -> f64 {
    let omega = 2.0 * std::f64::consts::PI * frequency;
    1.0 / (omega * omega * inductance)
}

/// `f = 1 / (2π √(LC))`.
pub fn resonant_frequency(inductance: f64, capacitance: f64) -> f64 {
    1.0 / (2.0 * std::f64::consts::PI * (inductance * capacitance).sqrt())
}
