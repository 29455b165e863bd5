//! Self-inductance of a multi-turn rectangular coil by partial inductances.

use super::filament::{coil_sides, neumann_sum, subdivide};
use super::{EmError, MU_0};
use crate::geometry::CoilSpec;
use nalgebra::Isometry3;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

pub const DEFAULT_SEGMENTS_PER_SIDE: usize = 64;

/// Self partial inductance of a straight round wire with surface current.
pub fn wire_self_partial(length: f64, radius: f64) -> f64 {
    let hyp = (length * length + radius * radius).sqrt();
    MU_0 / (2.0 * std::f64::consts::PI)
        * (length * ((length + hyp) / radius).ln() - hyp + radius)
}

/// `L = Σ_sides L_self + Σ_{side pairs} M_partial`, over every side of every
/// turn. Pairs of the same side use the round-wire self term; all other pairs
/// (same turn or not) use the filament Neumann sum.
///
/// Results are memoized per coil geometry.
pub fn self_inductance(coil: &CoilSpec) -> Result<f64, EmError> {
    type Key = (bool, u64, u64, u32, u64, u64);
    static CACHE: OnceLock<Mutex<HashMap<Key, f64>>> = OnceLock::new();
    let key = (
        coil.shape == crate::geometry::CoilShape::Square,
        coil.side_a.to_bits(),
        coil.side_b.to_bits(),
        coil.turns,
        coil.pitch.to_bits(),
        coil.wire_radius.to_bits(),
    );
    let cache = CACHE.get_or_init(Default::default);
    if let Some(&l) = cache.lock().expect("cache poisoned").get(&key) {
        return Ok(l);
    }
    let l = self_inductance_with(coil, DEFAULT_SEGMENTS_PER_SIDE)?;
    cache.lock().expect("cache poisoned").insert(key, l);
    Ok(l)
}

pub fn self_inductance_with(coil: &CoilSpec, segments_per_side: usize) -> Result<f64, EmError> {
    let mut v = Vec::new();
    coil.check("coil", &mut v);
    if let Some(first) = v.first() {
        return Err(EmError::Invalid(first.to_string()));
    }
    let sides = coil_sides(coil, &Isometry3::identity());
    let pieces: Vec<_> = sides
        .iter()
        .map(|s| subdivide(std::slice::from_ref(s), segments_per_side))
        .collect();
    let mut total = 0.0;
    for (i, side) in sides.iter().enumerate() {
        total += wire_self_partial((side.end - side.start).norm(), coil.wire_radius);
        for (j, other) in pieces.iter().enumerate() {
            if i != j {
                total += neumann_sum(&pieces[i], other);
            }
        }
    }
    Ok(total)
}
