//! Neumann double line integral over straight filaments.
//!
//! Every turn is split into `segments_per_side` straight pieces per side. For
//! a segment pair the inner integral `∫ dl / |r|` along one segment is done in
//! closed form, `ln((R₁ + R₂ + L) / (R₁ + R₂ − L))`, and the outer one with
//! six-point Gauss–Legendre on each segment.

use super::{EmError, MU_0};
use crate::geometry::{CoilSpec, Placement};
use nalgebra::{Isometry3, Point3, Vector3};
use rayon::prelude::*;

const GL_NODES: [f64; 6] = [
    -0.932_469_514_203_152_1,
    -0.661_209_386_466_264_5,
    -0.238_619_186_083_196_9,
    0.238_619_186_083_196_9,
    0.661_209_386_466_264_5,
    0.932_469_514_203_152_1,
];
const GL_WEIGHTS: [f64; 6] = [
    0.171_324_492_379_170_3,
    0.360_761_573_048_138_6,
    0.467_913_934_572_691_0,
    0.467_913_934_572_691_0,
    0.360_761_573_048_138_6,
    0.171_324_492_379_170_3,
];

pub const MIN_SEGMENTS_PER_SIDE: usize = 8;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Segment {
    pub start: Point3<f64>,
    pub end: Point3<f64>,
    /// `(turn, side)` the segment belongs to.
    pub side: (u32, u8),
}

impl Segment {
    fn vector(&self) -> Vector3<f64> {
        self.end - self.start
    }
}

/// The four sides of every turn, counter-clockwise about the coil normal.
pub(crate) fn coil_sides(coil: &CoilSpec, frame: &Isometry3<f64>) -> Vec<Segment> {
    let mut sides = Vec::with_capacity(4 * coil.turns as usize);
    for turn in 0..coil.turns {
        let (a, b) = coil.turn_sides(turn);
        let (ha, hb) = (0.5 * a, 0.5 * b);
        let corners = [(ha, -hb), (ha, hb), (-ha, hb), (-ha, -hb)];
        for s in 0..4 {
            let (x0, y0) = corners[s];
            let (x1, y1) = corners[(s + 1) % 4];
            sides.push(Segment {
                start: frame.transform_point(&Point3::new(x0, y0, 0.0)),
                end: frame.transform_point(&Point3::new(x1, y1, 0.0)),
                side: (turn, s as u8),
            });
        }
    }
    sides
}

pub(crate) fn subdivide(sides: &[Segment], pieces: usize) -> Vec<Segment> {
    let mut out = Vec::with_capacity(sides.len() * pieces);
    for side in sides {
        let step = side.vector() / pieces as f64;
        for i in 0..pieces {
            out.push(Segment {
                start: side.start + step * i as f64,
                end: side.start + step * (i + 1) as f64,
                side: side.side,
            });
        }
    }
    out
}

/// `∫ dl / |p − x|` along `seg`.
fn inverse_distance_line(p: &Point3<f64>, seg: &Segment) -> f64 {
    let r1 = (p - seg.start).norm();
    let r2 = (p - seg.end).norm();
    let len = seg.vector().norm();
    let sum = r1 + r2;
    ((sum + len) / (sum - len)).ln()
}

/// `∬ dl₁·dl₂ / |r₁ − r₂|` for two straight segments (without the μ₀/4π factor).
pub(crate) fn segment_pair(a: &Segment, b: &Segment) -> f64 {
    let va = a.vector();
    let vb = b.vector();
    let la = va.norm();
    let lb = vb.norm();
    let cos = va.dot(&vb) / (la * lb);
    if cos.abs() < 1e-14 {
        return 0.0;
    }
    let mid = a.start + 0.5 * va;
    let mut outer = 0.0;
    for (x, w) in GL_NODES.iter().zip(GL_WEIGHTS) {
        let p = mid + va * (0.5 * x);
        outer += w * inverse_distance_line(&p, b);
    }
    cos * outer * 0.5 * la
}

/// Closest approach between two finite segments.
pub(crate) fn segment_distance(a: &Segment, b: &Segment) -> f64 {
    let d1 = a.vector();
    let d2 = b.vector();
    let r = a.start - b.start;
    let aa = d1.dot(&d1);
    let ee = d2.dot(&d2);
    let f = d2.dot(&r);
    let c = d1.dot(&r);
    let bb = d1.dot(&d2);
    let denom = aa * ee - bb * bb;
    let mut s = if denom > 1e-30 * aa * ee {
        ((bb * f - c * ee) / denom).clamp(0.0, 1.0)
    } else {
        0.0
    };
    let mut t = (bb * s + f) / ee;
    if t < 0.0 {
        t = 0.0;
        s = (-c / aa).clamp(0.0, 1.0);
    } else if t > 1.0 {
        t = 1.0;
        s = ((bb - c) / aa).clamp(0.0, 1.0);
    }
    ((a.start + d1 * s) - (b.start + d2 * t)).norm()
}

fn check_clearance(
    coil1: &CoilSpec,
    sides1: &[Segment],
    coil2: &CoilSpec,
    sides2: &[Segment],
) -> Result<(), EmError> {
    let clearance = coil1.wire_radius + coil2.wire_radius;
    let closest = sides1
        .iter()
        .flat_map(|a| sides2.iter().map(move |b| segment_distance(a, b)))
        .fold(f64::INFINITY, f64::min);
    if closest < clearance {
        return Err(EmError::Intersection {
            distance: closest,
            clearance,
        });
    }
    Ok(())
}

/// Neumann sum between two segment sets; partial sums are reduced in
/// segment order so the result does not depend on thread scheduling.
pub(crate) fn neumann_sum(segs1: &[Segment], segs2: &[Segment]) -> f64 {
    let partial: Vec<f64> = segs1
        .par_iter()
        .map(|a| segs2.iter().map(|b| segment_pair(a, b)).sum::<f64>())
        .collect();
    MU_0 / (4.0 * std::f64::consts::PI) * partial.iter().sum::<f64>()
}

/// Mutual inductance between two coils placed anywhere, given their world frames.
///
/// Signed by winding sense (both coils wound counter-clockwise about their normals).
pub fn mutual_inductance_filament_frames(
    coil1: &CoilSpec,
    frame1: &Isometry3<f64>,
    coil2: &CoilSpec,
    frame2: &Isometry3<f64>,
    segments_per_side: usize,
) -> Result<f64, EmError> {
    if segments_per_side < MIN_SEGMENTS_PER_SIDE {
        return Err(EmError::Invalid(format!(
            "segments_per_side must be at least {MIN_SEGMENTS_PER_SIDE}, got {segments_per_side}"
        )));
    }
    let mut v = Vec::new();
    coil1.check("coil1", &mut v);
    coil2.check("coil2", &mut v);
    if let Some(first) = v.first() {
        return Err(EmError::Invalid(first.to_string()));
    }
    let sides1 = coil_sides(coil1, frame1);
    let sides2 = coil_sides(coil2, frame2);
    check_clearance(coil1, &sides1, coil2, &sides2)?;
    Ok(neumann_sum(
        &subdivide(&sides1, segments_per_side),
        &subdivide(&sides2, segments_per_side),
    ))
}

/// Mutual inductance magnitude of `coil2` placed at `pose` relative to `coil1`.
pub fn mutual_inductance_filament(
    coil1: &CoilSpec,
    coil2: &CoilSpec,
    pose: &Placement,
    segments_per_side: usize,
) -> Result<f64, EmError> {
    let mut v = Vec::new();
    pose.check("pose", &mut v);
    if let Some(first) = v.first() {
        return Err(EmError::Invalid(first.to_string()));
    }
    mutual_inductance_filament_frames(
        coil1,
        &Isometry3::identity(),
        coil2,
        &pose.isometry(),
        segments_per_side,
    )
    .map(f64::abs)
}
