//! Coil descriptions, pairwise poses and relay-chain layouts.
//!
//! All lengths are meters, angles radians, frequencies hertz. A chain is
//! `reader -> relay #1 -> ... -> relay #n -> tag`; `placements[0]` relates the
//! reader to relay #1 (or to the tag when there are no relays) and
//! `placements[n]` relates the last relay to the tag.

use nalgebra::{Isometry3, Point3, Translation3, UnitQuaternion, Vector3};
use serde::{Deserialize, Serialize};
use std::f64::consts::FRAC_PI_2;
use std::fmt;

/// NFC carrier frequency.
pub const NFC_FREQUENCY: f64 = 13.56e6;

/// AWG 18 copper wire radius.
pub const AWG18_RADIUS: f64 = 0.5115e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CoilShape {
    Square,
    Rectangle,
}

/// Planar multi-turn coil, modeled as concentric rectangular filament loops.
///
/// Turn `i` (0 = outermost) has sides `side_a - 2 i pitch` by `side_b - 2 i pitch`.
/// `side_a` runs along the coil's local x axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoilSpec {
    pub shape: CoilShape,
    pub side_a: f64,
    pub side_b: f64,
    pub turns: u32,
    pub pitch: f64,
    pub wire_radius: f64,
}

impl CoilSpec {
    pub fn square(side: f64, turns: u32, pitch: f64, wire_radius: f64) -> Self {
        CoilSpec {
            shape: CoilShape::Square,
            side_a: side,
            side_b: side,
            turns,
            pitch,
            wire_radius,
        }
    }

    pub fn rectangle(side_a: f64, side_b: f64, turns: u32, pitch: f64, wire_radius: f64) -> Self {
        CoilSpec {
            shape: CoilShape::Rectangle,
            side_a,
            side_b,
            turns,
            pitch,
            wire_radius,
        }
    }

    /// The relay coil built for the attack: 10 cm square, 3 turns, 2 mm pitch, AWG 18.
    pub fn bench_relay() -> Self {
        CoilSpec::square(0.10, 3, 0.002, AWG18_RADIUS)
    }

    /// Side lengths `(a, b)` of turn `index`, outermost first.
    pub fn turn_sides(&self, index: u32) -> (f64, f64) {
        let inset = 2.0 * self.pitch * f64::from(index);
        (self.side_a - inset, self.side_b - inset)
    }

    pub fn turn_sides_iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        (0..self.turns).map(move |i| self.turn_sides(i))
    }

    /// Total conductor length over all turns.
    pub fn wire_length(&self) -> f64 {
        self.turn_sides_iter().map(|(a, b)| 2.0 * (a + b)).sum()
    }

    /// Outer half-extent of the larger side, used for intersection screening.
    pub fn max_half_side(&self) -> f64 {
        0.5 * self.side_a.max(self.side_b)
    }

    /// Writes every invariant violation into `out`, each prefixed with `path`.
    pub fn check(&self, path: &str, out: &mut Vec<Violation>) {
        let mut push = |field: &str, msg: String| {
            out.push(Violation::new(format!("{path}.{field}"), msg));
        };
        if !(self.side_a > 0.0 && self.side_a.is_finite()) {
            push("side_a", format!("must be positive, got {}", self.side_a));
        }
        if !(self.side_b > 0.0 && self.side_b.is_finite()) {
            push("side_b", format!("must be positive, got {}", self.side_b));
        }
        if self.shape == CoilShape::Square && self.side_a != self.side_b {
            push(
                "side_b",
                format!("square coil needs side_b == side_a ({} != {})", self.side_b, self.side_a),
            );
        }
        if self.turns < 1 {
            push("turns", "must be at least 1".to_string());
        }
        if !(self.wire_radius > 0.0 && self.wire_radius.is_finite()) {
            push("wire_radius", format!("must be positive, got {}", self.wire_radius));
        }
        if self.turns > 1 && !(self.pitch >= 2.0 * self.wire_radius) {
            push(
                "pitch",
                format!(
                    "must be at least 2 * wire_radius = {} so turns do not overlap, got {}",
                    2.0 * self.wire_radius,
                    self.pitch
                ),
            );
        }
        if self.turns >= 1 && self.side_a > 0.0 && self.side_b > 0.0 {
            let (a, b) = self.turn_sides(self.turns - 1);
            if a.min(b) <= 2.0 * self.wire_radius {
                push(
                    "turns",
                    format!("innermost turn collapses ({a} x {b} m); too many turns for the side length"),
                );
            }
        }
    }
}

/// Relative pose of a coil with respect to its upstream neighbour.
///
/// The downstream coil's centre sits at `(lateral_d, 0, axial_c)` in the upstream
/// coil's frame, and its local x axis is rotated about y onto
/// `(cos θ, 0, sin θ)`, so its normal `(-sin θ, 0, cos θ)` leans back toward the
/// upstream axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Placement {
    pub lateral_d: f64,
    pub axial_c: f64,
    pub angle_theta: f64,
}

impl Placement {
    pub fn coaxial(axial_c: f64) -> Self {
        Placement {
            lateral_d: 0.0,
            axial_c,
            angle_theta: 0.0,
        }
    }

    pub fn new(lateral_d: f64, axial_c: f64, angle_theta: f64) -> Self {
        Placement {
            lateral_d,
            axial_c,
            angle_theta,
        }
    }

    /// Rigid transform taking downstream-coil coordinates to upstream-coil coordinates.
    pub fn isometry(&self) -> Isometry3<f64> {
        let rotation = UnitQuaternion::from_axis_angle(&Vector3::y_axis(), -self.angle_theta);
        Isometry3::from_parts(
            Translation3::new(self.lateral_d, 0.0, self.axial_c),
            rotation,
        )
    }

    /// Pose of the upstream coil as seen from the downstream one, when it is
    /// representable in this parameterization (only for parallel coils).
    pub fn inverse(&self) -> Option<Placement> {
        // Parallel coils: mirror symmetry maps (d, c, 0) onto itself. A tilted
        // inverse would need a negative lean, which the convention excludes.
        (self.angle_theta == 0.0).then_some(*self)
    }

    pub fn check(&self, path: &str, out: &mut Vec<Violation>) {
        if !(self.axial_c >= 0.0 && self.axial_c.is_finite()) {
            out.push(Violation::new(
                format!("{path}.axial_c"),
                format!("must be non-negative, got {}", self.axial_c),
            ));
        }
        if !(self.lateral_d >= 0.0 && self.lateral_d.is_finite()) {
            out.push(Violation::new(
                format!("{path}.lateral_d"),
                format!("must be non-negative, got {}", self.lateral_d),
            ));
        }
        if !(0.0..=FRAC_PI_2).contains(&self.angle_theta) {
            out.push(Violation::new(
                format!("{path}.angle_theta"),
                format!("must lie in [0, pi/2], got {}", self.angle_theta),
            ));
        }
        if self.axial_c == 0.0 && self.lateral_d == 0.0 {
            out.push(Violation::new(
                path.to_string(),
                "coils may not be coincident (axial_c and lateral_d both zero)".to_string(),
            ));
        }
    }
}

/// The NFC reader: antenna geometry, its inductance and the RMS drive current.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReaderSpec {
    pub coil: CoilSpec,
    pub inductance: f64,
    pub current: f64,
}

/// A passive series-tuned relay coil. Overrides replace the computed values.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RelaySpec {
    pub coil: CoilSpec,
    pub resistance: Option<f64>,
    pub inductance: Option<f64>,
    pub capacitance: Option<f64>,
}

impl RelaySpec {
    pub fn new(coil: CoilSpec) -> Self {
        RelaySpec {
            coil,
            resistance: None,
            inductance: None,
            capacitance: None,
        }
    }
}

/// The card (or measurement probe): parallel-tuned coil with a resistive load.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TagSpec {
    pub coil: CoilSpec,
    pub inductance: f64,
    pub load: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainConfig {
    pub reader: ReaderSpec,
    pub relays: Vec<RelaySpec>,
    pub tag: TagSpec,
    pub placements: Vec<Placement>,
    pub frequency: f64,
    /// Couple every coil pair (not just neighbours) in the mesh solver.
    pub all_pairs: bool,
}

impl ChainConfig {
    pub fn n_relays(&self) -> usize {
        self.relays.len()
    }

    pub fn omega(&self) -> f64 {
        2.0 * std::f64::consts::PI * self.frequency
    }

    /// Coil specs in chain order: reader, relays, tag.
    pub fn coils(&self) -> Vec<CoilSpec> {
        let mut coils = Vec::with_capacity(self.relays.len() + 2);
        coils.push(self.reader.coil);
        coils.extend(self.relays.iter().map(|r| r.coil));
        coils.push(self.tag.coil);
        coils
    }

    /// World frame of each coil (reader at the origin), composed from placements.
    pub fn coil_frames(&self) -> Vec<Isometry3<f64>> {
        let mut frames = Vec::with_capacity(self.placements.len() + 1);
        let mut current = Isometry3::identity();
        frames.push(current);
        for p in &self.placements {
            current *= p.isometry();
            frames.push(current);
        }
        frames
    }

    /// Centre of each coil in the reader frame.
    pub fn coil_centres(&self) -> Vec<Point3<f64>> {
        self.coil_frames()
            .iter()
            .map(|f| f.transform_point(&Point3::origin()))
            .collect()
    }

    /// Re-tile the chain to `n` relays.
    ///
    /// Relays beyond the base count repeat the last relay. Placements keep the
    /// reader hop and the tag hop; new relay-to-relay hops repeat the placement
    /// leading into the base chain's last relay.
    pub fn with_relay_count(&self, n: usize) -> Option<ChainConfig> {
        let n0 = self.relays.len();
        if self.placements.len() != n0 + 1 {
            return None;
        }
        let mut out = self.clone();
        if n == n0 {
            return Some(out);
        }
        let tag_hop = *self.placements.last()?;
        if n == 0 {
            out.relays.clear();
            out.placements = vec![tag_hop];
            return Some(out);
        }
        let template_relay = *self.relays.last()?;
        let hop_template = self.placements[n0 - 1];
        out.relays = (0..n)
            .map(|k| self.relays.get(k).copied().unwrap_or(template_relay))
            .collect();
        let mut placements = Vec::with_capacity(n + 1);
        for k in 0..n {
            let p = if k < n0 { self.placements[k] } else { hop_template };
            placements.push(p);
        }
        placements.push(tag_hop);
        out.placements = placements;
        Some(out)
    }
}

/// One invariant violation, addressed by a dotted field path.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub path: String,
    pub message: String,
}

impl Violation {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Violation {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

fn positive(path: &str, value: f64, out: &mut Vec<Violation>) {
    if !(value > 0.0 && value.is_finite()) {
        out.push(Violation::new(path, format!("must be positive, got {value}")));
    }
}

/// Every invariant violation in `config`; empty means the chain can be solved.
pub fn validate_chain(config: &ChainConfig) -> Vec<Violation> {
    let mut out = Vec::new();
    config.reader.coil.check("reader", &mut out);
    positive("reader.inductance", config.reader.inductance, &mut out);
    positive("reader.current", config.reader.current, &mut out);

    for (i, relay) in config.relays.iter().enumerate() {
        let path = format!("relay[{i}]");
        relay.coil.check(&path, &mut out);
        if let Some(r) = relay.resistance {
            positive(&format!("{path}.resistance"), r, &mut out);
        }
        if let Some(l) = relay.inductance {
            positive(&format!("{path}.inductance"), l, &mut out);
        }
        if let Some(c) = relay.capacitance {
            positive(&format!("{path}.capacitance"), c, &mut out);
        }
    }

    config.tag.coil.check("tag", &mut out);
    positive("tag.inductance", config.tag.inductance, &mut out);
    positive("tag.load", config.tag.load, &mut out);
    positive("drive.frequency", config.frequency, &mut out);

    if config.placements.len() != config.relays.len() + 1 {
        out.push(Violation::new(
            "placements",
            format!(
                "expected {} entries (relays + 1), got {}",
                config.relays.len() + 1,
                config.placements.len()
            ),
        ));
    }
    for (i, p) in config.placements.iter().enumerate() {
        p.check(&format!("placements[{i}]"), &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn one_relay() -> ChainConfig {
        ChainConfig {
            reader: ReaderSpec {
                coil: CoilSpec::rectangle(0.05, 0.04, 4, 0.001, 0.25e-3),
                inductance: 1.5e-6,
                current: 0.1,
            },
            relays: vec![RelaySpec::new(CoilSpec::bench_relay())],
            tag: TagSpec {
                coil: CoilSpec::square(0.03, 3, 0.001, 0.25e-3),
                inductance: 0.58e-6,
                load: 50.0,
            },
            placements: vec![Placement::coaxial(0.05), Placement::coaxial(0.05)],
            frequency: NFC_FREQUENCY,
            all_pairs: false,
        }
    }

    #[test]
    fn well_formed_chain_has_no_violations() {
        assert!(validate_chain(&one_relay()).is_empty());
    }

    #[test]
    fn placement_count_mismatch_is_reported() {
        let mut cfg = one_relay();
        cfg.placements.pop();
        let v = validate_chain(&cfg);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].path, "placements");
    }

    #[test]
    fn overlapping_turns_are_reported() {
        let mut cfg = one_relay();
        cfg.relays[0].coil.pitch = cfg.relays[0].coil.wire_radius;
        let v = validate_chain(&cfg);
        assert_eq!(v.len(), 1, "{v:?}");
        assert_eq!(v[0].path, "relay[0].pitch");
    }

    #[test]
    fn negative_side_and_coincident_pose() {
        let mut cfg = one_relay();
        cfg.tag.coil.side_a = -0.03;
        cfg.tag.coil.side_b = -0.03;
        cfg.placements[1] = Placement::new(0.0, 0.0, 0.0);
        let paths: Vec<_> = validate_chain(&cfg).into_iter().map(|v| v.path).collect();
        assert!(paths.contains(&"tag.side_a".to_string()));
        assert!(paths.contains(&"placements[1]".to_string()));
    }

    #[test]
    fn validation_is_pure() {
        let mut cfg = one_relay();
        cfg.frequency = -1.0;
        cfg.relays[0].coil.turns = 0;
        assert_eq!(validate_chain(&cfg), validate_chain(&cfg));
    }

    #[test]
    fn isometry_places_centre_and_tilts_normal() {
        let p = Placement::new(0.02, 0.05, 0.3);
        let iso = p.isometry();
        let c = iso.transform_point(&Point3::origin());
        assert!((c - Point3::new(0.02, 0.0, 0.05)).norm() < 1e-15);
        let n = iso.transform_vector(&Vector3::z());
        assert!((n - Vector3::new(-0.3f64.sin(), 0.0, 0.3f64.cos())).norm() < 1e-15);
        let x = iso.transform_vector(&Vector3::x());
        assert!((x - Vector3::new(0.3f64.cos(), 0.0, 0.3f64.sin())).norm() < 1e-15);
    }

    #[test]
    fn retiling_repeats_last_hop() {
        let mut cfg = one_relay();
        cfg.placements[0] = Placement::coaxial(0.02);
        cfg.placements[1] = Placement::coaxial(0.07);
        let three = cfg.with_relay_count(3).unwrap();
        assert_eq!(three.relays.len(), 3);
        let cs: Vec<f64> = three.placements.iter().map(|p| p.axial_c).collect();
        assert_eq!(cs, vec![0.02, 0.02, 0.02, 0.07]);
        assert!(validate_chain(&three).is_empty());
        let none = cfg.with_relay_count(0).unwrap();
        assert_eq!(none.placements, vec![Placement::coaxial(0.07)]);
    }

    #[test]
    fn turn_geometry() {
        let c = CoilSpec::bench_relay();
        assert_eq!(c.turn_sides(2), (0.10 - 0.008, 0.10 - 0.008));
        assert!((c.wire_length() - (0.4 + 0.384 + 0.368)).abs() < 1e-12);
    }
}
