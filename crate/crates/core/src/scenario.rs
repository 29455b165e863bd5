//! Scenario files: a TOML description of one chain plus optional search setup.
//!
//! ```toml
//! [drive]
//! frequency = 13560000.0   # Hz
//! current = 0.1            # A RMS, reader drive
//! all_pairs = false        # optional
//!
//! [reader]                 # coil keys, plus inductance (H)
//! shape = "rectangle"
//! side_a = 0.05
//! side_b = 0.04            # optional for squares
//! turns = 4
//! pitch = 0.001
//! wire_radius = 0.00025
//! inductance = 1.5e-6
//!
//! [[relay]]                # repeated; resistance / inductance / capacitance optional
//! shape = "square"
//! side_a = 0.1
//! turns = 3
//! pitch = 0.002
//! wire_radius = 0.0005115
//!
//! [tag]                    # coil keys, plus inductance (H) and load (ohm)
//!
//! [placements]             # one entry per hop, reader first
//! lateral_d = [0.0, 0.0]
//! axial_c = [0.05, 0.05]
//! angle_theta = [0.0, 0.0]
//!
//! [constraints]            # optional
//! eta_min = 0.001
//! i_max = 0.5
//! s_max = 0.12
//!
//! [raca]                   # optional; seed defaults to 42
//! iterations = 200
//! ants = 10
//! rho = 0.1
//! q0 = 0.2
//! [[raca.dimension]]
//! name = "axial_c:1"
//! values = [0.02, 0.04]
//! ```
//!
//! Unknown keys are rejected. Units are strict SI.

use crate::geometry::{
    validate_chain, ChainConfig, CoilShape, CoilSpec, Placement, ReaderSpec, RelaySpec, TagSpec,
    Violation,
};
use crate::search::{ConstraintSet, Dimension, DimensionKey, RacaParams, SearchSpace};
use serde::{Deserialize, Serialize};
use thiserror::Error;

const PAPER_DEFAULT: &str = include_str!("../scenarios/paper_default.toml");
const RELAY_CHAIN: &str = include_str!("../scenarios/relay_chain.toml");

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("{0}")]
    Parse(String),
    #[error("{}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DriveSection {
    frequency: f64,
    current: f64,
    #[serde(default)]
    all_pairs: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ReaderSection {
    shape: CoilShape,
    side_a: f64,
    side_b: Option<f64>,
    turns: u32,
    pitch: f64,
    wire_radius: f64,
    inductance: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RelaySection {
    shape: CoilShape,
    side_a: f64,
    side_b: Option<f64>,
    turns: u32,
    pitch: f64,
    wire_radius: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    resistance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    inductance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    capacitance: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct TagSection {
    shape: CoilShape,
    side_a: f64,
    side_b: Option<f64>,
    turns: u32,
    pitch: f64,
    wire_radius: f64,
    inductance: f64,
    load: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PlacementSection {
    lateral_d: Vec<f64>,
    axial_c: Vec<f64>,
    angle_theta: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DimensionSection {
    name: DimensionKey,
    values: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RacaSection {
    iterations: usize,
    ants: usize,
    rho: f64,
    q0: f64,
    #[serde(default = "default_seed")]
    seed: u64,
    #[serde(default, rename = "dimension")]
    dimensions: Vec<DimensionSection>,
}

fn default_seed() -> u64 {
    42
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ScenarioFile {
    drive: DriveSection,
    reader: ReaderSection,
    #[serde(default, rename = "relay")]
    relays: Vec<RelaySection>,
    tag: TagSection,
    placements: PlacementSection,
    #[serde(skip_serializing_if = "Option::is_none")]
    constraints: Option<ConstraintSet>,
    #[serde(skip_serializing_if = "Option::is_none")]
    raca: Option<RacaSection>,
}

/// Search setup from the `[raca]` section.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchSetup {
    pub params: RacaParams,
    pub dimensions: Vec<Dimension>,
}

impl SearchSetup {
    pub fn space(&self, n_relays: usize) -> Result<SearchSpace, crate::search::SearchError> {
        SearchSpace::new(self.dimensions.clone(), n_relays)
    }
}

/// A parsed, validated scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub chain: ChainConfig,
    pub constraints: Option<ConstraintSet>,
    pub search: Option<SearchSetup>,
}

fn coil(
    path: &str,
    shape: CoilShape,
    side_a: f64,
    side_b: Option<f64>,
    turns: u32,
    pitch: f64,
    wire_radius: f64,
    out: &mut Vec<Violation>,
) -> CoilSpec {
    let side_b = match (shape, side_b) {
        (_, Some(b)) => b,
        (CoilShape::Square, None) => side_a,
        (CoilShape::Rectangle, None) => {
            out.push(Violation::new(
                format!("{path}.side_b"),
                "required for rectangular coils",
            ));
            side_a
        }
    };
    CoilSpec {
        shape,
        side_a,
        side_b,
        turns,
        pitch,
        wire_radius,
    }
}

impl Scenario {
    /// Parse and validate scenario text.
    pub fn from_toml_str(text: &str) -> Result<Scenario, ScenarioError> {
        let de = toml::Deserializer::new(text);
        let file: ScenarioFile = serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let msg = inner.message().trim().to_string();
            let at = inner
                .span()
                .map(|s| {
                    let line = text[..s.start].matches('\n').count() + 1;
                    format!(" (line {line})")
                })
                .unwrap_or_default();
            if path == "." || path.is_empty() {
                ScenarioError::Parse(format!("{msg}{at}"))
            } else {
                ScenarioError::Parse(format!("[{path}]: {msg}{at}"))
            }
        })?;
        Scenario::from_file(file)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Scenario, ScenarioError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| ScenarioError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Scenario::from_toml_str(&text)
    }

    fn from_file(file: ScenarioFile) -> Result<Scenario, ScenarioError> {
        let mut v = Vec::new();
        let r = &file.reader;
        let reader = ReaderSpec {
            coil: coil("reader", r.shape, r.side_a, r.side_b, r.turns, r.pitch, r.wire_radius, &mut v),
            inductance: r.inductance,
            current: file.drive.current,
        };
        let relays = file
            .relays
            .iter()
            .enumerate()
            .map(|(i, s)| RelaySpec {
                coil: coil(
                    &format!("relay[{i}]"),
                    s.shape,
                    s.side_a,
                    s.side_b,
                    s.turns,
                    s.pitch,
                    s.wire_radius,
                    &mut v,
                ),
                resistance: s.resistance,
                inductance: s.inductance,
                capacitance: s.capacitance,
            })
            .collect();
        let t = &file.tag;
        let tag = TagSpec {
            coil: coil("tag", t.shape, t.side_a, t.side_b, t.turns, t.pitch, t.wire_radius, &mut v),
            inductance: t.inductance,
            load: t.load,
        };
        let p = &file.placements;
        if p.axial_c.len() != p.lateral_d.len() || p.angle_theta.len() != p.lateral_d.len() {
            v.push(Violation::new(
                "placements",
                format!(
                    "lateral_d, axial_c and angle_theta must have equal length, got {}, {}, {}",
                    p.lateral_d.len(),
                    p.axial_c.len(),
                    p.angle_theta.len()
                ),
            ));
        }
        let placements = p
            .lateral_d
            .iter()
            .zip(&p.axial_c)
            .zip(&p.angle_theta)
            .map(|((&d, &c), &th)| Placement::new(d, c, th))
            .collect();
        let chain = ChainConfig {
            reader,
            relays,
            tag,
            placements,
            frequency: file.drive.frequency,
            all_pairs: file.drive.all_pairs,
        };
        v.extend(validate_chain(&chain));

        if let Some(c) = &file.constraints {
            for (name, value) in [("eta_min", c.eta_min), ("i_max", c.i_max), ("s_max", c.s_max)] {
                if !(value >= 0.0 && value.is_finite()) {
                    v.push(Violation::new(
                        format!("constraints.{name}"),
                        format!("must be non-negative, got {value}"),
                    ));
                }
            }
        }
        let search = file.raca.as_ref().map(|r| {
            let params = RacaParams {
                iterations: r.iterations,
                ants: r.ants,
                rho: r.rho,
                q0: r.q0,
                seed: r.seed,
            };
            let dimensions: Vec<Dimension> = r
                .dimensions
                .iter()
                .map(|d| Dimension::new(d.name, d.values.clone()))
                .collect();
            if let Err(e) = SearchSpace::new(dimensions.clone(), chain.n_relays()) {
                v.push(Violation::new("raca.dimension", e.to_string()));
            }
            SearchSetup { params, dimensions }
        });

        if !v.is_empty() {
            return Err(ScenarioError::Invalid(v));
        }
        Ok(Scenario {
            chain,
            constraints: file.constraints,
            search,
        })
    }

    /// Canonical TOML text; parsing it gives back an identical scenario.
    pub fn to_toml(&self) -> String {
        let c = &self.chain;
        let file = ScenarioFile {
            drive: DriveSection {
                frequency: c.frequency,
                current: c.reader.current,
                all_pairs: c.all_pairs,
            },
            reader: ReaderSection {
                shape: c.reader.coil.shape,
                side_a: c.reader.coil.side_a,
                side_b: Some(c.reader.coil.side_b),
                turns: c.reader.coil.turns,
                pitch: c.reader.coil.pitch,
                wire_radius: c.reader.coil.wire_radius,
                inductance: c.reader.inductance,
            },
            relays: c
                .relays
                .iter()
                .map(|r| RelaySection {
                    shape: r.coil.shape,
                    side_a: r.coil.side_a,
                    side_b: Some(r.coil.side_b),
                    turns: r.coil.turns,
                    pitch: r.coil.pitch,
                    wire_radius: r.coil.wire_radius,
                    resistance: r.resistance,
                    inductance: r.inductance,
                    capacitance: r.capacitance,
                })
                .collect(),
            tag: TagSection {
                shape: c.tag.coil.shape,
                side_a: c.tag.coil.side_a,
                side_b: Some(c.tag.coil.side_b),
                turns: c.tag.coil.turns,
                pitch: c.tag.coil.pitch,
                wire_radius: c.tag.coil.wire_radius,
                inductance: c.tag.inductance,
                load: c.tag.load,
            },
            placements: PlacementSection {
                lateral_d: c.placements.iter().map(|p| p.lateral_d).collect(),
                axial_c: c.placements.iter().map(|p| p.axial_c).collect(),
                angle_theta: c.placements.iter().map(|p| p.angle_theta).collect(),
            },
            constraints: self.constraints,
            raca: self.search.as_ref().map(|s| RacaSection {
                iterations: s.params.iterations,
                ants: s.params.ants,
                rho: s.params.rho,
                q0: s.params.q0,
                seed: s.params.seed,
                dimensions: s
                    .dimensions
                    .iter()
                    .map(|d| DimensionSection {
                        name: d.key,
                        values: d.values.clone(),
                    })
                    .collect(),
            }),
        };
        toml::to_string(&file).expect("scenario always serializes")
    }

    /// Bench setup: 5 x 4 cm reader, one 10 cm / 3-turn / AWG 18 relay, 3 cm
    /// probe coil on a 50 ohm receiver, 5 cm coaxial hops.
    pub fn paper_default() -> Scenario {
        Scenario::from_toml_str(PAPER_DEFAULT).expect("bundled scenario is valid")
    }

    /// Three identical relays on 5 cm hops for chain-length studies.
    pub fn relay_chain() -> Scenario {
        Scenario::from_toml_str(RELAY_CHAIN).expect("bundled scenario is valid")
    }

    pub fn paper_default_text() -> &'static str {
        PAPER_DEFAULT
    }
}
