//! Discrete geometry search: the ant-colony optimizer and its brute-force oracle.
//!
//! A [`SearchSpace`] is an ordered list of dimensions, each a finite value set
//! for one geometry parameter of a base [`ChainConfig`]. A candidate is one
//! value index per dimension. Dimensions that name a relay or hop the chain
//! does not have are inert.

mod exhaustive;
mod raca;

pub use exhaustive::{exhaustive_search, MAX_EXHAUSTIVE_CANDIDATES};
pub use raca::{raca_optimize, PheromoneState, RacaParams, TAU_INITIAL, TAU_MIN};

use crate::circuit::{solve_chain, SolverMode};
use crate::geometry::ChainConfig;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

/// Which geometry parameter a dimension drives.
///
/// Relay indices are 1-based (`relay_side:1` is the first relay), hop indices
/// 0-based (`axial_c:0` is reader to first coil).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DimensionKey {
    RelaySide(usize),
    RelayTurns(usize),
    Lateral(usize),
    Axial(usize),
    Angle(usize),
}

impl fmt::Display for DimensionKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionKey::RelaySide(k) => write!(f, "relay_side:{k}"),
            DimensionKey::RelayTurns(k) => write!(f, "relay_turns:{k}"),
            DimensionKey::Lateral(j) => write!(f, "lateral_d:{j}"),
            DimensionKey::Axial(j) => write!(f, "axial_c:{j}"),
            DimensionKey::Angle(j) => write!(f, "angle:{j}"),
        }
    }
}

impl FromStr for DimensionKey {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (name, index) = s
            .split_once(':')
            .ok_or_else(|| format!("dimension `{s}` must look like name:index"))?;
        let index: usize = index
            .parse()
            .map_err(|_| format!("dimension `{s}` has a non-integer index"))?;
        match name {
            "relay_side" | "relay_turns" if index == 0 => {
                Err(format!("relay indices start at 1 in `{s}`"))
            }
            "relay_side" => Ok(DimensionKey::RelaySide(index)),
            "relay_turns" => Ok(DimensionKey::RelayTurns(index)),
            "lateral_d" => Ok(DimensionKey::Lateral(index)),
            "axial_c" => Ok(DimensionKey::Axial(index)),
            "angle" => Ok(DimensionKey::Angle(index)),
            _ => Err(format!("unknown dimension `{name}`")),
        }
    }
}

impl Serialize for DimensionKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for DimensionKey {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Dimension {
    pub key: DimensionKey,
    pub values: Vec<f64>,
}

impl Dimension {
    pub fn new(key: DimensionKey, values: Vec<f64>) -> Self {
        Dimension { key, values }
    }

    fn check(&self) -> Result<(), SearchError> {
        let bad = |why: &str| Err(SearchError::BadDimension(format!("{}: {why}", self.key)));
        if self.values.is_empty() {
            return bad("value set is empty");
        }
        for &v in &self.values {
            if !v.is_finite() {
                return bad("values must be finite");
            }
            let ok = match self.key {
                DimensionKey::RelaySide(_) => v > 0.0,
                DimensionKey::RelayTurns(_) => v >= 1.0 && v.fract() == 0.0,
                DimensionKey::Lateral(_) | DimensionKey::Axial(_) => v >= 0.0,
                DimensionKey::Angle(_) => (0.0..=std::f64::consts::FRAC_PI_2).contains(&v),
            };
            if !ok {
                return bad(&format!("value {v} outside the parameter's domain"));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchSpace {
    pub dimensions: Vec<Dimension>,
    pub n_relays: usize,
}

impl SearchSpace {
    pub fn new(dimensions: Vec<Dimension>, n_relays: usize) -> Result<Self, SearchError> {
        for d in &dimensions {
            d.check()?;
        }
        Ok(SearchSpace {
            dimensions,
            n_relays,
        })
    }

    /// Number of candidates, saturating at `usize::MAX`.
    pub fn size(&self) -> usize {
        self.dimensions
            .iter()
            .fold(1usize, |acc, d| acc.saturating_mul(d.values.len()))
    }

    pub fn values(&self, indices: &[usize]) -> Vec<f64> {
        self.dimensions
            .iter()
            .zip(indices)
            .map(|(d, &i)| d.values[i])
            .collect()
    }

    /// `base` with the candidate's values written in. Changing a relay's side
    /// or turn count drops its L/R/C overrides so they are recomputed for the
    /// new coil.
    pub fn apply(&self, base: &ChainConfig, params: &[f64]) -> ChainConfig {
        let mut cfg = base.clone();
        for (dim, &v) in self.dimensions.iter().zip(params) {
            match dim.key {
                DimensionKey::RelaySide(k) => {
                    if let Some(relay) = cfg.relays.get_mut(k.wrapping_sub(1)) {
                        relay.coil.side_a = v;
                        relay.coil.side_b = v;
                        relay.inductance = None;
                        relay.resistance = None;
                        relay.capacitance = None;
                    }
                }
                DimensionKey::RelayTurns(k) => {
                    if let Some(relay) = cfg.relays.get_mut(k.wrapping_sub(1)) {
                        relay.coil.turns = v as u32;
                        relay.inductance = None;
                        relay.resistance = None;
                        relay.capacitance = None;
                    }
                }
                DimensionKey::Lateral(j) => {
                    if let Some(p) = cfg.placements.get_mut(j) {
                        p.lateral_d = v;
                    }
                }
                DimensionKey::Axial(j) => {
                    if let Some(p) = cfg.placements.get_mut(j) {
                        p.axial_c = v;
                    }
                }
                DimensionKey::Angle(j) => {
                    if let Some(p) = cfg.placements.get_mut(j) {
                        p.angle_theta = v;
                    }
                }
            }
        }
        cfg
    }
}

/// Efficiency floor, reader current ceiling and relay size limit.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstraintSet {
    /// Minimum transfer efficiency with the chain's relays.
    pub eta_min: f64,
    /// Reader current must stay strictly below this (A).
    pub i_max: f64,
    /// Largest allowed relay side (m).
    pub s_max: f64,
}

impl ConstraintSet {
    pub fn admits(&self, config: &ChainConfig, efficiency: f64) -> bool {
        efficiency >= self.eta_min
            && config.reader.current < self.i_max
            && config
                .relays
                .iter()
                .all(|r| r.coil.side_a.max(r.coil.side_b) <= self.s_max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Evaluation {
    pub power: f64,
    pub efficiency: f64,
    pub feasible: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    /// Best value per dimension.
    pub params: Vec<f64>,
    /// Index of each value within its dimension.
    pub indices: Vec<usize>,
    pub best_power: f64,
    pub efficiency: f64,
    /// Best feasible power after each iteration (0 until one is found).
    pub history: Vec<f64>,
    /// Distinct candidates sent to the circuit solver.
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SearchError {
    #[error("bad dimension {0}")]
    BadDimension(String),
    #[error("bad search parameter: {0}")]
    BadParameter(String),
    #[error("search space has {size} candidates, more than the {limit} limit")]
    SpaceTooLarge { size: usize, limit: usize },
    #[error("no feasible candidate after {evaluations} evaluations")]
    NoFeasible { evaluations: usize },
}

/// Solve one candidate in corrected mode and check it against `constraints`.
/// Solver errors make the candidate infeasible with zero power.
pub fn evaluate_candidate(
    params: &[f64],
    space: &SearchSpace,
    base: &ChainConfig,
    constraints: &ConstraintSet,
) -> Evaluation {
    let cfg = space.apply(base, params);
    match solve_chain(&cfg, SolverMode::CorrectedPhasor) {
        Ok(r) => Evaluation {
            power: r.output_power,
            efficiency: r.efficiency,
            feasible: constraints.admits(&cfg, r.efficiency),
        },
        Err(_) => Evaluation {
            power: 0.0,
            efficiency: 0.0,
            feasible: false,
        },
    }
}

/// True when `(power, indices)` should replace the incumbent: strictly more
/// power, or equal power at a lexicographically lower index vector.
pub(crate) fn improves(power: f64, indices: &[usize], best: Option<(f64, &[usize])>) -> bool {
    match best {
        None => true,
        Some((p, idx)) => power > p || (power == p && indices < idx),
    }
}

#[cfg(test)]
pub(crate) mod test_support {
    use super::*;
    use crate::geometry::{
        ChainConfig, CoilSpec, Placement, ReaderSpec, RelaySpec, TagSpec, NFC_FREQUENCY,
    };

    pub fn base() -> ChainConfig {
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

    pub fn loose() -> ConstraintSet {
        ConstraintSet {
            eta_min: 1e-6,
            i_max: 1.0,
            s_max: 0.2,
        }
    }

    pub fn small_space() -> SearchSpace {
        SearchSpace::new(
            vec![
                Dimension::new(DimensionKey::RelaySide(1), vec![0.06, 0.10]),
                Dimension::new(DimensionKey::Axial(1), vec![0.02, 0.04, 0.06]),
                Dimension::new(DimensionKey::Angle(1), vec![0.0, 0.5]),
            ],
            1,
        )
        .unwrap()
    }
}
