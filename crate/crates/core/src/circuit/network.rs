use super::CircuitError;
use crate::em::{
    ac_resistance, match_capacitor, mutual_inductance_analytic, mutual_inductance_filament_frames,
    self_inductance,
};
use crate::geometry::{validate_chain, ChainConfig, CoilSpec, Placement};
use num_complex::Complex64;

/// Segments per side for filament couplings in all-pairs mode.
pub const FILAMENT_SEGMENTS: usize = 32;

/// Series RLC loop.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesBranch {
    pub inductance: f64,
    pub resistance: f64,
    pub capacitance: f64,
}

impl SeriesBranch {
    pub fn impedance(&self, omega: f64) -> Complex64 {
        Complex64::new(
            self.resistance,
            omega * self.inductance - 1.0 / (omega * self.capacitance),
        )
    }
}

/// Tag coil (with its wire resistance) in series with a parallel `C ∥ R_load` tank.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TagBranch {
    pub inductance: f64,
    pub coil_resistance: f64,
    pub capacitance: f64,
    pub load: f64,
}

impl TagBranch {
    fn tank_admittance_ratio(&self, omega: f64) -> Complex64 {
        Complex64::new(1.0, omega * self.capacitance * self.load)
    }

    pub fn impedance(&self, omega: f64) -> Complex64 {
        Complex64::new(self.coil_resistance, omega * self.inductance)
            + self.load / self.tank_admittance_ratio(omega)
    }

    /// Share of the coil current that flows through the load resistor.
    pub fn load_current(&self, coil_current: Complex64, omega: f64) -> Complex64 {
        coil_current / self.tank_admittance_ratio(omega)
    }
}

/// Resolved electrical model of a chain at one evaluation frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct Network {
    pub omega: f64,
    pub source_current: f64,
    pub reader: SeriesBranch,
    pub relays: Vec<SeriesBranch>,
    pub tag: TagBranch,
    /// Neighbour couplings `[M_(in)(1), M_12, …, M_(n)(o)]`.
    pub coupling: Vec<f64>,
    /// Non-neighbour couplings `(i, j, M)` over coil indices (0 = reader,
    /// n + 1 = tag); empty unless all-pairs coupling is enabled.
    pub cross: Vec<(usize, usize, f64)>,
}

/// Neighbour mutual inductances from the closed-form kernel. Repeated
/// (coil, coil, placement) hops, as in a uniform relay line, are computed once.
pub fn mutual_inductances(config: &ChainConfig) -> Result<Vec<f64>, CircuitError> {
    let coils = config.coils();
    let mut seen: Vec<((CoilSpec, CoilSpec, Placement), f64)> = Vec::new();
    let mut out = Vec::with_capacity(config.placements.len());
    for (i, p) in config.placements.iter().enumerate() {
        let key = (coils[i], coils[i + 1], *p);
        let m = match seen.iter().find(|(k, _)| *k == key) {
            Some(&(_, m)) => m,
            None => {
                let m = mutual_inductance_analytic(&coils[i], &coils[i + 1], p)
                    .map_err(|source| CircuitError::Coupling { index: i, source })?;
                seen.push((key, m));
                m
            }
        };
        out.push(m);
    }
    Ok(out)
}

fn all_pair_couplings(
    config: &ChainConfig,
) -> Result<(Vec<f64>, Vec<(usize, usize, f64)>), CircuitError> {
    let coils = config.coils();
    let frames = config.coil_frames();
    let mut neighbours = Vec::with_capacity(coils.len() - 1);
    let mut cross = Vec::new();
    for i in 0..coils.len() {
        for j in i + 1..coils.len() {
            let m = mutual_inductance_filament_frames(
                &coils[i],
                &frames[i],
                &coils[j],
                &frames[j],
                FILAMENT_SEGMENTS,
            )
            .map_err(|source| CircuitError::Coupling { index: i, source })?;
            if j == i + 1 {
                neighbours.push(m);
            } else {
                cross.push((i, j, m));
            }
        }
    }
    Ok((neighbours, cross))
}

impl Network {
    /// Resolve `config` at its own frequency.
    pub fn from_config(config: &ChainConfig) -> Result<Network, CircuitError> {
        Network::at_frequency(config, config.frequency)
    }

    /// Resolve `config` for evaluation at `frequency`: capacitors stay tuned to
    /// the config's design frequency, wire resistance follows `frequency`.
    pub fn at_frequency(config: &ChainConfig, frequency: f64) -> Result<Network, CircuitError> {
        let (coupling, cross) = if config.all_pairs {
            all_pair_couplings(config)?
        } else {
            (mutual_inductances(config)?, Vec::new())
        };
        Network::build(config, frequency, coupling, cross)
    }

    /// Resolve `config` with caller-supplied neighbour couplings.
    pub fn with_coupling(config: &ChainConfig, coupling: Vec<f64>) -> Result<Network, CircuitError> {
        Network::build(config, config.frequency, coupling, Vec::new())
    }

    pub(crate) fn build(
        config: &ChainConfig,
        frequency: f64,
        coupling: Vec<f64>,
        cross: Vec<(usize, usize, f64)>,
    ) -> Result<Network, CircuitError> {
        let violations = validate_chain(config);
        if !violations.is_empty() {
            return Err(CircuitError::Invalid(violations));
        }
        if !(frequency > 0.0) {
            return Err(CircuitError::BadArgument(format!(
                "evaluation frequency must be positive, got {frequency}"
            )));
        }
        if coupling.len() != config.relays.len() + 1 {
            return Err(CircuitError::CouplingCount {
                expected: config.relays.len() + 1,
                got: coupling.len(),
            });
        }
        let design = config.frequency;
        let reader = SeriesBranch {
            inductance: config.reader.inductance,
            resistance: ac_resistance(&config.reader.coil, frequency),
            capacitance: match_capacitor(config.reader.inductance, design),
        };
        let relays = config
            .relays
            .iter()
            .enumerate()
            .map(|(i, relay)| {
                let inductance = match relay.inductance {
                    Some(l) => l,
                    None => self_inductance(&relay.coil).map_err(|source| {
                        CircuitError::Inductance {
                            coil: format!("relay[{i}]"),
                            source,
                        }
                    })?,
                };
                Ok(SeriesBranch {
                    inductance,
                    resistance: relay
                        .resistance
                        .unwrap_or_else(|| ac_resistance(&relay.coil, frequency)),
                    capacitance: relay
                        .capacitance
                        .unwrap_or_else(|| match_capacitor(inductance, design)),
                })
            })
            .collect::<Result<Vec<_>, CircuitError>>()?;
        let tag = TagBranch {
            inductance: config.tag.inductance,
            coil_resistance: ac_resistance(&config.tag.coil, frequency),
            capacitance: match_capacitor(config.tag.inductance, design),
            load: config.tag.load,
        };
        Ok(Network {
            omega: 2.0 * std::f64::consts::PI * frequency,
            source_current: config.reader.current,
            reader,
            relays,
            tag,
            coupling,
            cross,
        })
    }

    pub fn n_relays(&self) -> usize {
        self.relays.len()
    }

    /// Self impedance of mesh `k` over downstream meshes (0 = relay #1, n = tag).
    pub(crate) fn mesh_impedance(&self, k: usize) -> Complex64 {
        if k < self.relays.len() {
            self.relays[k].impedance(self.omega)
        } else {
            self.tag.impedance(self.omega)
        }
    }
}
