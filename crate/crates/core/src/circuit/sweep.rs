use super::{
    mesh_solve_network, mutual_inductances, solve_network, CircuitError, Network, SolveResult,
    SolverMode,
};
use crate::geometry::ChainConfig;
use rayon::prelude::*;

/// `points` logarithmically spaced values from `start` to `stop` inclusive.
pub fn log_space(start: f64, stop: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![start];
    }
    let (a, b) = (start.ln(), stop.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

/// Mesh-solve the chain at log-spaced frequencies with the capacitors left
/// tuned to the config frequency. Output is in frequency order.
pub fn frequency_sweep(
    config: &ChainConfig,
    start: f64,
    stop: f64,
    points: usize,
) -> Result<Vec<(f64, SolveResult)>, CircuitError> {
    if points == 0 || !(start > 0.0) || !(stop >= start) {
        return Err(CircuitError::BadArgument(format!(
            "frequency sweep needs 0 < start <= stop and points >= 1, got {start}..{stop} x {points}"
        )));
    }
    let base = Network::from_config(config)?;
    log_space(start, stop, points)
        .into_par_iter()
        .map(|f| {
            let net = Network::build(config, f, base.coupling.clone(), base.cross.clone())?;
            mesh_solve_network(&net).map(|r| (f, r))
        })
        .collect()
}

/// Tag load that terminates a uniform relay line without reflection: the real
/// part of the impedance the tag reflects into the last relay equals the image
/// impedance `√(ω²M² + R²/4) − R/2` of the line (`M` the first relay-to-relay
/// coupling, `R` the first relay's resistance). Needs at least two relays.
pub fn matched_tag_load(config: &ChainConfig) -> Result<f64, CircuitError> {
    let n = config.n_relays();
    if n < 2 {
        return Err(CircuitError::BadArgument(format!(
            "matched load needs at least two relays, got {n}"
        )));
    }
    let coupling = mutual_inductances(config)?;
    let net = Network::with_coupling(config, coupling)?;
    let w = net.omega;
    let hop = net.coupling[1];
    let r = net.relays[0].resistance;
    let image = (w * w * hop * hop + 0.25 * r * r).sqrt() - 0.5 * r;
    let m_tag = net.coupling[n];
    let reflected = |load: f64| {
        let mut tag = net.tag;
        tag.load = load;
        (w * w * m_tag * m_tag / tag.impedance(w)).re
    };
    // Re(reflection) grows with the load for a tuned tank; bisect in log space.
    let (mut lo, mut hi) = (1e-3_f64.ln(), 1e7_f64.ln());
    if reflected(lo.exp()) > image || reflected(hi.exp()) < image {
        return Err(CircuitError::BadArgument(format!(
            "no tag load reflects {image:.4e} ohm into the last relay"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if reflected(mid.exp()) < image {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok((0.5 * (lo + hi)).exp())
}

/// Delivered power for relay counts `0..=n_max`, re-tiling `config` by
/// repeating its last relay and hop.
pub fn power_by_relay_count(config: &ChainConfig, n_max: usize) -> Result<Vec<f64>, CircuitError> {
    (0..=n_max)
        .into_par_iter()
        .map(|n| {
            let cfg = config.with_relay_count(n).ok_or_else(|| {
                CircuitError::BadArgument("placements do not match relays".to_string())
            })?;
            solve_network(&Network::from_config(&cfg)?, SolverMode::CorrectedPhasor)
                .map(|r| r.output_power)
        })
        .collect()
}

/// Largest relay count that still delivers at least `p_min` watts, scanning
/// `0..=n_max`; `None` if even the direct link falls short. Errors if the
/// power is still above `p_min` at `n_max`, since the cutoff lies beyond it.
pub fn wake_cutoff(config: &ChainConfig, p_min: f64, n_max: usize) -> Result<Option<usize>, CircuitError> {
    if !(p_min > 0.0) {
        return Err(CircuitError::BadArgument(format!("wake threshold must be positive, got {p_min}")));
    }
    let power = power_by_relay_count(config, n_max)?;
    if power[n_max] >= p_min {
        return Err(CircuitError::BadArgument(format!(
            "power still {:.3e} W at {n_max} relays; raise the scan limit",
            power[n_max]
        )));
    }
    Ok(power.iter().rposition(|&p| p >= p_min))
}
