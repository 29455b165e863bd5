//! Ant-colony search over a [`SearchSpace`].
//!
//! Every dimension carries its own pheromone table. Each ant picks, per
//! dimension, the strongest value with probability `q0` and otherwise draws
//! one by roulette over `tau`. Feasible ants deposit `rho P_o / P_best` on
//! the values they used; the table then becomes `(1 - rho) tau + deposit`,
//! floored at [`TAU_MIN`]. Scaling the deposit by `rho` keeps a single lucky
//! iteration from locking a dimension before the rest has been tried.

use super::{evaluate_candidate, improves, ConstraintSet, Evaluation, OptimizeResult, SearchError, SearchSpace};
use crate::geometry::ChainConfig;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::HashMap;

pub const TAU_INITIAL: f64 = 1.0;
pub const TAU_MIN: f64 = 1e-6 * TAU_INITIAL;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RacaParams {
    pub iterations: usize,
    pub ants: usize,
    pub rho: f64,
    pub q0: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_seed() -> u64 {
    42
}

impl Default for RacaParams {
    fn default() -> Self {
        RacaParams {
            iterations: 200,
            ants: 10,
            rho: 0.1,
            q0: 0.2,
            seed: default_seed(),
        }
    }
}

impl RacaParams {
    fn check(&self) -> Result<(), SearchError> {
        let bad = |m: String| Err(SearchError::BadParameter(m));
        if self.iterations < 1 {
            return bad("iterations must be at least 1".into());
        }
        if self.ants < 1 {
            return bad("ants must be at least 1".into());
        }
        if !(self.rho > 0.0 && self.rho < 1.0) {
            return bad(format!("rho must lie in (0, 1), got {}", self.rho));
        }
        if !(0.0..=1.0).contains(&self.q0) {
            return bad(format!("q0 must lie in [0, 1], got {}", self.q0));
        }
        // scenario files store integers as i64
        if self.seed > i64::MAX as u64 {
            return bad(format!("seed must be at most {}, got {}", i64::MAX, self.seed));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PheromoneState {
    pub tau: Vec<Vec<f64>>,
    pub rho: f64,
    pub q0: f64,
    pub iteration: usize,
}

impl PheromoneState {
    pub fn new(space: &SearchSpace, rho: f64, q0: f64) -> Self {
        PheromoneState {
            tau: space
                .dimensions
                .iter()
                .map(|d| vec![TAU_INITIAL; d.values.len()])
                .collect(),
            rho,
            q0,
            iteration: 0,
        }
    }

    /// One value index per dimension.
    pub fn sample<R: Rng>(&self, rng: &mut R) -> Vec<usize> {
        self.tau
            .iter()
            .map(|row| {
                if rng.gen::<f64>() < self.q0 {
                    strongest(row)
                } else {
                    roulette(row, rng.gen::<f64>())
                }
            })
            .collect()
    }

    /// Evaporate and add `deposit` (same shape as `tau`).
    pub fn update(&mut self, deposit: &[Vec<f64>]) {
        for (row, add) in self.tau.iter_mut().zip(deposit) {
            for (t, a) in row.iter_mut().zip(add) {
                *t = ((1.0 - self.rho) * *t + a).max(TAU_MIN);
            }
        }
        self.iteration += 1;
    }
}

/// First index of the largest entry.
fn strongest(row: &[f64]) -> usize {
    let mut best = 0;
    for (i, &t) in row.iter().enumerate() {
        if t > row[best] {
            best = i;
        }
    }
    best
}

fn roulette(row: &[f64], u: f64) -> usize {
    let total: f64 = row.iter().sum();
    let target = u * total;
    let mut acc = 0.0;
    for (i, &t) in row.iter().enumerate() {
        acc += t;
        if target < acc {
            return i;
        }
    }
    row.len() - 1
}

pub fn raca_optimize(
    space: &SearchSpace,
    base: &ChainConfig,
    constraints: &ConstraintSet,
    params: &RacaParams,
) -> Result<OptimizeResult, SearchError> {
    params.check()?;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let mut state = PheromoneState::new(space, params.rho, params.q0);
    let mut cache: HashMap<Vec<usize>, Evaluation> = HashMap::new();
    let mut best: Option<(f64, Vec<usize>, f64)> = None;
    let mut history = Vec::with_capacity(params.iterations);

    for _ in 0..params.iterations {
        let ants: Vec<Vec<usize>> = (0..params.ants).map(|_| state.sample(&mut rng)).collect();

        let mut fresh: Vec<Vec<usize>> = ants
            .iter()
            .filter(|a| !cache.contains_key(*a))
            .cloned()
            .collect();
        fresh.sort();
        fresh.dedup();
        let evaluated: Vec<Evaluation> = fresh
            .par_iter()
            .map(|idx| evaluate_candidate(&space.values(idx), space, base, constraints))
            .collect();
        cache.extend(fresh.into_iter().zip(evaluated));

        for ant in &ants {
            let e = cache[ant];
            if e.feasible && improves(e.power, ant, best.as_ref().map(|(p, i, _)| (*p, i.as_slice()))) {
                best = Some((e.power, ant.clone(), e.efficiency));
            }
        }

        let mut deposit: Vec<Vec<f64>> = state.tau.iter().map(|r| vec![0.0; r.len()]).collect();
        if let Some((p_best, _, _)) = &best {
            if *p_best > 0.0 {
                for ant in &ants {
                    let e = cache[ant];
                    if e.feasible {
                        for (row, &i) in deposit.iter_mut().zip(ant) {
                            row[i] += params.rho * e.power / p_best;
                        }
                    }
                }
            }
        }
        state.update(&deposit);
        history.push(best.as_ref().map_or(0.0, |b| b.0));
    }

    let evaluations = cache.len();
    let (best_power, indices, efficiency) = best.ok_or(SearchError::NoFeasible { evaluations })?;
    Ok(OptimizeResult {
        params: space.values(&indices),
        indices,
        best_power,
        efficiency,
        history,
        evaluations,
    })
}
