use super::{evaluate_candidate, improves, ConstraintSet, Evaluation, OptimizeResult, SearchError, SearchSpace};
use crate::geometry::ChainConfig;
use rayon::prelude::*;

pub const MAX_EXHAUSTIVE_CANDIDATES: usize = 1_000_000;

/// Index vector of candidate `rank` in lexicographic order (last dimension fastest).
fn unrank(space: &SearchSpace, mut rank: usize) -> Vec<usize> {
    let mut idx = vec![0; space.dimensions.len()];
    for (slot, d) in idx.iter_mut().zip(&space.dimensions).rev() {
        *slot = rank % d.values.len();
        rank /= d.values.len();
    }
    idx
}

/// Evaluate every candidate; ties go to the lexicographically lowest index.
pub fn exhaustive_search(
    space: &SearchSpace,
    base: &ChainConfig,
    constraints: &ConstraintSet,
) -> Result<OptimizeResult, SearchError> {
    let size = space.size();
    if size > MAX_EXHAUSTIVE_CANDIDATES {
        return Err(SearchError::SpaceTooLarge {
            size,
            limit: MAX_EXHAUSTIVE_CANDIDATES,
        });
    }
    let results: Vec<(Vec<usize>, Evaluation)> = (0..size)
        .into_par_iter()
        .map(|rank| {
            let idx = unrank(space, rank);
            let e = evaluate_candidate(&space.values(&idx), space, base, constraints);
            (idx, e)
        })
        .collect();

    let mut best: Option<(f64, &[usize], f64)> = None;
    for (idx, e) in &results {
        if e.feasible && improves(e.power, idx, best.map(|(p, i, _)| (p, i))) {
            best = Some((e.power, idx, e.efficiency));
        }
    }
    let (best_power, indices, efficiency) =
        best.ok_or(SearchError::NoFeasible { evaluations: size })?;
    Ok(OptimizeResult {
        params: space.values(indices),
        indices: indices.to_vec(),
        best_power,
        efficiency,
        history: vec![best_power],
        evaluations: size,
    })
}
