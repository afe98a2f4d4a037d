use std::collections::HashSet;

use rand::Rng;

use crate::evaluation::FitnessVector;
use crate::search_space::{CanonicalKey, PipelineTree, SearchSpace};

/// Variation draws per offspring slot before falling back to a novel stump.
pub const MAX_ATTEMPTS: usize = 100;

#[derive(Clone, Debug, PartialEq)]
pub struct Individual {
    pub key: CanonicalKey,
    pub tree: PipelineTree,
    pub fitness: FitnessVector,
}

#[derive(Clone, Debug, Default)]
pub struct OffspringBatch {
    pub trees: Vec<(CanonicalKey, PipelineTree)>,
    pub mutations: usize,
    pub crossovers: usize,
    pub stumps: usize,
    /// Slots left empty because even the stump pool was exhausted.
    pub empty: usize,
}

/// Produces up to `lambda` offspring with keys not in `seen`, adding each new
/// key to `seen`. Each draw picks crossover with probability
/// `crossover_rate`; crossover needs two parents and otherwise falls back to
/// mutation. Returns `None` as soon as `stop()` is true.
pub fn generate_offspring<R: Rng + ?Sized>(
    space: &SearchSpace,
    population: &[Individual],
    lambda: usize,
    crossover_rate: f64,
    seen: &mut HashSet<CanonicalKey>,
    rng: &mut R,
    stop: &dyn Fn() -> bool,
) -> Option<OffspringBatch> {
    let crossover_rate = crossover_rate.clamp(0.0, 1.0);
    let mut batch = OffspringBatch::default();
    let n = population.len();
    for _ in 0..lambda {
        if stop() {
            return None;
        }
        let mut child = None;
        for _ in 0..if n == 0 { 0 } else { MAX_ATTEMPTS } {
            let crossover = rng.gen_bool(crossover_rate) && n >= 2;
            if crossover {
                let i = rng.gen_range(0..n);
                let mut j = rng.gen_range(0..n - 1);
                if j >= i {
                    j += 1;
                }
                let (a, b) = (&population[i].tree, &population[j].tree);
                if let Ok(Some(t)) = space.crossover(a, b, &*seen, rng) {
                    batch.crossovers += 1;
                    child = Some(t);
                    break;
                }
            } else {
                let parent = &population[rng.gen_range(0..n)].tree;
                if let Some(t) = space.mutate(parent, &*seen, rng) {
                    batch.mutations += 1;
                    child = Some(t);
                    break;
                }
            }
        }
        if child.is_none() {
            child = space.novel_stump(&*seen, rng);
            if child.is_some() {
                batch.stumps += 1;
            }
        }
        match child {
            Some(t) => {
                let key = space.key(&t);
                seen.insert(key.clone());
                batch.trees.push((key, t));
            }
            None => batch.empty += 1,
        }
    }
    Some(batch)
}
