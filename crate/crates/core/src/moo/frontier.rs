use std::collections::BTreeMap;

use super::dominates;
use crate::evaluation::FitnessVector;

/// Averages several runs' fronts into one: for every complexity present in
/// any run, the mean over the runs containing it of that run's best score at
/// that complexity; dominated averages are then dropped. Returned in
/// ascending complexity.
pub fn average_frontier(runs: &[Vec<FitnessVector>]) -> Vec<FitnessVector> {
    let mut sums: BTreeMap<usize, (f64, usize)> = BTreeMap::new();
    for run in runs {
        let mut best: BTreeMap<usize, f64> = BTreeMap::new();
        for p in run {
            let e = best.entry(p.complexity).or_insert(p.score);
            *e = e.max(p.score);
        }
        for (c, s) in best {
            let e = sums.entry(c).or_insert((0.0, 0));
            e.0 += s;
            e.1 += 1;
        }
    }
    let averaged: Vec<FitnessVector> =
        sums.into_iter().map(|(c, (sum, n))| FitnessVector::new(sum / n as f64, c)).collect();
    averaged.iter().filter(|p| !averaged.iter().any(|q| dominates(q, p))).copied().collect()
}
