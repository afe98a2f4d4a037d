//! Pareto dominance, NSGA-II survival, 2-D hypervolume and frontier
//! averaging over (score, complexity) fitness vectors.

mod frontier;
mod hypervolume;
mod nsga2;

use serde::{Deserialize, Serialize};

pub use frontier::average_frontier;
pub use hypervolume::{hypervolume_2d, HvReference};
pub use nsga2::{crowding_distance, non_dominated_sort, nsga2_select};

use crate::evaluation::FitnessVector;
use crate::search_space::CanonicalKey;

/// `a` is no worse on both objectives and strictly better on one.
pub fn dominates(a: &FitnessVector, b: &FitnessVector) -> bool {
    a.score >= b.score && a.complexity <= b.complexity && (a.score > b.score || a.complexity < b.complexity)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FrontPoint {
    pub score: f64,
    pub complexity: usize,
    pub key: CanonicalKey,
}

impl FrontPoint {
    pub fn fitness(&self) -> FitnessVector {
        FitnessVector::new(self.score, self.complexity)
    }
}

/// Non-dominated points, one per distinct fitness vector, ordered by score
/// descending (hence complexity strictly descending too).
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParetoFront {
    points: Vec<FrontPoint>,
}

impl ParetoFront {
    /// Keeps the non-dominated members; among identical fitness vectors the
    /// lexicographically smallest key is kept.
    pub fn from_points(candidates: impl IntoIterator<Item = (FitnessVector, CanonicalKey)>) -> Self {
        let all: Vec<_> = candidates.into_iter().collect();
        let mut points: Vec<FrontPoint> = all
            .iter()
            .filter(|(f, _)| !all.iter().any(|(g, _)| dominates(g, f)))
            .map(|(f, k)| FrontPoint { score: f.score, complexity: f.complexity, key: k.clone() })
            .collect();
        points.sort_by(|a, b| {
            b.score.total_cmp(&a.score).then(a.complexity.cmp(&b.complexity)).then(a.key.cmp(&b.key))
        });
        points.dedup_by(|b, a| a.score == b.score && a.complexity == b.complexity);
        ParetoFront { points }
    }

    pub fn points(&self) -> &[FrontPoint] {
        &self.points
    }

    pub fn fitnesses(&self) -> Vec<FitnessVector> {
        self.points.iter().map(FrontPoint::fitness).collect()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Highest score, then lowest complexity at that score.
    pub fn best(&self) -> Option<&FrontPoint> {
        self.points.first()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(s: f64, c: usize) -> FitnessVector {
        FitnessVector::new(s, c)
    }

    #[test]
    fn dominance_cases() {
        assert!(dominates(&fv(0.9, 1), &fv(0.8, 2)));
        assert!(!dominates(&fv(0.9, 3), &fv(0.8, 1)));
        assert!(!dominates(&fv(0.9, 3), &fv(0.9, 3)));
        assert!(dominates(&fv(0.9, 2), &fv(0.9, 3)));
    }

    #[test]
    fn front_is_sorted_and_deduplicated() {
        let k = |s: &str| CanonicalKey::from_raw(s);
        let f = ParetoFront::from_points([
            (fv(0.8, 1), k("b")),
            (fv(0.9, 3), k("c")),
            (fv(0.7, 2), k("d")),
            (fv(0.8, 1), k("a")),
        ]);
        let got: Vec<_> = f.points().iter().map(|p| (p.score, p.complexity, p.key.as_str())).collect();
        assert_eq!(got, vec![(0.9, 3, "c"), (0.8, 1, "a")]);
        assert_eq!(f.best().unwrap().key.as_str(), "c");
    }
}
