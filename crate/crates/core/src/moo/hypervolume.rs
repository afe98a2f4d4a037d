use serde::{Deserialize, Serialize};

use crate::evaluation::FitnessVector;
use crate::{Error, Result};

/// Reference (nadir) point for 2-D hypervolume: a score to exceed and a
/// complexity to stay below.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct HvReference {
    pub score: f64,
    pub complexity: f64,
}

impl Default for HvReference {
    fn default() -> Self {
        HvReference { score: 0.0, complexity: 10.0 }
    }
}

impl std::str::FromStr for HvReference {
    type Err = Error;

    /// Parses `"<score>,<complexity>"`, e.g. `0,10`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("hypervolume reference must be '<score>,<complexity>', got {s:?}"));
        let (a, b) = s.split_once(',').ok_or_else(bad)?;
        let score: f64 = a.trim().parse().map_err(|_| bad())?;
        let complexity: f64 = b.trim().parse().map_err(|_| bad())?;
        Ok(HvReference { score, complexity })
    }
}

impl std::fmt::Display for HvReference {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{},{}", self.score, self.complexity)
    }
}

/// Area dominated by `front` and bounded by `reference`, by a rectangle
/// sweep in order of descending score. Every point must be strictly better
/// than the reference on both objectives. Dominated members add nothing, so
/// the input order and the presence of dominated points do not matter.
pub fn hypervolume_2d(front: &[FitnessVector], reference: HvReference) -> Result<f64> {
    for p in front {
        if !(p.score > reference.score && (p.complexity as f64) < reference.complexity) {
            return Err(Error::Contract(format!(
                "point ({}, {}) does not dominate reference ({reference})",
                p.score, p.complexity
            )));
        }
    }
    let mut sorted = front.to_vec();
    sorted.sort_by(|a, b| b.score.total_cmp(&a.score).then(a.complexity.cmp(&b.complexity)));
    let mut area = 0.0;
    let mut best_complexity = reference.complexity;
    for (i, p) in sorted.iter().enumerate() {
        best_complexity = best_complexity.min(p.complexity as f64);
        let next_score = sorted.get(i + 1).map_or(reference.score, |q| q.score);
        area += (p.score - next_score) * (reference.complexity - best_complexity);
    }
    Ok(area)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fv(s: f64, c: usize) -> FitnessVector {
        FitnessVector::new(s, c)
    }

    #[test]
    fn single_perfect_stump() {
        assert_eq!(hypervolume_2d(&[fv(1.0, 1)], HvReference::default()).unwrap(), 9.0);
    }

    #[test]
    fn two_point_front() {
        let hv = hypervolume_2d(&[fv(0.9, 3), fv(0.8, 1)], HvReference::default()).unwrap();
        assert!((hv - 7.9).abs() < 1e-12);
    }

    #[test]
    fn empty_front_is_zero() {
        assert_eq!(hypervolume_2d(&[], HvReference::default()).unwrap(), 0.0);
    }

    #[test]
    fn points_outside_reference_are_rejected() {
        assert!(hypervolume_2d(&[fv(0.5, 10)], HvReference::default()).is_err());
        assert!(hypervolume_2d(&[fv(0.0, 2)], HvReference::default()).is_err());
    }

    #[test]
    fn reference_parses() {
        let r: HvReference = "0,10".parse().unwrap();
        assert_eq!(r, HvReference::default());
        assert_eq!(r.to_string(), "0,10");
        assert!("0;10".parse::<HvReference>().is_err());
    }
}
