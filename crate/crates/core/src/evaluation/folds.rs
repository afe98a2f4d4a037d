use rand::seq::SliceRandom;

use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// A stratified k-fold split. Depends only on the labels, `k` and the seed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StratifiedFolds {
    k: usize,
    assignment: Vec<usize>,
}

impl StratifiedFolds {
    /// Shuffles each class independently and deals its members round-robin
    /// across folds, continuing the rotation from where the previous class
    /// stopped so fold sizes stay balanced. If the rarest class has fewer
    /// than `k` members, `k` is reduced to that count.
    pub fn new(labels: &[usize], k: usize, seed: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::Config(format!("cv folds must be at least 2 (got {k})")));
        }
        let n_classes = labels.iter().max().map_or(0, |m| m + 1);
        let mut members = vec![Vec::new(); n_classes];
        labels.iter().enumerate().for_each(|(i, &l)| members[l].push(i));
        let smallest = members.iter().map(Vec::len).filter(|&c| c > 0).min().unwrap_or(0);
        let k = if smallest < k {
            if smallest < 2 {
                return Err(Error::Config(format!(
                    "dataset too small for cross-validation: a class has {smallest} instance(s)"
                )));
            }
            log::warn!("smallest class has {smallest} instances; reducing cv folds from {k} to {smallest}");
            smallest
        } else {
            k
        };

        let mut rng = stream(seed, Stream::Folds);
        let mut assignment = vec![0; labels.len()];
        let mut next = 0;
        for class in &mut members {
            class.shuffle(&mut rng);
            for &i in class.iter() {
                assignment[i] = next % k;
                next += 1;
            }
        }
        Ok(StratifiedFolds { k, assignment })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn fold_of(&self, i: usize) -> usize {
        self.assignment[i]
    }

    pub fn split(&self, fold: usize) -> (Vec<usize>, Vec<usize>) {
        (0..self.assignment.len()).partition(|&i| self.assignment[i] != fold)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels() -> Vec<usize> {
        (0..103).map(|i| if i % 7 == 0 { 2 } else { i % 2 }).collect()
    }

    #[test]
    fn per_fold_class_counts_within_one_of_proportional() {
        let y = labels();
        let f = StratifiedFolds::new(&y, 5, 11).unwrap();
        for c in 0..3 {
            let total = y.iter().filter(|&&l| l == c).count() as f64;
            for fold in 0..5 {
                let (_, test) = f.split(fold);
                let in_fold = test.iter().filter(|&&i| y[i] == c).count() as f64;
                assert!((in_fold - total / 5.0).abs() <= 1.0, "class {c} fold {fold}");
            }
        }
    }

    #[test]
    fn depends_only_on_labels_and_seed() {
        let y = labels();
        assert_eq!(StratifiedFolds::new(&y, 5, 3).unwrap(), StratifiedFolds::new(&y, 5, 3).unwrap());
        assert_ne!(StratifiedFolds::new(&y, 5, 3).unwrap(), StratifiedFolds::new(&y, 5, 4).unwrap());
    }

    #[test]
    fn reduces_k_to_smallest_class() {
        let y = vec![0, 0, 0, 0, 0, 0, 1, 1, 1];
        assert_eq!(StratifiedFolds::new(&y, 5, 0).unwrap().k(), 3);
        assert!(StratifiedFolds::new(&[0, 0, 0, 1], 5, 0).is_err());
        assert!(StratifiedFolds::new(&y, 1, 0).is_err());
    }
}
