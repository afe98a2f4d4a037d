use std::sync::atomic::{AtomicU64, Ordering};
use std::time::{Duration, Instant};

use super::{EvaluationCache, FailureReason, FitnessVector, Metric, Outcome, StratifiedFolds};
use crate::learners::{fit_pipeline, Dataset, Deadline, FitError, Matrix};
use crate::search_space::{CanonicalKey, PipelineTree, SearchSpace};
use crate::Result;

struct Fold {
    train: Dataset,
    test: Matrix,
    test_labels: Vec<usize>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EvaluatorStats {
    /// Evaluations actually computed (cache misses).
    pub computed: u64,
    pub cache_hits: u64,
    /// Individual primitive fits performed across all folds.
    pub model_fits: u64,
}

/// Scores pipelines by k-fold cross-validation on one fixed split, shared
/// by every pipeline of a run.
pub struct Evaluator<'a> {
    space: &'a SearchSpace,
    folds: Vec<Fold>,
    metric: Metric,
    timeout: Duration,
    cache: EvaluationCache,
    computed: AtomicU64,
    hits: AtomicU64,
    fits: AtomicU64,
}

impl<'a> Evaluator<'a> {
    pub fn new(
        space: &'a SearchSpace,
        data: &Dataset,
        cv_folds: usize,
        metric: Metric,
        timeout: Duration,
        seed: u64,
    ) -> Result<Self> {
        let split = StratifiedFolds::new(&data.labels, cv_folds, seed)?;
        let folds = (0..split.k())
            .map(|f| {
                let (train, test) = split.split(f);
                Fold {
                    train: Dataset {
                        features: data.features.select_rows(&train),
                        labels: train.iter().map(|&i| data.labels[i]).collect(),
                        n_classes: data.n_classes,
                    },
                    test: data.features.select_rows(&test),
                    test_labels: test.iter().map(|&i| data.labels[i]).collect(),
                }
            })
            .collect();
        Ok(Evaluator {
            space,
            folds,
            metric,
            timeout,
            cache: EvaluationCache::new(),
            computed: AtomicU64::new(0),
            hits: AtomicU64::new(0),
            fits: AtomicU64::new(0),
        })
    }

    pub fn k(&self) -> usize {
        self.folds.len()
    }

    pub fn cache(&self) -> &EvaluationCache {
        &self.cache
    }

    pub fn stats(&self) -> EvaluatorStats {
        EvaluatorStats {
            computed: self.computed.load(Ordering::Relaxed),
            cache_hits: self.hits.load(Ordering::Relaxed),
            model_fits: self.fits.load(Ordering::Relaxed),
        }
    }

    /// Returns the cached outcome for the tree's key, or computes, caches and
    /// returns it.
    pub fn evaluate(&self, tree: &PipelineTree) -> Outcome {
        self.evaluate_keyed(self.space.key(tree), tree)
    }

    pub fn evaluate_keyed(&self, key: CanonicalKey, tree: &PipelineTree) -> Outcome {
        if let Some(hit) = self.cache.get(&key) {
            self.hits.fetch_add(1, Ordering::Relaxed);
            return hit;
        }
        let outcome = self.cross_validate(tree);
        self.computed.fetch_add(1, Ordering::Relaxed);
        self.cache.insert_once(key, outcome)
    }

    fn cross_validate(&self, tree: &PipelineTree) -> Outcome {
        let start = Instant::now();
        if self.timeout.is_zero() {
            return Outcome::Failed(FailureReason::Timeout);
        }
        let deadline = Deadline::at(start + self.timeout);
        let mut total = 0.0;
        for fold in &self.folds {
            let fitted = match fit_pipeline(&self.space.registry, tree, &fold.train, &deadline) {
                Ok(f) => f,
                Err(FitError::Timeout) => return Outcome::Failed(FailureReason::Timeout),
                Err(FitError::Numeric(m)) => return Outcome::Failed(FailureReason::Error(m)),
            };
            self.fits.fetch_add(tree.complexity() as u64, Ordering::Relaxed);
            let predicted = fitted.predict(&fold.test);
            match self.metric.score(&predicted, &fold.test_labels) {
                Ok(s) if s.is_finite() => total += s,
                Ok(_) => return Outcome::Failed(FailureReason::Error("non-finite fold score".into())),
                Err(e) => return Outcome::Failed(FailureReason::Error(e.to_string())),
            }
        }
        if start.elapsed() > self.timeout {
            return Outcome::Failed(FailureReason::Timeout);
        }
        let score = (total / self.folds.len() as f64).clamp(0.0, 1.0);
        Outcome::Fitness(FitnessVector::new(score, tree.complexity()))
    }
}
