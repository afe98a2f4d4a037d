//! Cross-validated fitness of a pipeline, and the evaluation cache that
//! guarantees no pipeline is ever scored twice.

mod cache;
mod evaluator;
mod folds;
mod metrics;

use serde::{Deserialize, Serialize};

pub use cache::{EvaluationCache, FailureReason, Outcome};
pub use evaluator::{Evaluator, EvaluatorStats};
pub use folds::StratifiedFolds;
pub use metrics::{accuracy, macro_f1, Metric};

/// Two objectives: `score` in [0, 1] to maximise and `complexity` (node
/// count, at least 1) to minimise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitnessVector {
    pub score: f64,
    pub complexity: usize,
}

impl FitnessVector {
    pub fn new(score: f64, complexity: usize) -> Self {
        FitnessVector { score, complexity }
    }
}
