//! Adaptive, hyperparameter-free evolutionary search over tree-shaped
//! classification pipelines.
//!
//! The search optimises two objectives at once: cross-validated macro-F1
//! (maximised) and pipeline complexity, counted in nodes (minimised).
//! Population size follows the Fibonacci sequence, the offspring count is
//! the preceding Fibonacci number, and the mutation rate is driven by the
//! spread of fitness values seen so far. A fixed-hyperparameter baseline
//! mode is provided for comparison, together with the evaluation toolkit
//! used to compare the two (hypervolume, frontier averaging and a
//! Wilcoxon signed-rank test across datasets).

pub mod data;
pub mod engine;
pub mod error;
pub mod evaluation;
pub mod learners;
pub mod moo;
pub mod rng;
pub mod search_space;
pub mod stats;

pub use error::{Error, Result};
