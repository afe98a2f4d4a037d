//! Native classifiers and feature transformers, and execution of a
//! pipeline tree on a train/test split.

mod classifiers;
mod dataset;
mod pipeline;
mod preprocess;

use std::time::Instant;

pub use classifiers::FittedClassifier;
pub use dataset::{Dataset, Matrix};
pub use pipeline::{fit_pipeline, predict_pipeline, FittedNode, FittedPipeline};
pub use preprocess::FittedTransform;

use crate::search_space::{ParamValue, PrimitiveSpec};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum FitError {
    Timeout,
    Numeric(String),
}

impl std::fmt::Display for FitError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitError::Timeout => f.write_str("timeout"),
            FitError::Numeric(m) => write!(f, "error: {m}"),
        }
    }
}

/// Optional wall-clock cut-off polled inside long-running fits.
#[derive(Clone, Copy, Debug, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub fn none() -> Self {
        Deadline(None)
    }

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|d| Instant::now() >= d)
    }

    pub fn check(&self) -> Result<(), FitError> {
        if self.expired() {
            Err(FitError::Timeout)
        } else {
            Ok(())
        }
    }
}

/// Read access to a node's hyperparameters by name.
#[derive(Clone, Copy, Debug)]
pub struct Hyper<'a> {
    spec: &'a PrimitiveSpec,
    params: &'a [usize],
}

impl<'a> Hyper<'a> {
    pub fn new(spec: &'a PrimitiveSpec, params: &'a [usize]) -> Self {
        Hyper { spec, params }
    }

    pub fn get(&self, name: &str) -> Option<ParamValue> {
        let j = self.spec.param_index(name)?;
        Some(self.spec.params[j].values[self.params[j]])
    }

    pub fn int_or(&self, name: &str, default: i64) -> i64 {
        self.get(name).map_or(default, ParamValue::as_i64)
    }

    pub fn real_or(&self, name: &str, default: f64) -> f64 {
        self.get(name).map_or(default, ParamValue::as_f64)
    }
}
