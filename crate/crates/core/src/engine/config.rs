use std::time::{Duration, Instant};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};

use crate::evaluation::Metric;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Adaptive,
    Fixed,
}

/// Which scores the per-generation standard deviation is taken over.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SigmaScope {
    /// Current population plus this generation's valid offspring.
    #[default]
    All,
    /// Current population only.
    Population,
}

/// When the adaptive mutation rate is recomputed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RateUpdate {
    #[default]
    EveryGen,
    OnStagnation,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EngineConfig {
    pub time_budget: Duration,
    pub cv_folds: usize,
    pub metric: Metric,
    pub seed: u64,
    pub workers: usize,
    pub eval_timeout: Duration,
    pub sigma_scope: SigmaScope,
    pub rate_update: RateUpdate,
    /// Free-form dataset name recorded in the log header; reports group runs by it.
    pub dataset_id: String,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            time_budget: Duration::from_secs(60),
            cv_folds: 5,
            metric: Metric::F1Macro,
            seed: 0,
            workers: 1,
            eval_timeout: Duration::from_secs(10),
            sigma_scope: SigmaScope::All,
            rate_update: RateUpdate::EveryGen,
            dataset_id: "dataset".into(),
        }
    }
}

/// Serialised form of [`EngineConfig`] stored in the run log header.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigRecord {
    pub time_budget_s: f64,
    pub cv_folds: usize,
    pub metric: Metric,
    pub workers: usize,
    pub eval_timeout_s: f64,
    pub sigma_scope: SigmaScope,
    pub rate_update: RateUpdate,
}

impl From<&EngineConfig> for ConfigRecord {
    fn from(c: &EngineConfig) -> Self {
        ConfigRecord {
            time_budget_s: c.time_budget.as_secs_f64(),
            cv_folds: c.cv_folds,
            metric: c.metric,
            workers: c.workers,
            eval_timeout_s: c.eval_timeout.as_secs_f64(),
            sigma_scope: c.sigma_scope,
            rate_update: c.rate_update,
        }
    }
}

/// Source of elapsed time for the run budget.
pub trait Clock: Sync {
    fn elapsed(&self) -> Duration;
}

pub struct WallClock(Instant);

impl WallClock {
    pub fn start() -> Self {
        WallClock(Instant::now())
    }
}

impl Clock for WallClock {
    fn elapsed(&self) -> Duration {
        self.0.elapsed()
    }
}

/// Virtual clock that advances by a fixed step on every query. Since the
/// engine queries it at deterministic points, a single-worker run under a
/// `TickClock` has a reproducible length.
pub struct TickClock {
    step: Duration,
    ticks: AtomicU64,
}

impl TickClock {
    pub fn new(step: Duration) -> Self {
        TickClock { step, ticks: AtomicU64::new(0) }
    }
}

impl Clock for TickClock {
    fn elapsed(&self) -> Duration {
        let n = self.ticks.fetch_add(1, Ordering::Relaxed);
        self.step * n as u32
    }
}
