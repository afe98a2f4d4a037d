//! The evolutionary loop: adaptive population sizing on the Fibonacci
//! schedule, fitness-spread driven variation rates, and the fixed baseline.

mod config;
mod offspring;
mod rates;
mod run;
mod runlog;
pub mod schedule;
mod validate;

pub use config::{Clock, ConfigRecord, EngineConfig, Mode, RateUpdate, SigmaScope, TickClock, WallClock};
pub use offspring::{generate_offspring, Individual, OffspringBatch, MAX_ATTEMPTS};
pub use rates::{mutation_rate, population_std, progress, update_population_size, BestPair, Progress};
pub use run::{run, run_adaptive, run_fixed_baseline, RunResult, FIXED_CROSSOVER_RATE, FIXED_MUTATION_RATE, FIXED_OFFSPRING, FIXED_POPULATION};
pub use runlog::{mask_elapsed, GenerationRecord, JsonlSink, LogSink, NullSink, RunHeader, RunLog};
pub use validate::{validate_log, Violation};
