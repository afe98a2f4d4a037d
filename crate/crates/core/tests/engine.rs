use std::time::Duration;

use fibevo::data::{generate_synthetic, SyntheticKind, SyntheticSpec};
use fibevo::engine::{self, validate_log, EngineConfig, JsonlSink, Mode, NullSink, RateUpdate, SigmaScope, TickClock};
use fibevo::learners::Dataset;
use fibevo::search_space::SearchSpace;

fn blobs(seed: u64) -> Dataset {
    generate_synthetic(&SyntheticSpec {
        kind: SyntheticKind::Blobs,
        instances: 150,
        features: 4,
        classes: 3,
        noise: 2.0,
        seed,
    })
    .unwrap()
}

fn cfg(seed: u64, ticks: u64) -> EngineConfig {
    EngineConfig { time_budget: Duration::from_millis(ticks), seed, ..EngineConfig::default() }
}

fn tick_run(mode: Mode, data: &Dataset, cfg: &EngineConfig) -> (engine::RunResult, String) {
    let space = SearchSpace::default();
    let clock = TickClock::new(Duration::from_millis(1));
    let mut sink = JsonlSink::new(Vec::new());
    let result = engine::run(mode, &space, data, cfg, &clock, &mut sink).unwrap();
    (result, String::from_utf8(sink.into_inner()).unwrap())
}

#[test]
fn adaptive_logs_validate_and_sink_matches_log() {
    let data = blobs(1);
    for seed in 0..3 {
        let (result, text) = tick_run(Mode::Adaptive, &data, &cfg(seed, 600));
        assert!(result.log.records.len() > 3);
        assert_eq!(validate_log(&result.log), vec![]);
        assert_eq!(text, result.log.to_jsonl());
        assert_eq!(engine::RunLog::parse_jsonl(&text).unwrap(), result.log);
        let first = &result.log.records[0];
        assert_eq!((first.mu, first.lambda, first.survivors), (1, 1, 1));
        assert_eq!(first.initial_complexities, Some(vec![1]));
    }
}

#[test]
fn tick_clock_runs_are_byte_identical() {
    let data = blobs(2);
    let (_, a) = tick_run(Mode::Adaptive, &data, &cfg(7, 500));
    let (_, b) = tick_run(Mode::Adaptive, &data, &cfg(7, 500));
    assert_eq!(a, b);
    let (_, c) = tick_run(Mode::Adaptive, &data, &cfg(8, 500));
    assert_ne!(a, c);
}

#[test]
fn alternative_sigma_and_rate_settings_validate() {
    let data = blobs(3);
    let c = EngineConfig { sigma_scope: SigmaScope::Population, rate_update: RateUpdate::OnStagnation, ..cfg(4, 600) };
    let (result, _) = tick_run(Mode::Adaptive, &data, &c);
    assert_eq!(validate_log(&result.log), vec![]);
}

#[test]
fn fixed_baseline_keeps_its_parameters() {
    let data = blobs(4);
    let (result, _) = tick_run(Mode::Fixed, &data, &cfg(5, 400));
    assert_eq!(validate_log(&result.log), vec![]);
    for r in &result.log.records {
        assert_eq!((r.mu, r.lambda, r.mutation_rate, r.crossover_rate), (100, 100, 0.9, 0.1));
    }
    let init = result.log.records[0].initial_complexities.as_ref().unwrap();
    assert_eq!(init.len(), 100);
    assert!(init.iter().all(|c| (1..=3).contains(c)));
}

#[test]
fn zero_eval_timeout_finishes_with_empty_front() {
    let data = blobs(5);
    let c = EngineConfig { eval_timeout: Duration::ZERO, ..cfg(1, 300) };
    let (result, _) = tick_run(Mode::Adaptive, &data, &c);
    assert!(result.front.is_empty());
    assert!(result.log.records.iter().all(|r| r.best_score.is_none()));
}

#[test]
fn wall_clock_run_stops_near_budget() {
    let data = blobs(6);
    let c = EngineConfig { time_budget: Duration::from_millis(800), ..EngineConfig::default() };
    let start = std::time::Instant::now();
    let result = engine::run_adaptive(&SearchSpace::default(), &data, &c, &mut NullSink).unwrap();
    assert!(start.elapsed() < Duration::from_secs(3));
    assert_eq!(validate_log(&result.log), vec![]);
}

#[test]
fn parallel_workers_produce_valid_logs() {
    let data = blobs(7);
    let c = EngineConfig { workers: 3, time_budget: Duration::from_millis(700), ..EngineConfig::default() };
    let result = engine::run_adaptive(&SearchSpace::default(), &data, &c, &mut NullSink).unwrap();
    assert_eq!(validate_log(&result.log), vec![]);
}
