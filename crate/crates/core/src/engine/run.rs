use std::collections::HashSet;

use rand::Rng;
use rayon::prelude::*;

use super::config::{Clock, ConfigRecord, EngineConfig, Mode, RateUpdate, SigmaScope};
use super::offspring::{generate_offspring, Individual};
use super::rates::{self, BestPair, Progress};
use super::runlog::{GenerationRecord, LogSink, RunHeader, RunLog, GENERATION_KIND, HEADER_KIND};
use super::schedule;
use crate::evaluation::{Evaluator, EvaluatorStats, FitnessVector, Outcome};
use crate::learners::Dataset;
use crate::moo::{nsga2_select, ParetoFront};
use crate::rng::{stream, Stream};
use crate::search_space::{CanonicalKey, PipelineTree, SearchSpace};
use crate::{Error, Result};

pub const FIXED_POPULATION: usize = 100;
pub const FIXED_OFFSPRING: usize = 100;
pub const FIXED_MUTATION_RATE: f64 = 0.9;
pub const FIXED_CROSSOVER_RATE: f64 = 0.1;
const FIXED_INIT_ATTEMPTS: usize = 10_000;

#[derive(Debug)]
pub struct RunResult {
    pub population: Vec<Individual>,
    pub front: ParetoFront,
    pub log: RunLog,
    pub stats: EvaluatorStats,
}

/// Adaptive run against the wall clock.
pub fn run_adaptive(space: &SearchSpace, data: &Dataset, cfg: &EngineConfig, sink: &mut dyn LogSink) -> Result<RunResult> {
    run(Mode::Adaptive, space, data, cfg, &super::WallClock::start(), sink)
}

/// Fixed-parameter baseline (mu = lambda = 100, mutation 0.9, crossover 0.1)
/// against the
/// wall clock.
pub fn run_fixed_baseline(
    space: &SearchSpace,
    data: &Dataset,
    cfg: &EngineConfig,
    sink: &mut dyn LogSink,
) -> Result<RunResult> {
    run(Mode::Fixed, space, data, cfg, &super::WallClock::start(), sink)
}

fn best_pair(individuals: &[Individual]) -> Option<BestPair> {
    let best = individuals.iter().map(|i| i.fitness.score).fold(f64::NEG_INFINITY, f64::max);
    individuals
        .iter()
        .filter(|i| i.fitness.score == best)
        .map(|i| i.fitness.complexity)
        .min()
        .map(|c| (best, c))
}

fn front_of(individuals: &[Individual]) -> ParetoFront {
    ParetoFront::from_points(individuals.iter().map(|i| (i.fitness, i.key.clone())))
}

/// Evaluates in creation order. With a pool the work is spread over its
/// threads but results are still returned in input order. `None` if the
/// budget ran out before every tree was scored.
fn evaluate_batch(
    evaluator: &Evaluator<'_>,
    batch: &[(CanonicalKey, PipelineTree)],
    pool: Option<&rayon::ThreadPool>,
    stop: &(dyn Fn() -> bool + Sync),
) -> Option<Vec<Outcome>> {
    let one = |(k, t): &(CanonicalKey, PipelineTree)| (!stop()).then(|| evaluator.evaluate_keyed(k.clone(), t));
    match pool {
        Some(pool) => pool.install(|| batch.par_iter().map(one).collect()),
        None => batch.iter().map(one).collect(),
    }
}

struct Tally {
    offspring: usize,
    failed: usize,
    mutations: usize,
    crossovers: usize,
    stumps: usize,
    candidates: usize,
}

/// Runs one search. The wall-clock budget is checked before every offspring
/// draw and every evaluation; a generation interrupted by the budget is
/// discarded, so the last logged generation is the last complete one.
pub fn run(
    mode: Mode,
    space: &SearchSpace,
    data: &Dataset,
    cfg: &EngineConfig,
    clock: &dyn Clock,
    sink: &mut dyn LogSink,
) -> Result<RunResult> {
    if cfg.workers == 0 {
        return Err(Error::Config("workers must be at least 1".into()));
    }
    let evaluator = Evaluator::new(space, data, cfg.cv_folds, cfg.metric, cfg.eval_timeout, cfg.seed)?;
    let pool = if cfg.workers > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.workers)
                .build()
                .map_err(|e| Error::Config(format!("thread pool: {e}")))?,
        )
    } else {
        None
    };
    let header = RunHeader {
        kind: HEADER_KIND.into(),
        mode,
        seed: cfg.seed,
        config: ConfigRecord::from(cfg),
        dataset_id: cfg.dataset_id.clone(),
        dataset_digest: data.digest(),
    };
    sink.header(&header)?;
    let mut log = RunLog { header, records: Vec::new() };

    let budget = cfg.time_budget;
    let expired = || clock.elapsed() >= budget;
    let never = || false;

    // Initial population.
    let mut init_rng = stream(cfg.seed, Stream::Init);
    let initial = match mode {
        Mode::Adaptive => vec![space.random_stump(&mut init_rng)?],
        Mode::Fixed => distinct_small_trees(space, &mut init_rng, FIXED_POPULATION)?,
    };
    let mut seen: HashSet<CanonicalKey> = HashSet::new();
    let batch: Vec<_> = initial.into_iter().map(|t| (space.key(&t), t)).collect();
    seen.extend(batch.iter().map(|(k, _)| k.clone()));
    let outcomes = evaluate_batch(&evaluator, &batch, pool.as_ref(), &never).expect("initial evaluation is not interrupted");
    let initial_complexities = batch.iter().map(|(_, t)| t.complexity()).collect();
    let mut population: Vec<Individual> = collect_valid(batch.clone(), outcomes);

    let (mut mu, mut lambda) = match mode {
        Mode::Adaptive => (1, schedule::offspring_size(1)?),
        Mode::Fixed => (FIXED_POPULATION, FIXED_OFFSPRING),
    };
    let scores: Vec<f64> = population.iter().map(|i| i.fitness.score).collect();
    let sigma0 = rates::population_std(&scores);
    let mut max_sigma = sigma0;
    let mut mutation = match mode {
        Mode::Adaptive => rates::mutation_rate(sigma0, max_sigma),
        Mode::Fixed => FIXED_MUTATION_RATE,
    };
    let crossover_rate = |m: f64| match mode {
        Mode::Adaptive => 1.0 - m,
        Mode::Fixed => FIXED_CROSSOVER_RATE,
    };
    let mut best = best_pair(&population);
    let tally = Tally {
        offspring: batch.len(),
        failed: batch.len() - population.len(),
        mutations: 0,
        crossovers: 0,
        stumps: 0,
        candidates: population.len(),
    };
    let rec = record(0, mu, lambda, (mutation, crossover_rate(mutation)), sigma0, max_sigma, &population, &evaluator, clock, tally, None, Some(initial_complexities));
    sink.record(&rec)?;
    log.records.push(rec);

    let mut var_rng = stream(cfg.seed, Stream::Variation);
    let mut gen = 0;
    while !expired() {
        let Some(offspring) =
            generate_offspring(space, &population, lambda, crossover_rate(mutation), &mut seen, &mut var_rng, &expired)
        else {
            break;
        };
        let Some(outcomes) = evaluate_batch(&evaluator, &offspring.trees, pool.as_ref(), &expired) else {
            break;
        };
        let produced = offspring.trees.len();
        let children = collect_valid(offspring.trees, outcomes);
        let failed = produced - children.len();

        let pop_scores: Vec<f64> = population.iter().map(|i| i.fitness.score).collect();
        let sigma = match cfg.sigma_scope {
            SigmaScope::Population => rates::population_std(&pop_scores),
            SigmaScope::All => {
                let mut all = pop_scores;
                all.extend(children.iter().map(|i| i.fitness.score));
                rates::population_std(&all)
            }
        };
        max_sigma = max_sigma.max(sigma);

        let mut candidates = population;
        candidates.extend(children);
        let current = best_pair(&candidates);
        let progress = rates::progress(best, current);

        match mode {
            Mode::Adaptive => {
                mu = rates::update_population_size(mu, progress)?;
                lambda = schedule::offspring_size(mu)?;
                if cfg.rate_update == RateUpdate::EveryGen || progress == Progress::Neither {
                    mutation = rates::mutation_rate(sigma, max_sigma);
                }
            }
            Mode::Fixed => {}
        }

        let n_candidates = candidates.len();
        population = survive(candidates, mu);
        best = best_pair(&population);
        gen += 1;
        let tally = Tally {
            offspring: produced,
            failed,
            mutations: offspring.mutations,
            crossovers: offspring.crossovers,
            stumps: offspring.stumps,
            candidates: n_candidates,
        };
        let rec = record(gen, mu, lambda, (mutation, crossover_rate(mutation)), sigma, max_sigma, &population, &evaluator, clock, tally, Some(progress), None);
        sink.record(&rec)?;
        log.records.push(rec);
    }

    Ok(RunResult { front: front_of(&population), population, log, stats: evaluator.stats() })
}

fn collect_valid(batch: Vec<(CanonicalKey, PipelineTree)>, outcomes: Vec<Outcome>) -> Vec<Individual> {
    batch
        .into_iter()
        .zip(outcomes)
        .filter_map(|((key, tree), o)| o.fitness().map(|fitness| Individual { key, tree, fitness }))
        .collect()
}

/// NSGA-II survival. Candidates are first ordered by score descending then
/// complexity ascending (stable), so crowding ties favour the best-scoring
/// individual and the best (score, complexity) pair always survives.
fn survive(mut candidates: Vec<Individual>, target: usize) -> Vec<Individual> {
    candidates.sort_by(|a, b| {
        b.fitness.score.total_cmp(&a.fitness.score).then(a.fitness.complexity.cmp(&b.fitness.complexity))
    });
    let fit: Vec<FitnessVector> = candidates.iter().map(|i| i.fitness).collect();
    let keep = nsga2_select(&fit, target);
    let mut slots: Vec<Option<Individual>> = candidates.into_iter().map(Some).collect();
    keep.into_iter().map(|i| slots[i].take().expect("indices are distinct")).collect()
}

fn distinct_small_trees<R: Rng + ?Sized>(space: &SearchSpace, rng: &mut R, n: usize) -> Result<Vec<PipelineTree>> {
    let mut keys = HashSet::new();
    let mut out = Vec::with_capacity(n);
    for _ in 0..FIXED_INIT_ATTEMPTS {
        if out.len() == n {
            break;
        }
        let t = space.random_small_tree(rng, 1, 3)?;
        if keys.insert(space.key(&t)) {
            out.push(t);
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn record(
    gen: usize,
    mu: usize,
    lambda: usize,
    (mutation, crossover): (f64, f64),
    sigma: f64,
    max_sigma: f64,
    population: &[Individual],
    evaluator: &Evaluator<'_>,
    clock: &dyn Clock,
    t: Tally,
    progress: Option<Progress>,
    initial_complexities: Option<Vec<usize>>,
) -> GenerationRecord {
    let stats = evaluator.stats();
    let best = best_pair(population);
    GenerationRecord {
        kind: GENERATION_KIND.into(),
        gen,
        mu,
        lambda,
        mutation_rate: mutation,
        crossover_rate: crossover,
        sigma,
        max_sigma,
        best_score: best.map(|b| b.0),
        best_complexity: best.map(|b| b.1),
        evaluations_total: stats.computed,
        cache_size: evaluator.cache().len(),
        cache_hits: stats.cache_hits,
        elapsed_ms: clock.elapsed().as_millis() as u64,
        offspring: t.offspring,
        offspring_failed: t.failed,
        mutations: t.mutations,
        crossovers: t.crossovers,
        stumps: t.stumps,
        candidates: t.candidates,
        survivors: population.len(),
        progress,
        front: front_of(population).points().to_vec(),
        initial_complexities,
    }
}
