//! Consistency checks for run logs.

use super::config::{Mode, RateUpdate};
use super::rates::{self, Progress};
use super::run::{FIXED_CROSSOVER_RATE, FIXED_MUTATION_RATE, FIXED_OFFSPRING, FIXED_POPULATION};
use super::runlog::RunLog;
use super::schedule;
use crate::moo::dominates;

#[derive(Clone, Debug, PartialEq)]
pub struct Violation {
    pub gen: usize,
    pub rule: &'static str,
    pub detail: String,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "gen {}: {}: {}", self.gen, self.rule, self.detail)
    }
}

/// Checks every invariant a well-formed log satisfies. An empty result
/// means the log is consistent.
pub fn validate_log(log: &RunLog) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut fail = |gen, rule, detail: String| out.push(Violation { gen, rule, detail });
    let mode = log.header.mode;
    let every_gen = log.header.config.rate_update == RateUpdate::EveryGen;

    if log.records.is_empty() {
        fail(0, "non-empty", "log has no generation records".into());
    }
    let mut running_max = 0.0f64;
    for (i, r) in log.records.iter().enumerate() {
        let g = r.gen;
        if g != i {
            fail(g, "gen-sequence", format!("record {i} has gen {g}"));
        }
        if !(0.0..=1.0).contains(&r.mutation_rate) {
            fail(g, "rate-range", format!("mutation rate {}", r.mutation_rate));
        }
        let sum_ok = match mode {
            Mode::Adaptive => r.crossover_rate == 1.0 - r.mutation_rate,
            Mode::Fixed => (r.crossover_rate - (1.0 - r.mutation_rate)).abs() <= 1e-12,
        };
        if !sum_ok {
            fail(g, "rates-sum", format!("m={} c={}", r.mutation_rate, r.crossover_rate));
        }
        running_max = running_max.max(r.sigma);
        if r.max_sigma != running_max {
            fail(g, "max-sigma", format!("logged {} but running max is {running_max}", r.max_sigma));
        }
        if r.cache_hits != 0 {
            fail(g, "no-reevaluation", format!("{} cache hits", r.cache_hits));
        }
        if r.evaluations_total != r.cache_size as u64 {
            fail(g, "evaluations-cached", format!("{} evaluations, cache holds {}", r.evaluations_total, r.cache_size));
        }
        if r.survivors > r.mu {
            fail(g, "survivors", format!("{} survivors for mu {}", r.survivors, r.mu));
        }
        if r.survivors != r.mu.min(r.candidates) {
            fail(g, "survivors", format!("{} survivors of {} candidates for mu {}", r.survivors, r.candidates, r.mu));
        }
        let front: Vec<_> = r.front.iter().map(|p| p.fitness()).collect();
        if front.iter().any(|a| front.iter().any(|b| dominates(b, a))) {
            fail(g, "front-nondominated", "a front point is dominated".into());
        }
        if let (Some(s), Some(top)) = (r.best_score, r.front.first()) {
            if top.score != s || Some(top.complexity) != r.best_complexity {
                fail(g, "front-best", "front head differs from best pair".into());
            }
        }
        match mode {
            Mode::Adaptive => {
                if !schedule::is_on_schedule(r.mu) {
                    fail(g, "mu-schedule", format!("mu {} is off the schedule", r.mu));
                } else if schedule::offspring_size(r.mu).ok() != Some(r.lambda) {
                    fail(g, "lambda", format!("lambda {} for mu {}", r.lambda, r.mu));
                }
                if every_gen && r.mutation_rate != rates::mutation_rate(r.sigma, r.max_sigma) {
                    fail(
                        g,
                        "mutation-rate",
                        format!("logged {} for sigma {} max {}", r.mutation_rate, r.sigma, r.max_sigma),
                    );
                }
            }
            Mode::Fixed => {
                if r.mu != FIXED_POPULATION
                    || r.lambda != FIXED_OFFSPRING
                    || r.mutation_rate != FIXED_MUTATION_RATE
                    || r.crossover_rate != FIXED_CROSSOVER_RATE
                {
                    fail(
                        g,
                        "fixed-parameters",
                        format!("mu {} lambda {} m {} c {}", r.mu, r.lambda, r.mutation_rate, r.crossover_rate),
                    );
                }
            }
        }
        if i == 0 {
            if r.gen == 0 && r.progress.is_some() {
                fail(g, "progress", "initial record carries a progress value".into());
            }
            continue;
        }
        let p = &log.records[i - 1];
        match (p.best_score, r.best_score) {
            (Some(a), Some(b)) if b < a => fail(g, "elitism", format!("best score fell from {a} to {b}")),
            (Some(_), None) => fail(g, "elitism", "best individual lost".into()),
            _ => {}
        }
        if r.offspring_failed > r.offspring {
            fail(g, "offspring", format!("{} failed of {}", r.offspring_failed, r.offspring));
        }
        if r.offspring > p.lambda {
            fail(g, "offspring", format!("{} offspring, lambda was {}", r.offspring, p.lambda));
        }
        if r.mutations + r.crossovers + r.stumps != r.offspring {
            fail(g, "offspring-origin", format!("{}+{}+{} != {}", r.mutations, r.crossovers, r.stumps, r.offspring));
        }
        if r.candidates != p.survivors + r.offspring - r.offspring_failed {
            fail(g, "candidates", format!("{} candidates from {} + {} valid", r.candidates, p.survivors, r.offspring - r.offspring_failed));
        }
        if mode == Mode::Adaptive {
            let Some(progress) = r.progress else {
                fail(g, "progress", "missing".into());
                continue;
            };
            let expected = rates::update_population_size(p.mu, progress).ok();
            if expected != Some(r.mu) {
                fail(g, "mu-update", format!("{:?} from mu {} gave {}", progress, p.mu, r.mu));
            }
            if progress == Progress::Neither && r.survivors == r.candidates && r.mu != p.mu + p.lambda {
                fail(g, "mu-growth", format!("mu {} != {} + {}", r.mu, p.mu, p.lambda));
            }
            if !every_gen && progress != Progress::Neither && r.mutation_rate != p.mutation_rate {
                fail(g, "mutation-rate", "rate changed without stagnation".into());
            }
        }
    }
    out
}
