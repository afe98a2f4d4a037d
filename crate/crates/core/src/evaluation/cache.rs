use std::collections::HashMap;
use std::io::{BufRead, Write};
use std::sync::RwLock;

use super::FitnessVector;
use crate::search_space::{CanonicalKey, KeySet};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum FailureReason {
    Timeout,
    Error(String),
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FailureReason::Timeout => f.write_str("timeout"),
            FailureReason::Error(m) => write!(f, "error: {m}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Fitness(FitnessVector),
    Failed(FailureReason),
}

impl Outcome {
    pub fn fitness(&self) -> Option<FitnessVector> {
        match self {
            Outcome::Fitness(f) => Some(*f),
            Outcome::Failed(_) => None,
        }
    }
}

/// Insert-once map from canonical key to evaluation outcome. Failures are
/// cached like successes.
#[derive(Debug, Default)]
pub struct EvaluationCache {
    map: RwLock<HashMap<CanonicalKey, Outcome>>,
}

impl EvaluationCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, key: &CanonicalKey) -> Option<Outcome> {
        self.map.read().expect("cache lock").get(key).cloned()
    }

    pub fn contains(&self, key: &CanonicalKey) -> bool {
        self.map.read().expect("cache lock").contains_key(key)
    }

    /// Stores `outcome` unless the key is already present, and returns the
    /// stored outcome either way.
    pub fn insert_once(&self, key: CanonicalKey, outcome: Outcome) -> Outcome {
        self.map.write().expect("cache lock").entry(key).or_insert(outcome).clone()
    }

    pub fn len(&self) -> usize {
        self.map.read().expect("cache lock").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Writes one record per line, sorted by key:
    /// `<key>\t<score>\t<complexity>` or `<key>\tFAILED\t<reason>`.
    pub fn save<W: Write>(&self, mut out: W) -> Result<()> {
        let map = self.map.read().expect("cache lock");
        let mut entries: Vec<_> = map.iter().collect();
        entries.sort_by(|a, b| a.0.cmp(b.0));
        for (key, outcome) in entries {
            match outcome {
                Outcome::Fitness(f) => writeln!(out, "{key}\t{}\t{}", f.score, f.complexity)?,
                Outcome::Failed(r) => {
                    let reason = r.to_string().replace(['\t', '\n', '\r'], " ");
                    writeln!(out, "{key}\tFAILED\t{reason}")?
                }
            }
        }
        out.flush()?;
        Ok(())
    }

    pub fn load<R: BufRead>(input: R) -> Result<Self> {
        let cache = EvaluationCache::new();
        for (n, line) in input.lines().enumerate() {
            let line = line?;
            if line.is_empty() {
                continue;
            }
            let bad = |m: &str| Error::Config(format!("cache line {}: {m}", n + 1));
            let mut parts = line.splitn(3, '\t');
            let (Some(key), Some(a), Some(b)) = (parts.next(), parts.next(), parts.next()) else {
                return Err(bad("expected three tab-separated fields"));
            };
            let outcome = if a == "FAILED" {
                Outcome::Failed(match b {
                    "timeout" => FailureReason::Timeout,
                    other => FailureReason::Error(other.strip_prefix("error: ").unwrap_or(other).to_string()),
                })
            } else {
                let score: f64 = a.parse().map_err(|_| bad("bad score"))?;
                let complexity: usize = b.parse().map_err(|_| bad("bad complexity"))?;
                Outcome::Fitness(FitnessVector::new(score, complexity))
            };
            cache.insert_once(CanonicalKey::from_raw(key), outcome);
        }
        Ok(cache)
    }
}

impl KeySet for EvaluationCache {
    fn contains_key(&self, key: &CanonicalKey) -> bool {
        self.contains(key)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn first_insert_wins() {
        let c = EvaluationCache::new();
        let k = CanonicalKey::from_raw("A");
        let first = Outcome::Fitness(FitnessVector::new(0.5, 1));
        assert_eq!(c.insert_once(k.clone(), first.clone()), first);
        assert_eq!(c.insert_once(k.clone(), Outcome::Failed(FailureReason::Timeout)), first);
        assert_eq!(c.len(), 1);
    }

    #[test]
    fn persistence_round_trip() {
        let c = EvaluationCache::new();
        c.insert_once(CanonicalKey::from_raw("B{x=1}"), Outcome::Fitness(FitnessVector::new(0.1 + 0.2, 3)));
        c.insert_once(CanonicalKey::from_raw("A"), Outcome::Failed(FailureReason::Timeout));
        c.insert_once(CanonicalKey::from_raw("C"), Outcome::Failed(FailureReason::Error("bad\tthing".into())));
        let mut buf = Vec::new();
        c.save(&mut buf).unwrap();
        let text = String::from_utf8(buf.clone()).unwrap();
        assert_eq!(
            text,
            "A\tFAILED\ttimeout\nB{x=1}\t0.30000000000000004\t3\nC\tFAILED\terror: bad thing\n"
        );
        let back = EvaluationCache::load(&buf[..]).unwrap();
        assert_eq!(back.len(), 3);
        assert_eq!(
            back.get(&CanonicalKey::from_raw("B{x=1}")),
            Some(Outcome::Fitness(FitnessVector::new(0.1 + 0.2, 3)))
        );
    }
}
