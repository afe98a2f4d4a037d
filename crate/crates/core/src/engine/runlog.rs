//! Per-run JSON-lines log: one header line, then one line per generation.

use std::io::Write;

use serde::{Deserialize, Serialize};

use super::config::{ConfigRecord, Mode};
use super::rates::Progress;
use crate::moo::{FrontPoint, ParetoFront};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunHeader {
    pub kind: String,
    pub mode: Mode,
    pub seed: u64,
    pub config: ConfigRecord,
    pub dataset_id: String,
    pub dataset_digest: String,
}

/// State after a generation. `mu`, `lambda` and the two rates are the values
/// the *next* generation will use; record 0 describes the initial
/// population.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GenerationRecord {
    pub kind: String,
    pub gen: usize,
    pub mu: usize,
    pub lambda: usize,
    pub mutation_rate: f64,
    pub crossover_rate: f64,
    pub sigma: f64,
    pub max_sigma: f64,
    pub best_score: Option<f64>,
    pub best_complexity: Option<usize>,
    pub evaluations_total: u64,
    pub cache_size: usize,
    pub cache_hits: u64,
    pub elapsed_ms: u64,
    /// Trees produced this generation (the initial population for gen 0).
    pub offspring: usize,
    pub offspring_failed: usize,
    pub mutations: usize,
    pub crossovers: usize,
    pub stumps: usize,
    /// Population plus valid offspring entering survival selection.
    pub candidates: usize,
    pub survivors: usize,
    pub progress: Option<Progress>,
    pub front: Vec<FrontPoint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub initial_complexities: Option<Vec<usize>>,
}

impl GenerationRecord {
    pub fn front(&self) -> ParetoFront {
        ParetoFront::from_points(self.front.iter().map(|p| (p.fitness(), p.key.clone())))
    }
}

pub const HEADER_KIND: &str = "header";
pub const GENERATION_KIND: &str = "generation";

#[derive(Clone, Debug, PartialEq)]
pub struct RunLog {
    pub header: RunHeader,
    pub records: Vec<GenerationRecord>,
}

impl RunLog {
    pub fn to_jsonl(&self) -> String {
        let mut out = serde_json::to_string(&self.header).expect("header serialises");
        out.push('\n');
        for r in &self.records {
            out.push_str(&serde_json::to_string(r).expect("record serialises"));
            out.push('\n');
        }
        out
    }

    /// Parses a log. Blank lines are ignored; every other line must be a
    /// complete record.
    pub fn parse_jsonl(text: &str) -> Result<Self> {
        let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
        let (_, first) = lines.next().ok_or(Error::RunLog { line: 1, message: "empty log".into() })?;
        let header: RunHeader =
            serde_json::from_str(first).map_err(|e| Error::RunLog { line: 1, message: e.to_string() })?;
        if header.kind != HEADER_KIND {
            return Err(Error::RunLog { line: 1, message: format!("expected kind {HEADER_KIND:?}") });
        }
        let mut records = Vec::new();
        for (n, line) in lines {
            let r: GenerationRecord =
                serde_json::from_str(line).map_err(|e| Error::RunLog { line: n + 1, message: e.to_string() })?;
            if r.kind != GENERATION_KIND {
                return Err(Error::RunLog { line: n + 1, message: format!("expected kind {GENERATION_KIND:?}") });
            }
            records.push(r);
        }
        Ok(RunLog { header, records })
    }

    pub fn read(path: &std::path::Path) -> Result<Self> {
        Self::parse_jsonl(&std::fs::read_to_string(path)?)
    }

    pub fn final_front(&self) -> ParetoFront {
        self.records.last().map(GenerationRecord::front).unwrap_or_default()
    }
}

/// Re-serialises each line with its `elapsed_ms` field removed, so logs of
/// identical runs compare equal byte for byte.
pub fn mask_elapsed(jsonl: &str) -> Result<String> {
    let mut out = String::with_capacity(jsonl.len());
    for line in jsonl.lines().filter(|l| !l.trim().is_empty()) {
        let mut v: serde_json::Value = serde_json::from_str(line)?;
        if let Some(obj) = v.as_object_mut() {
            obj.remove("elapsed_ms");
        }
        out.push_str(&serde_json::to_string(&v)?);
        out.push('\n');
    }
    Ok(out)
}

/// Receives log lines as the run progresses.
pub trait LogSink {
    fn header(&mut self, header: &RunHeader) -> Result<()>;
    fn record(&mut self, record: &GenerationRecord) -> Result<()>;
}

/// Discards everything.
pub struct NullSink;

impl LogSink for NullSink {
    fn header(&mut self, _: &RunHeader) -> Result<()> {
        Ok(())
    }

    fn record(&mut self, _: &GenerationRecord) -> Result<()> {
        Ok(())
    }
}

/// Writes one JSON object per line and flushes after each, so a crash
/// leaves a parseable prefix.
pub struct JsonlSink<W: Write> {
    out: W,
}

impl<W: Write> JsonlSink<W> {
    pub fn new(out: W) -> Self {
        JsonlSink { out }
    }

    pub fn into_inner(self) -> W {
        self.out
    }

    fn line<T: Serialize>(&mut self, value: &T) -> Result<()> {
        serde_json::to_writer(&mut self.out, value)?;
        self.out.write_all(b"\n")?;
        self.out.flush()?;
        Ok(())
    }
}

impl<W: Write> LogSink for JsonlSink<W> {
    fn header(&mut self, header: &RunHeader) -> Result<()> {
        self.line(header)
    }

    fn record(&mut self, record: &GenerationRecord) -> Result<()> {
        self.line(record)
    }
}
