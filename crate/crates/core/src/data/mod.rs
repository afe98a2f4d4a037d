//! Dataset ingestion from CSV and seeded synthetic generators.

use std::collections::HashMap;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::learners::{Dataset, Matrix};
use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// Reads a headed CSV. Every non-label column becomes a feature in header
/// order; labels are factorised to `0..K` by first appearance. The label
/// column is named by `label_col` (a header name, or a 0-based index) and
/// defaults to the last column.
pub fn load_csv(path: &Path, label_col: Option<&str>) -> Result<Dataset> {
    let err = |message: String| Error::Data { path: path.to_path_buf(), message };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| err(e.to_string()))?;
    let headers: Vec<String> = reader.headers().map_err(|e| err(e.to_string()))?.iter().map(String::from).collect();
    if headers.len() < 2 {
        return Err(err("need at least one feature column and a label column".into()));
    }
    let label = match label_col {
        None => headers.len() - 1,
        Some(name) => match headers.iter().position(|h| h == name) {
            Some(i) => i,
            None => name
                .parse::<usize>()
                .ok()
                .filter(|&i| i < headers.len())
                .ok_or_else(|| err(format!("label column {name:?} not found")))?,
        },
    };

    let mut data = Vec::new();
    let mut labels = Vec::new();
    let mut classes: HashMap<String, usize> = HashMap::new();
    let mut rows = 0;
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| err(format!("row {row}: {e}")))?;
        for (j, cell) in record.iter().enumerate() {
            let column = &headers[j];
            if cell.is_empty() {
                return Err(err(format!("row {row}, column {column:?}: missing value")));
            }
            if j == label {
                let next = classes.len();
                labels.push(*classes.entry(cell.to_string()).or_insert(next));
            } else {
                let v: f64 = cell
                    .parse()
                    .map_err(|_| err(format!("row {row}, column {column:?}: {cell:?} is not numeric")))?;
                if !v.is_finite() {
                    return Err(err(format!("row {row}, column {column:?}: non-finite value")));
                }
                data.push(v);
            }
        }
        rows += 1;
    }
    if classes.len() < 2 {
        return Err(err(format!("label column {:?} has {} class(es); need at least 2", headers[label], classes.len())));
    }
    let features = Matrix::new(rows, headers.len() - 1, data)?;
    Dataset::new(features, labels).map_err(|e| err(e.to_string()))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SyntheticKind {
    Blobs,
    Xor,
    Spirals,
}

impl std::str::FromStr for SyntheticKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "blobs" => Ok(SyntheticKind::Blobs),
            "xor" => Ok(SyntheticKind::Xor),
            "spirals" => Ok(SyntheticKind::Spirals),
            other => Err(Error::Config(format!("unknown generator {other:?} (blobs, xor, spirals)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SyntheticSpec {
    pub kind: SyntheticKind,
    pub instances: usize,
    pub features: usize,
    pub classes: usize,
    pub noise: f64,
    pub seed: u64,
}

/// Half-width of the box blob centres are drawn from.
const BLOB_BOX: f64 = 10.0;
/// Minimum distance between blob centres.
const BLOB_MIN_GAP: f64 = 4.0;

/// Deterministic labelled data. Classes are assigned round-robin, so class
/// sizes differ by at most one.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    let SyntheticSpec { kind, instances: n, features: d, classes: k, noise, seed } = *spec;
    if k < 2 {
        return Err(Error::Config("need at least 2 classes".into()));
    }
    if n < 10 * k {
        return Err(Error::Config(format!("{n} instances is fewer than 10 per class for {k} classes")));
    }
    if !(noise.is_finite() && noise >= 0.0) {
        return Err(Error::Config(format!("noise must be finite and non-negative, got {noise}")));
    }
    let min_features = if kind == SyntheticKind::Blobs { 1 } else { 2 };
    if d < min_features {
        return Err(Error::Config(format!("{kind:?} needs at least {min_features} features")));
    }
    if kind == SyntheticKind::Xor && k != 2 {
        return Err(Error::Config("xor generates exactly 2 classes".into()));
    }

    let mut rng = stream(seed, Stream::Generator);
    let unit = Normal::new(0.0, 1.0).expect("unit normal");
    let jitter = |rng: &mut rand_chacha::ChaCha8Rng| noise * unit.sample(rng);
    let labels: Vec<usize> = (0..n).map(|i| i % k).collect();
    let mut data = Vec::with_capacity(n * d);

    match kind {
        SyntheticKind::Blobs => {
            let centres = blob_centres(&mut rng, k, d);
            for &l in &labels {
                for j in 0..d {
                    let v = centres[l][j] + jitter(&mut rng);
                    data.push(v);
                }
            }
        }
        SyntheticKind::Xor => {
            for &l in &labels {
                let a = rng.gen_bool(0.5);
                let b = a ^ (l == 1);
                let sign = |s: bool| if s { 1.0 } else { -1.0 };
                let x0 = sign(a) * rng.gen_range(0.1..1.0) + jitter(&mut rng);
                let x1 = sign(b) * rng.gen_range(0.1..1.0) + jitter(&mut rng);
                data.push(x0);
                data.push(x1);
                for _ in 2..d {
                    data.push(rng.gen_range(-1.0..1.0));
                }
            }
        }
        SyntheticKind::Spirals => {
            let tau = std::f64::consts::TAU;
            for &l in &labels {
                let t: f64 = rng.gen_range(0.05..1.0);
                let angle = l as f64 * tau / k as f64 + 1.5 * tau * t;
                let x0 = t * angle.cos() + jitter(&mut rng);
                let x1 = t * angle.sin() + jitter(&mut rng);
                data.push(x0);
                data.push(x1);
                for _ in 2..d {
                    data.push(rng.gen_range(-1.0..1.0));
                }
            }
        }
    }
    Dataset::new(Matrix::new(n, d, data)?, labels)
}

fn blob_centres<R: Rng>(rng: &mut R, k: usize, d: usize) -> Vec<Vec<f64>> {
    let mut centres: Vec<Vec<f64>> = Vec::with_capacity(k);
    while centres.len() < k {
        let mut best: Option<(f64, Vec<f64>)> = None;
        // Rejection sampling with a bounded number of tries; falls back to
        // the farthest candidate seen.
        for _ in 0..1000 {
            let c: Vec<f64> = (0..d).map(|_| rng.gen_range(-BLOB_BOX..BLOB_BOX)).collect();
            let gap = centres
                .iter()
                .map(|o| o.iter().zip(&c).map(|(a, b)| (a - b) * (a - b)).sum::<f64>().sqrt())
                .fold(f64::INFINITY, f64::min);
            if best.as_ref().map_or(true, |(g, _)| gap > *g) {
                best = Some((gap, c));
            }
            if gap >= BLOB_MIN_GAP {
                break;
            }
        }
        centres.push(best.expect("at least one candidate").1);
    }
    centres
}
