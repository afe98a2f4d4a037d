use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::wilcoxon::{wilcoxon_signed_rank, PairedResults, WilcoxonResult};
use crate::engine::RunLog;
use crate::evaluation::FitnessVector;
use crate::moo::{average_frontier, hypervolume_2d, HvReference};
use crate::{Error, Result};

pub const ALPHA: f64 = 0.05;

pub const METRICS: [&str; 3] = ["score", "complexity", "hypervolume"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub runs: usize,
    /// Mean best score of the final fronts.
    pub score: f64,
    /// Mean complexity of the best-scoring front point, over runs with a
    /// non-empty front.
    pub complexity: Option<f64>,
    pub hypervolume: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DatasetRow {
    pub dataset_id: String,
    pub a: MethodSummary,
    pub b: MethodSummary,
    /// Front points left out of the hypervolume for lying outside the
    /// reference box.
    pub hv_excluded_points: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestRow {
    pub metric: String,
    pub datasets: usize,
    pub mean_a: f64,
    pub mean_b: f64,
    /// Mean of `A - B` over datasets.
    pub mean_difference: f64,
    pub test: WilcoxonResult,
    pub significant: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Frontier {
    pub dataset_id: String,
    pub a: Vec<FitnessVector>,
    pub b: Vec<FitnessVector>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub hv_ref: String,
    pub alpha: f64,
    pub method_a: String,
    pub method_b: String,
    pub datasets: Vec<DatasetRow>,
    pub tests: Vec<TestRow>,
    pub frontiers: Vec<Frontier>,
}

fn group(runs: &[RunLog]) -> BTreeMap<&str, Vec<&RunLog>> {
    let mut out: BTreeMap<&str, Vec<&RunLog>> = BTreeMap::new();
    for r in runs {
        out.entry(r.header.dataset_id.as_str()).or_default().push(r);
    }
    out
}

fn mean(xs: impl IntoIterator<Item = f64>) -> Option<f64> {
    let (sum, n) = xs.into_iter().fold((0.0, 0usize), |(s, n), x| (s + x, n + 1));
    (n > 0).then(|| sum / n as f64)
}

fn summarise(runs: &[&RunLog], hv_ref: HvReference, excluded: &mut usize) -> Result<MethodSummary> {
    let mut scores = Vec::new();
    let mut complexities = Vec::new();
    let mut hvs = Vec::new();
    for run in runs {
        let front = run.final_front();
        match front.best() {
            Some(b) => {
                scores.push(b.score);
                complexities.push(b.complexity as f64);
            }
            None => scores.push(0.0),
        }
        let inside: Vec<FitnessVector> = front
            .fitnesses()
            .into_iter()
            .filter(|p| p.score > hv_ref.score && (p.complexity as f64) < hv_ref.complexity)
            .collect();
        let dropped = front.len() - inside.len();
        if dropped > 0 {
            log::warn!(
                "{}: {dropped} front point(s) outside hypervolume reference ({hv_ref}) ignored",
                run.header.dataset_id
            );
            *excluded += dropped;
        }
        hvs.push(hypervolume_2d(&inside, hv_ref)?);
    }
    Ok(MethodSummary {
        runs: runs.len(),
        score: mean(scores).unwrap_or(0.0),
        complexity: mean(complexities),
        hypervolume: mean(hvs).unwrap_or(0.0),
    })
}

/// Per-dataset means for each method, then one signed-rank test per metric
/// across datasets. Runs are grouped by the dataset id in their log header.
pub fn compare_report(
    runs_a: &[RunLog],
    runs_b: &[RunLog],
    hv_ref: HvReference,
    method_a: &str,
    method_b: &str,
) -> Result<Report> {
    let ga = group(runs_a);
    let gb = group(runs_b);
    let ka: BTreeSet<&str> = ga.keys().copied().collect();
    let kb: BTreeSet<&str> = gb.keys().copied().collect();
    if ka != kb {
        let diff: Vec<&str> = ka.symmetric_difference(&kb).copied().collect();
        return Err(Error::Config(format!("dataset sets differ; present for only one method: {}", diff.join(", "))));
    }
    if ka.is_empty() {
        return Err(Error::Precondition("no runs to compare".into()));
    }

    let mut datasets = Vec::new();
    let mut frontiers = Vec::new();
    for id in &ka {
        let mut excluded = 0;
        let a = summarise(&ga[id], hv_ref, &mut excluded)?;
        let b = summarise(&gb[id], hv_ref, &mut excluded)?;
        datasets.push(DatasetRow { dataset_id: id.to_string(), a, b, hv_excluded_points: excluded });
        let fronts = |runs: &[&RunLog]| -> Vec<Vec<FitnessVector>> {
            runs.iter().map(|r| r.final_front().fitnesses()).collect()
        };
        frontiers.push(Frontier {
            dataset_id: id.to_string(),
            a: average_frontier(&fronts(&ga[id])),
            b: average_frontier(&fronts(&gb[id])),
        });
    }

    let mut tests = Vec::new();
    for metric in METRICS {
        let pick = |s: &MethodSummary| match metric {
            "score" => Some(s.score),
            "complexity" => s.complexity,
            _ => Some(s.hypervolume),
        };
        let pairs: Vec<(String, f64, f64)> = datasets
            .iter()
            .filter_map(|d| Some((d.dataset_id.clone(), pick(&d.a)?, pick(&d.b)?)))
            .collect();
        if pairs.is_empty() {
            continue;
        }
        let paired = PairedResults::new(pairs)?;
        let test = wilcoxon_signed_rank(&paired)?;
        let p = paired.pairs();
        tests.push(TestRow {
            metric: metric.to_string(),
            datasets: p.len(),
            mean_a: mean(p.iter().map(|x| x.1)).unwrap_or(0.0),
            mean_b: mean(p.iter().map(|x| x.2)).unwrap_or(0.0),
            mean_difference: mean(paired.differences()).unwrap_or(0.0),
            significant: !test.degenerate && test.p_value < ALPHA,
            test,
        });
    }

    Ok(Report {
        hv_ref: hv_ref.to_string(),
        alpha: ALPHA,
        method_a: method_a.to_string(),
        method_b: method_b.to_string(),
        datasets,
        tests,
        frontiers,
    })
}

fn table(rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> =
        (0..rows[0].len()).map(|j| rows.iter().map(|r| r[j].chars().count()).max().unwrap_or(0)).collect();
    let mut out = String::new();
    for r in rows {
        let cells: Vec<String> = r.iter().zip(&widths).map(|(c, w)| format!("{c:<w$}")).collect();
        out.push_str(cells.join("  ").trim_end());
        out.push('\n');
    }
    out
}

fn opt(v: Option<f64>) -> String {
    v.map_or("-".into(), |x| format!("{x:.4}"))
}

impl Report {
    /// Aligned-column text rendering.
    pub fn to_text(&self) -> String {
        let (a, b) = (&self.method_a, &self.method_b);
        let mut out = String::new();
        let _ = writeln!(out, "{a} vs {b}  hv_ref=({})  alpha={}", self.hv_ref, self.alpha);
        out.push('\n');
        let mut rows = vec![vec![
            "dataset".to_string(),
            "runs".into(),
            format!("score_{a}"),
            format!("score_{b}"),
            format!("cplx_{a}"),
            format!("cplx_{b}"),
            format!("hv_{a}"),
            format!("hv_{b}"),
        ]];
        for d in &self.datasets {
            rows.push(vec![
                d.dataset_id.clone(),
                format!("{}/{}", d.a.runs, d.b.runs),
                format!("{:.4}", d.a.score),
                format!("{:.4}", d.b.score),
                opt(d.a.complexity),
                opt(d.b.complexity),
                format!("{:.4}", d.a.hypervolume),
                format!("{:.4}", d.b.hypervolume),
            ]);
        }
        out.push_str(&table(&rows));
        out.push('\n');
        let mut rows = vec![vec![
            "metric".to_string(),
            "n".into(),
            format!("mean_{a}"),
            format!("mean_{b}"),
            "W".into(),
            "p".into(),
            "method".into(),
            "result".into(),
        ]];
        for t in &self.tests {
            let result = if t.test.degenerate {
                "degenerate"
            } else if t.significant {
                "significant"
            } else {
                "not significant"
            };
            rows.push(vec![
                t.metric.clone(),
                t.test.n_effective.to_string(),
                format!("{:.4}", t.mean_a),
                format!("{:.4}", t.mean_b),
                format!("{}", t.test.statistic),
                format!("{:.4}", t.test.p_value),
                if t.test.exact { "exact" } else { "normal" }.into(),
                result.into(),
            ]);
        }
        out.push_str(&table(&rows));
        out
    }
}

impl Frontier {
    /// `method,complexity,mean_score` rows, ascending complexity per method.
    pub fn to_csv(&self, method_a: &str, method_b: &str) -> String {
        let mut out = String::from("method,complexity,mean_score\n");
        for (name, pts) in [(method_a, &self.a), (method_b, &self.b)] {
            for p in pts {
                let _ = writeln!(out, "{name},{},{}", p.complexity, p.score);
            }
        }
        out
    }
}
