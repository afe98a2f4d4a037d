use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use crate::{Error, Result};

/// Largest number of nonzero differences tested exactly.
pub const EXACT_MAX_N: usize = 20;

/// Per-dataset values of one metric for two methods.
#[derive(Clone, Debug, PartialEq)]
pub struct PairedResults {
    pairs: Vec<(String, f64, f64)>,
}

impl PairedResults {
    pub fn new(pairs: Vec<(String, f64, f64)>) -> Result<Self> {
        let mut ids = HashSet::new();
        for (id, a, b) in &pairs {
            if !ids.insert(id.as_str()) {
                return Err(Error::Precondition(format!("duplicate dataset id {id:?}")));
            }
            if !a.is_finite() || !b.is_finite() {
                return Err(Error::Precondition(format!("non-finite value for dataset {id:?}")));
            }
        }
        Ok(PairedResults { pairs })
    }

    pub fn pairs(&self) -> &[(String, f64, f64)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// `A - B` per dataset.
    pub fn differences(&self) -> Vec<f64> {
        self.pairs.iter().map(|(_, a, b)| a - b).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    pub w_plus: f64,
    pub w_minus: f64,
    /// `min(w_plus, w_minus)`.
    pub statistic: f64,
    pub p_value: f64,
    pub n_effective: usize,
    pub exact: bool,
    /// Every difference was zero; `p_value` is 1.
    pub degenerate: bool,
}

pub fn wilcoxon_signed_rank(pairs: &PairedResults) -> Result<WilcoxonResult> {
    if pairs.is_empty() {
        return Err(Error::Precondition("wilcoxon test needs at least one pair".into()));
    }
    Ok(signed_rank_test(&pairs.differences()))
}

/// Two-sided signed-rank test on raw differences. Zeros are dropped and tied
/// magnitudes share their average rank.
pub fn signed_rank_test(differences: &[f64]) -> WilcoxonResult {
    let d: Vec<f64> = differences.iter().copied().filter(|&x| x != 0.0).collect();
    let n = d.len();
    if n == 0 {
        return WilcoxonResult {
            w_plus: 0.0,
            w_minus: 0.0,
            statistic: 0.0,
            p_value: 1.0,
            n_effective: 0,
            exact: true,
            degenerate: true,
        };
    }
    let ranks = average_ranks(&d.iter().map(|x| x.abs()).collect::<Vec<_>>());
    let w_plus: f64 = d.iter().zip(&ranks).filter(|(x, _)| **x > 0.0).fold(0.0, |acc, (_, r)| acc + r);
    let w_minus: f64 = d.iter().zip(&ranks).filter(|(x, _)| **x < 0.0).fold(0.0, |acc, (_, r)| acc + r);
    let statistic = w_plus.min(w_minus);
    let exact = n <= EXACT_MAX_N;
    let p_value = if exact { exact_p(&ranks, statistic) } else { normal_p(&ranks, statistic) };
    WilcoxonResult { w_plus, w_minus, statistic, p_value, n_effective: n, exact, degenerate: false }
}

/// 1-based ranks of `values`, ties receiving the mean of the ranks they span.
pub fn average_ranks(values: &[f64]) -> Vec<f64> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let r = (i + j) as f64 / 2.0 + 1.0;
        for &k in &order[i..=j] {
            ranks[k] = r;
        }
        i = j + 1;
    }
    ranks
}

/// Exact two-sided p over all `2^n` sign assignments, counted with a subset
/// sum table over doubled ranks (average ranks are multiples of 1/2).
pub fn exact_p(ranks: &[f64], statistic: f64) -> f64 {
    let doubled: Vec<usize> = ranks.iter().map(|r| (r * 2.0).round() as usize).collect();
    let total: usize = doubled.iter().sum();
    let mut counts = vec![0u64; total + 1];
    counts[0] = 1;
    for &r in &doubled {
        for s in (r..=total).rev() {
            counts[s] += counts[s - r];
        }
    }
    let limit = (statistic * 2.0).round() as usize;
    let tail: u64 = counts[..=limit.min(total)].iter().sum();
    let all = 2f64.powi(ranks.len() as i32);
    (2.0 * tail as f64 / all).min(1.0)
}

/// Normal approximation with tie-corrected variance and a 0.5 continuity
/// correction.
pub fn normal_p(ranks: &[f64], statistic: f64) -> f64 {
    let n = ranks.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut sorted = ranks.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut ties = 0.0;
    for group in sorted.chunk_by(|a, b| a == b) {
        let t = group.len() as f64;
        ties += t * t * t - t;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - ties / 48.0;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((statistic - mean).abs() - 0.5).max(0.0) / var.sqrt();
    let std = Normal::new(0.0, 1.0).expect("unit normal");
    (2.0 * (1.0 - std.cdf(z))).min(1.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_positive_differences() {
        let r = signed_rank_test(&[0.1, 0.2, 0.3, 0.4, 0.5]);
        assert_eq!(r.statistic, 0.0);
        assert_eq!(r.w_plus, 15.0);
        assert!(r.exact);
        assert_eq!(r.p_value, 0.0625);
    }

    #[test]
    fn all_zero_is_degenerate() {
        let p = PairedResults::new(vec![("a".into(), 1.0, 1.0), ("b".into(), 0.5, 0.5)]).unwrap();
        let r = wilcoxon_signed_rank(&p).unwrap();
        assert!(r.degenerate);
        assert_eq!(r.p_value, 1.0);
    }

    #[test]
    fn zeros_dropped_and_ties_averaged() {
        let r = signed_rank_test(&[0.0, 1.0, -1.0, 2.0]);
        assert_eq!(r.n_effective, 3);
        assert_eq!((r.w_plus, r.w_minus), (4.5, 1.5));
        assert_eq!(average_ranks(&[3.0, 1.0, 3.0, 2.0]), vec![3.5, 1.0, 3.5, 2.0]);
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(PairedResults::new(vec![("a".into(), 1.0, 0.0), ("a".into(), 1.0, 0.0)]).is_err());
        assert!(PairedResults::new(vec![("a".into(), f64::NAN, 0.0)]).is_err());
        assert!(wilcoxon_signed_rank(&PairedResults::new(vec![]).unwrap()).is_err());
    }

    #[test]
    fn large_n_uses_normal_branch() {
        let d: Vec<f64> = (1..=30).map(|i| if i % 3 == 0 { -(i as f64) } else { i as f64 }).collect();
        let r = signed_rank_test(&d);
        assert!(!r.exact);
        assert!(r.p_value > 0.0 && r.p_value < 1.0);
    }
}
