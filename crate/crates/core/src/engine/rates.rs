use serde::{Deserialize, Serialize};

use super::schedule;
use crate::Result;

/// Mutation rate from fitness spread: one minus the current generation's
/// score standard deviation over the largest one observed so far (the
/// current generation included). With no spread ever observed the rate is 1.
pub fn mutation_rate(sigma_gen: f64, max_sigma_so_far: f64) -> f64 {
    let max = max_sigma_so_far.max(sigma_gen);
    if max <= 0.0 {
        1.0
    } else {
        (1.0 - sigma_gen / max).clamp(0.0, 1.0)
    }
}

/// Population standard deviation (divide by n). Empty input gives 0.
pub fn population_std(values: &[f64]) -> f64 {
    if values.is_empty() {
        return 0.0;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    (values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n).sqrt()
}

/// How a generation moved the best (score, complexity-at-that-score) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Progress {
    Both,
    One,
    Neither,
}

/// Best score and the smallest complexity attaining it.
pub type BestPair = (f64, usize);

pub fn progress(previous: Option<BestPair>, current: Option<BestPair>) -> Progress {
    let Some((score, complexity)) = current else {
        return Progress::Neither;
    };
    let (prev_score, prev_complexity) = previous.unwrap_or((f64::NEG_INFINITY, usize::MAX));
    match (score > prev_score, complexity < prev_complexity) {
        (true, true) => Progress::Both,
        (false, false) => Progress::Neither,
        _ => Progress::One,
    }
}

/// Both objectives improved: step down; one improved: hold; neither: step up.
pub fn update_population_size(mu: usize, progress: Progress) -> Result<usize> {
    match progress {
        Progress::Both => schedule::prev(mu),
        Progress::One => Ok(mu),
        Progress::Neither => schedule::next(mu),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rate_is_zero_at_the_running_maximum() {
        assert_eq!(mutation_rate(0.3, 0.3), 0.0);
        assert_eq!(mutation_rate(0.4, 0.3), 0.0);
    }

    #[test]
    fn rate_is_one_without_spread() {
        assert_eq!(mutation_rate(0.0, 0.2), 1.0);
        assert_eq!(mutation_rate(0.0, 0.0), 1.0);
    }

    #[test]
    fn rate_scales_by_historical_maximum() {
        let history_max: f64 = [0.10, 0.25].into_iter().fold(0.0, f64::max);
        assert!((mutation_rate(0.20, history_max) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn std_uses_n_divisor() {
        assert_eq!(population_std(&[0.0, 1.0]), 0.5);
        assert_eq!(population_std(&[0.7]), 0.0);
    }

    #[test]
    fn three_case_population_rule() {
        let p = progress(Some((0.80, 2)), Some((0.80, 2)));
        assert_eq!(p, Progress::Neither);
        assert_eq!(update_population_size(5, p).unwrap(), 8);

        let p = progress(Some((0.80, 3)), Some((0.85, 2)));
        assert_eq!(p, Progress::Both);
        assert_eq!(update_population_size(8, p).unwrap(), 5);

        let p = progress(Some((0.80, 2)), Some((0.85, 2)));
        assert_eq!(p, Progress::One);
        assert_eq!(update_population_size(8, p).unwrap(), 8);

        assert_eq!(progress(Some((0.8, 2)), None), Progress::Neither);
        assert_eq!(update_population_size(1, Progress::Both).unwrap(), 1);
    }
}
