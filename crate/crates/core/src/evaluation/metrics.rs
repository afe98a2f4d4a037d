use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

/// Unweighted mean of per-class F1 over `classes`. A listed class that is
/// neither present in `actual` nor predicted is skipped; a class whose
/// precision or recall is undefined scores 0.
pub fn macro_f1(predicted: &[usize], actual: &[usize], classes: &[usize]) -> Result<f64> {
    if predicted.is_empty() || predicted.len() != actual.len() {
        return Err(Error::Precondition(format!(
            "macro_f1 needs equal non-empty vectors (got {} and {})",
            predicted.len(),
            actual.len()
        )));
    }
    let mut total = 0.0;
    let mut counted = 0usize;
    for &c in classes {
        let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
        for (&p, &a) in predicted.iter().zip(actual) {
            match (p == c, a == c) {
                (true, true) => tp += 1,
                (true, false) => fp += 1,
                (false, true) => fneg += 1,
                _ => {}
            }
        }
        if tp + fp + fneg == 0 {
            continue;
        }
        counted += 1;
        if tp > 0 {
            let precision = tp as f64 / (tp + fp) as f64;
            let recall = tp as f64 / (tp + fneg) as f64;
            total += 2.0 * precision * recall / (precision + recall);
        }
    }
    Ok(if counted == 0 { 1.0 } else { total / counted as f64 })
}

pub fn accuracy(predicted: &[usize], actual: &[usize]) -> Result<f64> {
    if predicted.is_empty() || predicted.len() != actual.len() {
        return Err(Error::Precondition("accuracy needs equal non-empty vectors".into()));
    }
    Ok(predicted.iter().zip(actual).filter(|(p, a)| p == a).count() as f64 / actual.len() as f64)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Metric {
    #[default]
    #[serde(rename = "f1-macro")]
    F1Macro,
    #[serde(rename = "accuracy")]
    Accuracy,
}

impl Metric {
    pub fn name(self) -> &'static str {
        match self {
            Metric::F1Macro => "f1-macro",
            Metric::Accuracy => "accuracy",
        }
    }

    /// Scores one fold; only classes present in `actual` take part.
    pub fn score(self, predicted: &[usize], actual: &[usize]) -> Result<f64> {
        match self {
            Metric::F1Macro => {
                let mut classes = actual.to_vec();
                classes.sort_unstable();
                classes.dedup();
                macro_f1(predicted, actual, &classes)
            }
            Metric::Accuracy => accuracy(predicted, actual),
        }
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "f1-macro" => Ok(Metric::F1Macro),
            "accuracy" => Ok(Metric::Accuracy),
            other => Err(Error::Config(format!("unknown metric {other:?} (expected f1-macro or accuracy)"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn perfect_prediction_scores_one() {
        let y = [3, 1, 2, 2, 0];
        assert_eq!(macro_f1(&y, &y, &[0, 1, 2, 3]).unwrap(), 1.0);
    }

    #[test]
    fn all_wrong_binary_scores_zero() {
        assert_eq!(macro_f1(&[1, 0, 1, 0], &[0, 1, 0, 1], &[0, 1]).unwrap(), 0.0);
    }

    #[test]
    fn hand_computed_confusion_matrix() {
        // class 0: tp2 -> 1.0; class 1: tp1 fp1 fn1 -> 0.5; class 2: same -> 0.5
        let f1 = macro_f1(&[0, 0, 1, 2, 2, 1], &[0, 0, 1, 1, 2, 2], &[0, 1, 2]).unwrap();
        assert!((f1 - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn absent_class_is_excluded() {
        let with = macro_f1(&[0, 1], &[0, 1], &[0, 1, 2]).unwrap();
        assert_eq!(with, 1.0);
    }

    #[test]
    fn empty_vectors_are_rejected() {
        assert!(macro_f1(&[], &[], &[0]).is_err());
        assert!(macro_f1(&[0], &[0, 1], &[0]).is_err());
    }

    #[test]
    fn metric_names_parse() {
        assert_eq!("f1-macro".parse::<Metric>().unwrap(), Metric::F1Macro);
        assert!("auc".parse::<Metric>().is_err());
    }
}
