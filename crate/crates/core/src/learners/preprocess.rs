use super::dataset::Matrix;
use super::{FitError, Hyper};
use crate::search_space::Operator;

fn is_degenerate(spread: f64, magnitude: f64) -> bool {
    !(spread > 1e-12 * magnitude.abs().max(1.0))
}

/// Learned state of a feature transformer. Columns whose training spread is
/// zero are passed through unchanged.
#[derive(Clone, Debug, PartialEq)]
pub enum FittedTransform {
    Standardize { mean: Vec<f64>, std: Vec<Option<f64>> },
    MinMax { min: Vec<f64>, range: Vec<Option<f64>> },
    SelectColumns { columns: Vec<usize> },
    Binarize { threshold: Vec<f64> },
}

impl FittedTransform {
    pub fn fit(op: Operator, hyper: &Hyper<'_>, x: &Matrix) -> Result<Self, FitError> {
        let n = x.rows();
        if n == 0 {
            return Err(FitError::Numeric("empty training set".into()));
        }
        let columns = (0..x.cols()).map(|j| x.column(j));
        Ok(match op {
            Operator::StandardScaler => {
                let (mean, std) = columns
                    .map(|c| {
                        let m = c.iter().sum::<f64>() / n as f64;
                        if n < 2 {
                            return (m, None);
                        }
                        let sd = (c.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / (n - 1) as f64).sqrt();
                        (m, (!is_degenerate(sd, m)).then_some(sd))
                    })
                    .unzip();
                FittedTransform::Standardize { mean, std }
            }
            Operator::MinMaxScaler => {
                let (min, range) = columns
                    .map(|c| {
                        let lo = c.iter().copied().fold(f64::INFINITY, f64::min);
                        let hi = c.iter().copied().fold(f64::NEG_INFINITY, f64::max);
                        (lo, (!is_degenerate(hi - lo, lo)).then_some(hi - lo))
                    })
                    .unzip();
                FittedTransform::MinMax { min, range }
            }
            Operator::VarianceTopK => {
                let k = (hyper.int_or("k", 5).max(1) as usize).min(x.cols());
                let mut ranked: Vec<(usize, f64)> = columns
                    .enumerate()
                    .map(|(j, c)| {
                        let m = c.iter().sum::<f64>() / n as f64;
                        (j, c.iter().map(|v| (v - m) * (v - m)).sum::<f64>() / n as f64)
                    })
                    .collect();
                ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
                let mut columns: Vec<usize> = ranked[..k].iter().map(|r| r.0).collect();
                columns.sort_unstable();
                FittedTransform::SelectColumns { columns }
            }
            Operator::Binarizer => FittedTransform::Binarize {
                threshold: columns
                    .map(|mut c| {
                        c.sort_by(f64::total_cmp);
                        if n % 2 == 1 {
                            c[n / 2]
                        } else {
                            (c[n / 2 - 1] + c[n / 2]) / 2.0
                        }
                    })
                    .collect(),
            },
            other => return Err(FitError::Numeric(format!("{other:?} is not a preprocessor"))),
        })
    }

    pub fn transform(&self, x: &Matrix) -> Matrix {
        match self {
            FittedTransform::Standardize { mean, std } => x.map_columns(|j, v| match std[j] {
                Some(sd) => (v - mean[j]) / sd,
                None => v,
            }),
            FittedTransform::MinMax { min, range } => x.map_columns(|j, v| match range[j] {
                Some(r) => (v - min[j]) / r,
                None => v,
            }),
            FittedTransform::SelectColumns { columns } => x.select_cols(columns),
            FittedTransform::Binarize { threshold } => {
                x.map_columns(|j, v| if v > threshold[j] { 1.0 } else { 0.0 })
            }
        }
    }
}
