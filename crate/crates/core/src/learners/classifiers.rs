use super::dataset::Matrix;
use super::{Deadline, FitError, Hyper};
use crate::search_space::Operator;

/// Smallest label wins ties.
fn argmax_label(scores: &[(usize, f64)]) -> usize {
    let mut best = scores[0];
    for &s in &scores[1..] {
        if s.1 > best.1 || (s.1 == best.1 && s.0 < best.0) {
            best = s;
        }
    }
    best.0
}

fn present_classes(y: &[usize]) -> Vec<usize> {
    let mut c: Vec<usize> = y.to_vec();
    c.sort_unstable();
    c.dedup();
    c
}

fn majority(y: &[usize], idx: impl Iterator<Item = usize>, n_labels: usize) -> usize {
    let mut counts = vec![0usize; n_labels];
    idx.for_each(|i| counts[y[i]] += 1);
    // max_by_key returns the last maximum; scan manually to keep the smallest.
    let mut best = 0;
    for (l, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = l;
        }
    }
    best
}

#[derive(Clone, Debug, PartialEq)]
pub enum FittedClassifier {
    /// Training fold had a single class.
    Constant(usize),
    KNeighbors(KNeighbors),
    DecisionTree(DecisionTree),
    GaussianNb(GaussianNb),
    Logistic(LogisticRegression),
}

impl FittedClassifier {
    pub fn fit(op: Operator, hyper: &Hyper<'_>, x: &Matrix, y: &[usize], deadline: &Deadline) -> Result<Self, FitError> {
        let classes = present_classes(y);
        if classes.is_empty() {
            return Err(FitError::Numeric("empty training set".into()));
        }
        if classes.len() == 1 {
            return Ok(FittedClassifier::Constant(classes[0]));
        }
        let n_labels = classes[classes.len() - 1] + 1;
        Ok(match op {
            Operator::KNeighbors => FittedClassifier::KNeighbors(KNeighbors {
                k: (hyper.int_or("n_neighbors", 5).max(1) as usize).min(x.rows()),
                manhattan: hyper.int_or("p", 2) == 1,
                n_labels,
                x: x.clone(),
                y: y.to_vec(),
            }),
            Operator::DecisionTree => FittedClassifier::DecisionTree(DecisionTree::fit(
                x,
                y,
                hyper.int_or("max_depth", 5).max(1) as usize,
                n_labels,
                deadline,
            )?),
            Operator::GaussianNb => {
                FittedClassifier::GaussianNb(GaussianNb::fit(x, y, &classes, hyper.real_or("var_smoothing", 1e-9)))
            }
            Operator::LogisticRegression => FittedClassifier::Logistic(LogisticRegression::fit(
                x,
                y,
                classes,
                hyper.real_or("l2", 0.01),
                deadline,
            )?),
            other => return Err(FitError::Numeric(format!("{other:?} is not a classifier"))),
        })
    }

    pub fn predict(&self, x: &Matrix) -> Vec<usize> {
        match self {
            FittedClassifier::Constant(c) => vec![*c; x.rows()],
            FittedClassifier::KNeighbors(m) => m.predict(x),
            FittedClassifier::DecisionTree(m) => (0..x.rows()).map(|i| m.predict_row(x.row(i))).collect(),
            FittedClassifier::GaussianNb(m) => (0..x.rows()).map(|i| m.predict_row(x.row(i))).collect(),
            FittedClassifier::Logistic(m) => (0..x.rows()).map(|i| m.predict_row(x.row(i))).collect(),
        }
    }
}

/// Majority vote among the `k` nearest training rows. Equal distances keep
/// training row order; equal votes go to the smallest label.
#[derive(Clone, Debug, PartialEq)]
pub struct KNeighbors {
    k: usize,
    manhattan: bool,
    n_labels: usize,
    x: Matrix,
    y: Vec<usize>,
}

impl KNeighbors {
    fn distance(&self, a: &[f64], b: &[f64]) -> f64 {
        if self.manhattan {
            a.iter().zip(b).map(|(u, v)| (u - v).abs()).sum()
        } else {
            a.iter().zip(b).map(|(u, v)| (u - v) * (u - v)).sum()
        }
    }

    fn predict(&self, x: &Matrix) -> Vec<usize> {
        let mut dist: Vec<(f64, usize)> = Vec::with_capacity(self.x.rows());
        let mut votes = vec![0usize; self.n_labels];
        (0..x.rows())
            .map(|i| {
                let q = x.row(i);
                dist.clear();
                dist.extend((0..self.x.rows()).map(|j| (self.distance(q, self.x.row(j)), j)));
                let order = |a: &(f64, usize), b: &(f64, usize)| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1));
                if self.k < dist.len() {
                    dist.select_nth_unstable_by(self.k - 1, order);
                }
                votes.iter_mut().for_each(|v| *v = 0);
                dist[..self.k].iter().for_each(|&(_, j)| votes[self.y[j]] += 1);
                let mut best = 0;
                for (l, &v) in votes.iter().enumerate() {
                    if v > votes[best] {
                        best = l;
                    }
                }
                best
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq)]
enum CartNode {
    Leaf(usize),
    Split { feature: usize, threshold: f64, left: usize, right: usize },
}

/// CART with Gini impurity. Thresholds sit at midpoints between consecutive
/// distinct values; a node splits only when that strictly lowers impurity.
#[derive(Clone, Debug, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<CartNode>,
}

fn gini(counts: &[usize], n: usize) -> f64 {
    if n == 0 {
        return 0.0;
    }
    let n = n as f64;
    1.0 - counts.iter().map(|&c| (c as f64 / n).powi(2)).sum::<f64>()
}

impl DecisionTree {
    fn fit(x: &Matrix, y: &[usize], max_depth: usize, n_labels: usize, deadline: &Deadline) -> Result<Self, FitError> {
        let mut tree = DecisionTree { nodes: Vec::new() };
        let idx: Vec<usize> = (0..x.rows()).collect();
        tree.grow(x, y, idx, 0, max_depth, n_labels, deadline)?;
        Ok(tree)
    }

    #[allow(clippy::too_many_arguments)]
    fn grow(
        &mut self,
        x: &Matrix,
        y: &[usize],
        idx: Vec<usize>,
        depth: usize,
        max_depth: usize,
        n_labels: usize,
        deadline: &Deadline,
    ) -> Result<usize, FitError> {
        deadline.check()?;
        let at = self.nodes.len();
        let label = majority(y, idx.iter().copied(), n_labels);
        self.nodes.push(CartNode::Leaf(label));

        let mut counts = vec![0usize; n_labels];
        idx.iter().for_each(|&i| counts[y[i]] += 1);
        let n = idx.len();
        if depth >= max_depth || n < 2 || counts.iter().filter(|&&c| c > 0).count() < 2 {
            return Ok(at);
        }

        let parent = gini(&counts, n);
        let mut best: Option<(f64, usize, f64)> = None;
        let mut order = idx.clone();
        let mut left = vec![0usize; n_labels];
        let mut right = vec![0usize; n_labels];
        for f in 0..x.cols() {
            // idx is ascending, so the stable sort keeps row order on ties.
            order.sort_by(|&a, &b| x.get(a, f).total_cmp(&x.get(b, f)));
            left.iter_mut().for_each(|c| *c = 0);
            right.copy_from_slice(&counts);
            for pos in 0..n - 1 {
                let l = y[order[pos]];
                left[l] += 1;
                right[l] -= 1;
                let (v, next) = (x.get(order[pos], f), x.get(order[pos + 1], f));
                if v < next {
                    let nl = pos + 1;
                    let imp = (nl as f64 * gini(&left, nl) + (n - nl) as f64 * gini(&right, n - nl)) / n as f64;
                    if best.map_or(true, |(b, _, _)| imp < b) {
                        best = Some((imp, f, v + (next - v) / 2.0));
                    }
                }
            }
        }
        let Some((imp, feature, threshold)) = best else {
            return Ok(at);
        };
        if imp >= parent - 1e-12 {
            return Ok(at);
        }
        let (li, ri): (Vec<usize>, Vec<usize>) = idx.into_iter().partition(|&i| x.get(i, feature) <= threshold);
        let left = self.grow(x, y, li, depth + 1, max_depth, n_labels, deadline)?;
        let right = self.grow(x, y, ri, depth + 1, max_depth, n_labels, deadline)?;
        self.nodes[at] = CartNode::Split { feature, threshold, left, right };
        Ok(at)
    }

    fn predict_row(&self, row: &[f64]) -> usize {
        let mut at = 0;
        loop {
            match self.nodes[at] {
                CartNode::Leaf(l) => return l,
                CartNode::Split { feature, threshold, left, right } => {
                    at = if row[feature] <= threshold { left } else { right };
                }
            }
        }
    }
}

/// Gaussian naive Bayes. Variances are inflated by `var_smoothing` times the
/// largest per-feature variance, as in the usual formulation.
#[derive(Clone, Debug, PartialEq)]
pub struct GaussianNb {
    classes: Vec<usize>,
    log_prior: Vec<f64>,
    mean: Vec<Vec<f64>>,
    var: Vec<Vec<f64>>,
}

fn mean_var(values: impl Iterator<Item = f64> + Clone) -> (f64, f64) {
    let n = values.clone().count() as f64;
    let mean = values.clone().sum::<f64>() / n;
    let var = values.map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    (mean, var)
}

impl GaussianNb {
    fn fit(x: &Matrix, y: &[usize], classes: &[usize], var_smoothing: f64) -> Self {
        let d = x.cols();
        let max_var = (0..d)
            .map(|j| mean_var((0..x.rows()).map(|i| x.get(i, j))).1)
            .fold(0.0, f64::max);
        let eps = (var_smoothing * max_var).max(1e-12);
        let mut model = GaussianNb { classes: classes.to_vec(), log_prior: vec![], mean: vec![], var: vec![] };
        for &c in classes {
            let rows: Vec<usize> = (0..x.rows()).filter(|&i| y[i] == c).collect();
            model.log_prior.push((rows.len() as f64 / x.rows() as f64).ln());
            let (m, v): (Vec<f64>, Vec<f64>) = (0..d)
                .map(|j| {
                    let (m, v) = mean_var(rows.iter().map(|&i| x.get(i, j)));
                    (m, v + eps)
                })
                .unzip();
            model.mean.push(m);
            model.var.push(v);
        }
        model
    }

    fn predict_row(&self, row: &[f64]) -> usize {
        let scores: Vec<(usize, f64)> = self
            .classes
            .iter()
            .enumerate()
            .map(|(ci, &c)| {
                let ll: f64 = row
                    .iter()
                    .zip(&self.mean[ci])
                    .zip(&self.var[ci])
                    .map(|((x, m), v)| -0.5 * ((2.0 * std::f64::consts::PI * v).ln() + (x - m) * (x - m) / v))
                    .sum();
                (c, self.log_prior[ci] + ll)
            })
            .collect();
        argmax_label(&scores)
    }
}

const LOGISTIC_EPOCHS: usize = 200;
const LOGISTIC_LEARNING_RATE: f64 = 0.1;

/// One-vs-rest L2-regularised logistic regression trained by full-batch
/// gradient descent on internally standardised features.
#[derive(Clone, Debug, PartialEq)]
pub struct LogisticRegression {
    center: Vec<f64>,
    scale: Vec<f64>,
    classes: Vec<usize>,
    weights: Vec<Vec<f64>>,
    bias: Vec<f64>,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogisticRegression {
    fn fit(x: &Matrix, y: &[usize], classes: Vec<usize>, l2: f64, deadline: &Deadline) -> Result<Self, FitError> {
        let (n, d) = (x.rows(), x.cols());
        let (center, scale): (Vec<f64>, Vec<f64>) = (0..d)
            .map(|j| {
                let (m, v) = mean_var((0..n).map(|i| x.get(i, j)));
                let sd = v.sqrt();
                if sd > 1e-12 * m.abs().max(1.0) {
                    (m, sd)
                } else {
                    (0.0, 1.0)
                }
            })
            .unzip();
        let z: Vec<f64> = (0..n * d).map(|k| (x.as_slice()[k] - center[k % d]) / scale[k % d]).collect();

        let mut model = LogisticRegression { center, scale, classes, weights: vec![], bias: vec![] };
        let mut residual = vec![0.0; n];
        let mut grad = vec![0.0; d];
        for &c in &model.classes {
            let mut w = vec![0.0; d];
            let mut b = 0.0;
            for _ in 0..LOGISTIC_EPOCHS {
                deadline.check()?;
                for i in 0..n {
                    let row = &z[i * d..(i + 1) * d];
                    let s = b + row.iter().zip(&w).map(|(a, b)| a * b).sum::<f64>();
                    residual[i] = sigmoid(s) - if y[i] == c { 1.0 } else { 0.0 };
                }
                grad.iter_mut().zip(&w).for_each(|(g, wj)| *g = l2 * wj);
                let mut gb = 0.0;
                for i in 0..n {
                    let r = residual[i] / n as f64;
                    gb += r;
                    grad.iter_mut().zip(&z[i * d..(i + 1) * d]).for_each(|(g, zj)| *g += r * zj);
                }
                w.iter_mut().zip(&grad).for_each(|(wj, g)| *wj -= LOGISTIC_LEARNING_RATE * g);
                b -= LOGISTIC_LEARNING_RATE * gb;
            }
            if !b.is_finite() || w.iter().any(|v| !v.is_finite()) {
                return Err(FitError::Numeric("logistic regression diverged".into()));
            }
            model.weights.push(w);
            model.bias.push(b);
        }
        Ok(model)
    }

    fn predict_row(&self, row: &[f64]) -> usize {
        let z: Vec<f64> = row.iter().enumerate().map(|(j, v)| (v - self.center[j]) / self.scale[j]).collect();
        let scores: Vec<(usize, f64)> = self
            .classes
            .iter()
            .enumerate()
            .map(|(ci, &c)| (c, self.bias[ci] + z.iter().zip(&self.weights[ci]).map(|(a, b)| a * b).sum::<f64>()))
            .collect();
        argmax_label(&scores)
    }
}
