use super::classifiers::FittedClassifier;
use super::dataset::{Dataset, Matrix};
use super::preprocess::FittedTransform;
use super::{Deadline, FitError, Hyper};
use crate::search_space::{Node, PipelineTree, PrimitiveKind, Registry};

/// Fitted state of the transformer part of a pipeline.
#[derive(Clone, Debug, PartialEq)]
pub enum FittedNode {
    Transform { model: FittedTransform, input: Option<Box<FittedNode>> },
    Union(Box<FittedNode>, Box<FittedNode>),
}

impl FittedNode {
    fn apply(&self, raw: &Matrix) -> Matrix {
        match self {
            FittedNode::Transform { model, input } => match input {
                Some(inner) => model.transform(&inner.apply(raw)),
                None => model.transform(raw),
            },
            FittedNode::Union(a, b) => a.apply(raw).hconcat(&b.apply(raw)),
        }
    }
}

/// A pipeline whose every statistic was learned from training data only.
#[derive(Clone, Debug, PartialEq)]
pub struct FittedPipeline {
    pub input: Option<FittedNode>,
    pub classifier: FittedClassifier,
}

impl FittedPipeline {
    pub fn predict(&self, x: &Matrix) -> Vec<usize> {
        match &self.input {
            Some(node) => self.classifier.predict(&node.apply(x)),
            None => self.classifier.predict(x),
        }
    }
}

fn fit_node(registry: &Registry, node: &Node, raw: &Matrix, deadline: &Deadline) -> Result<(FittedNode, Matrix), FitError> {
    deadline.check()?;
    let spec = registry.get(node.primitive);
    match spec.kind() {
        PrimitiveKind::Combiner => {
            let [a, b] = &node.children[..] else {
                return Err(FitError::Numeric(format!("{} needs two inputs", spec.name)));
            };
            let (fa, xa) = fit_node(registry, a, raw, deadline)?;
            let (fb, xb) = fit_node(registry, b, raw, deadline)?;
            Ok((FittedNode::Union(Box::new(fa), Box::new(fb)), xa.hconcat(&xb)))
        }
        PrimitiveKind::Preprocessor => {
            let (input, x) = match node.children.first() {
                Some(child) => {
                    let (f, x) = fit_node(registry, child, raw, deadline)?;
                    (Some(Box::new(f)), x)
                }
                None => (None, raw.clone()),
            };
            let model = FittedTransform::fit(spec.operator, &Hyper::new(spec, &node.params), &x)?;
            let out = model.transform(&x);
            if !out.all_finite() {
                return Err(FitError::Numeric(format!("{} produced non-finite values", spec.name)));
            }
            Ok((FittedNode::Transform { model, input }, out))
        }
        PrimitiveKind::Classifier => Err(FitError::Numeric(format!("classifier {} below the root", spec.name))),
    }
}

/// Fits every node depth-first on the training rows.
pub fn fit_pipeline(
    registry: &Registry,
    tree: &PipelineTree,
    train: &Dataset,
    deadline: &Deadline,
) -> Result<FittedPipeline, FitError> {
    let root = &tree.root;
    let spec = registry.get(root.primitive);
    let (input, x) = match root.children.first() {
        Some(child) => {
            let (f, x) = fit_node(registry, child, &train.features, deadline)?;
            (Some(f), x)
        }
        None => (None, train.features.clone()),
    };
    deadline.check()?;
    let classifier = FittedClassifier::fit(spec.operator, &Hyper::new(spec, &root.params), &x, &train.labels, deadline)?;
    Ok(FittedPipeline { input, classifier })
}

pub fn predict_pipeline(
    registry: &Registry,
    tree: &PipelineTree,
    train: &Dataset,
    test: &Matrix,
    deadline: &Deadline,
) -> Result<Vec<usize>, FitError> {
    if test.cols() != train.n_features() {
        return Err(FitError::Numeric(format!(
            "test has {} features, train has {}",
            test.cols(),
            train.n_features()
        )));
    }
    Ok(fit_pipeline(registry, tree, train, deadline)?.predict(test))
}
