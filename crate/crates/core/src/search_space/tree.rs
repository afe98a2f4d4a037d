use super::primitives::{PrimitiveId, PrimitiveKind, Registry};
use crate::{Error, Result};

/// One primitive application: the primitive, its hyperparameters as grid
/// indices (in the primitive's field order) and its input nodes.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Node {
    pub primitive: PrimitiveId,
    pub params: Vec<usize>,
    pub children: Vec<Node>,
}

impl Node {
    pub fn leaf(primitive: PrimitiveId, params: Vec<usize>) -> Self {
        Node { primitive, params, children: Vec::new() }
    }

    pub fn with_children(primitive: PrimitiveId, params: Vec<usize>, children: Vec<Node>) -> Self {
        Node { primitive, params, children }
    }

    pub fn count(&self) -> usize {
        1 + self.children.iter().map(Node::count).sum::<usize>()
    }

    pub fn depth(&self) -> usize {
        1 + self.children.iter().map(Node::depth).max().unwrap_or(0)
    }
}

/// Address of a node: child indices from the root. The root is `[]`.
pub type Path = Vec<usize>;

/// A pipeline genotype. The root is always the classifier; everything
/// below it transforms the raw feature matrix on its way up.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PipelineTree {
    pub root: Node,
}

impl PipelineTree {
    pub fn new(root: Node) -> Self {
        PipelineTree { root }
    }

    /// Number of primitives in the pipeline; a bare classifier is 1.
    pub fn complexity(&self) -> usize {
        self.root.count()
    }

    pub fn depth(&self) -> usize {
        self.root.depth()
    }

    /// All node paths in pre-order.
    pub fn paths(&self) -> Vec<Path> {
        fn walk(node: &Node, prefix: &mut Path, out: &mut Vec<Path>) {
            out.push(prefix.clone());
            for (i, c) in node.children.iter().enumerate() {
                prefix.push(i);
                walk(c, prefix, out);
                prefix.pop();
            }
        }
        let mut out = Vec::new();
        walk(&self.root, &mut Vec::new(), &mut out);
        out
    }

    pub fn node(&self, path: &[usize]) -> &Node {
        path.iter().fold(&self.root, |n, &i| &n.children[i])
    }

    pub fn node_mut(&mut self, path: &[usize]) -> &mut Node {
        path.iter().fold(&mut self.root, |n, &i| &mut n.children[i])
    }

    /// Checks the grammar: classifier root only, arity per kind, grid
    /// membership of every hyperparameter and the size caps.
    pub fn validate(&self, registry: &Registry, max_depth: usize, max_nodes: usize) -> Result<()> {
        let invalid = |msg: String| Err(Error::Precondition(format!("invalid pipeline: {msg}")));
        if self.complexity() > max_nodes {
            return invalid(format!("{} nodes exceeds cap {max_nodes}", self.complexity()));
        }
        if self.depth() > max_depth {
            return invalid(format!("depth {} exceeds cap {max_depth}", self.depth()));
        }
        for path in self.paths() {
            let node = self.node(&path);
            if node.primitive.0 >= registry.len() {
                return invalid(format!("unknown primitive id {}", node.primitive.0));
            }
            let spec = registry.get(node.primitive);
            if node.params.len() != spec.params.len() {
                return invalid(format!("{} expects {} hyperparameters", spec.name, spec.params.len()));
            }
            for (p, &idx) in spec.params.iter().zip(&node.params) {
                if idx >= p.values.len() {
                    return invalid(format!("{}.{} index {idx} outside grid", spec.name, p.name));
                }
            }
            let is_root = path.is_empty();
            match spec.kind() {
                PrimitiveKind::Classifier if !is_root => {
                    return invalid(format!("classifier {} below the root", spec.name))
                }
                PrimitiveKind::Classifier | PrimitiveKind::Preprocessor if node.children.len() > 1 => {
                    return invalid(format!("{} has {} inputs", spec.name, node.children.len()))
                }
                PrimitiveKind::Combiner if node.children.len() != 2 => {
                    return invalid(format!("{} needs exactly two inputs", spec.name))
                }
                _ => {}
            }
            if is_root && spec.kind() != PrimitiveKind::Classifier {
                return invalid(format!("root {} is not a classifier", spec.name));
            }
        }
        Ok(())
    }
}
