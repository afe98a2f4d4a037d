//! Pipeline genotype: the primitive registry, tree representation,
//! canonical keys and the novelty-seeking variation operators.

mod key;
mod operators;
mod primitives;
mod tree;

use std::collections::HashSet;

pub use key::{parse as parse_key, serialize as serialize_key, CanonicalKey};
pub use operators::MutationOp;
pub use primitives::{Operator, ParamSpec, ParamValue, PrimitiveId, PrimitiveKind, PrimitiveSpec, Registry};
pub use tree::{Node, Path, PipelineTree};

use crate::Result;

pub const DEFAULT_MAX_DEPTH: usize = 7;
pub const DEFAULT_MAX_NODES: usize = 15;

/// Anything that can answer "has this pipeline been seen before?".
pub trait KeySet {
    fn contains_key(&self, key: &CanonicalKey) -> bool;
}

impl KeySet for HashSet<CanonicalKey> {
    fn contains_key(&self, key: &CanonicalKey) -> bool {
        self.contains(key)
    }
}

impl<T: KeySet + ?Sized> KeySet for &T {
    fn contains_key(&self, key: &CanonicalKey) -> bool {
        (**self).contains_key(key)
    }
}

/// A registry plus the structural caps every generated tree must respect.
#[derive(Clone, Debug)]
pub struct SearchSpace {
    pub registry: Registry,
    pub max_depth: usize,
    pub max_nodes: usize,
}

impl Default for SearchSpace {
    fn default() -> Self {
        SearchSpace::new(Registry::default_set())
    }
}

impl SearchSpace {
    pub fn new(registry: Registry) -> Self {
        SearchSpace { registry, max_depth: DEFAULT_MAX_DEPTH, max_nodes: DEFAULT_MAX_NODES }
    }

    pub fn key(&self, tree: &PipelineTree) -> CanonicalKey {
        key::serialize(&self.registry, tree)
    }

    pub fn parse(&self, key: &str) -> Result<PipelineTree> {
        let tree = key::parse(&self.registry, key)?;
        self.validate(&tree)?;
        Ok(tree)
    }

    pub fn validate(&self, tree: &PipelineTree) -> Result<()> {
        tree.validate(&self.registry, self.max_depth, self.max_nodes)
    }

    pub(crate) fn within_caps(&self, tree: &PipelineTree) -> bool {
        tree.complexity() <= self.max_nodes && tree.depth() <= self.max_depth
    }
}
