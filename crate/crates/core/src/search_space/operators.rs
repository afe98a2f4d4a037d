use std::collections::HashSet;

use rand::Rng;

use super::key::CanonicalKey;
use super::primitives::{PrimitiveId, PrimitiveKind};
use super::tree::{Node, PipelineTree};
use super::{KeySet, SearchSpace};
use crate::{Error, Result};

/// The four one-step mutation moves.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MutationOp {
    /// Swap a node's primitive for another of the same kind, keeping inputs.
    ReplaceNode,
    /// Put a new preprocessor above a non-root node, or below a leaf.
    InsertPreprocessor,
    /// Drop a non-root node and reattach its input in its place.
    RemoveNode,
    /// Move one hyperparameter to a different grid value.
    ResampleHyperparameter,
}

impl MutationOp {
    pub const ALL: [MutationOp; 4] = [
        MutationOp::ReplaceNode,
        MutationOp::InsertPreprocessor,
        MutationOp::RemoveNode,
        MutationOp::ResampleHyperparameter,
    ];
}

/// Outcomes keyed and de-duplicated, in generation order.
struct Outcomes<'a> {
    space: &'a SearchSpace,
    exclude: Vec<CanonicalKey>,
    seen: HashSet<CanonicalKey>,
    items: Vec<(CanonicalKey, PipelineTree)>,
}

impl<'a> Outcomes<'a> {
    fn new(space: &'a SearchSpace, exclude: Vec<CanonicalKey>) -> Self {
        Outcomes { space, exclude, seen: HashSet::new(), items: Vec::new() }
    }

    fn push(&mut self, tree: PipelineTree) {
        if !self.space.within_caps(&tree) {
            return;
        }
        let key = self.space.key(&tree);
        if self.exclude.contains(&key) || !self.seen.insert(key.clone()) {
            return;
        }
        self.items.push((key, tree));
    }

    fn novel(self, cache: &dyn KeySet) -> Vec<(CanonicalKey, PipelineTree)> {
        self.items.into_iter().filter(|(k, _)| !cache.contains_key(k)).collect()
    }
}

fn pick<T, R: Rng + ?Sized>(mut items: Vec<T>, rng: &mut R) -> Option<T> {
    if items.is_empty() {
        None
    } else {
        let i = rng.gen_range(0..items.len());
        Some(items.swap_remove(i))
    }
}

impl SearchSpace {
    pub fn random_params<R: Rng + ?Sized>(&self, id: PrimitiveId, rng: &mut R) -> Vec<usize> {
        self.registry.get(id).params.iter().map(|p| rng.gen_range(0..p.values.len())).collect()
    }

    fn random_of_kind<R: Rng + ?Sized>(&self, kind: PrimitiveKind, rng: &mut R) -> Option<Node> {
        let ids = self.registry.ids_of_kind(kind);
        let id = *pick(ids.iter().collect(), rng)?;
        Some(Node::leaf(id, self.random_params(id, rng)))
    }

    /// A single classifier with uniformly drawn hyperparameters.
    pub fn random_stump<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<PipelineTree> {
        self.random_of_kind(PrimitiveKind::Classifier, rng)
            .map(PipelineTree::new)
            .ok_or_else(|| Error::Config("registry has no classifier".into()))
    }

    /// A classifier fed by a chain of preprocessors, with the total node count
    /// drawn uniformly from `min_nodes..=max_nodes`.
    pub fn random_small_tree<R: Rng + ?Sized>(
        &self,
        rng: &mut R,
        min_nodes: usize,
        max_nodes: usize,
    ) -> Result<PipelineTree> {
        let mut tree = self.random_stump(rng)?;
        let size = rng.gen_range(min_nodes.max(1)..=max_nodes.max(min_nodes).max(1));
        let mut slot = &mut tree.root;
        for _ in 1..size.min(self.max_depth).min(self.max_nodes) {
            let Some(node) = self.random_of_kind(PrimitiveKind::Preprocessor, rng) else {
                break;
            };
            slot.children.push(node);
            slot = &mut slot.children[0];
        }
        Ok(tree)
    }

    /// A uniformly chosen stump whose key is not in `seen`, if any remains.
    pub fn novel_stump<R: Rng + ?Sized>(&self, seen: &dyn KeySet, rng: &mut R) -> Option<PipelineTree> {
        let mut out = Outcomes::new(self, Vec::new());
        for id in self.registry.ids_of_kind(PrimitiveKind::Classifier) {
            for params in self.registry.get(id).assignments() {
                out.push(PipelineTree::new(Node::leaf(id, params)));
            }
        }
        pick(out.novel(seen), rng).map(|(_, t)| t)
    }

    fn mutation_outcome_set(&self, parent: &PipelineTree, op: MutationOp) -> Outcomes<'_> {
        let mut out = Outcomes::new(self, vec![self.key(parent)]);
        let reg = &self.registry;
        for path in parent.paths() {
            let node = parent.node(&path);
            let spec = reg.get(node.primitive);
            match op {
                MutationOp::ReplaceNode => {
                    for id in reg.ids_of_kind(spec.kind()) {
                        if id == node.primitive {
                            continue;
                        }
                        for params in reg.get(id).assignments() {
                            let mut t = parent.clone();
                            let n = t.node_mut(&path);
                            n.primitive = id;
                            n.params = params;
                            out.push(t);
                        }
                    }
                }
                MutationOp::InsertPreprocessor => {
                    let can_take_leaf = node.children.is_empty() && spec.kind() != PrimitiveKind::Combiner;
                    for id in reg.ids_of_kind(PrimitiveKind::Preprocessor) {
                        for params in reg.get(id).assignments() {
                            if !path.is_empty() {
                                let mut t = parent.clone();
                                let slot = t.node_mut(&path);
                                let below = std::mem::replace(slot, Node::leaf(id, params.clone()));
                                slot.children.push(below);
                                out.push(t);
                            }
                            if can_take_leaf {
                                let mut t = parent.clone();
                                t.node_mut(&path).children.push(Node::leaf(id, params));
                                out.push(t);
                            }
                        }
                    }
                }
                MutationOp::RemoveNode => {
                    let Some((&last, parent_path)) = path.split_last() else {
                        continue;
                    };
                    let parent_kind = reg.get(parent.node(parent_path).primitive).kind();
                    match (spec.kind(), node.children.len()) {
                        (PrimitiveKind::Preprocessor, 0) => {
                            if parent_kind != PrimitiveKind::Combiner {
                                let mut t = parent.clone();
                                t.node_mut(parent_path).children.remove(last);
                                out.push(t);
                            }
                        }
                        _ => {
                            for keep in 0..node.children.len() {
                                let mut t = parent.clone();
                                let replacement = node.children[keep].clone();
                                *t.node_mut(&path) = replacement;
                                out.push(t);
                            }
                        }
                    }
                }
                MutationOp::ResampleHyperparameter => {
                    for (j, p) in spec.params.iter().enumerate() {
                        for v in 0..p.values.len() {
                            if v == node.params[j] {
                                continue;
                            }
                            let mut t = parent.clone();
                            t.node_mut(&path).params[j] = v;
                            out.push(t);
                        }
                    }
                }
            }
        }
        out
    }

    /// Every distinct result of applying `op` once to `parent`, ignoring
    /// novelty but respecting the size caps.
    pub fn mutation_outcomes(&self, parent: &PipelineTree, op: MutationOp) -> Vec<PipelineTree> {
        self.mutation_outcome_set(parent, op).items.into_iter().map(|(_, t)| t).collect()
    }

    /// One novel mutation of `parent`: the move is drawn uniformly among the
    /// moves that still have an unseen outcome, then an unseen outcome of that
    /// move is drawn uniformly. `None` when the whole neighbourhood is seen.
    pub fn mutate<R: Rng + ?Sized>(
        &self,
        parent: &PipelineTree,
        seen: &dyn KeySet,
        rng: &mut R,
    ) -> Option<PipelineTree> {
        let live: Vec<_> = MutationOp::ALL
            .iter()
            .map(|&op| self.mutation_outcome_set(parent, op).novel(seen))
            .filter(|o| !o.is_empty())
            .collect();
        let chosen = pick(live, rng)?;
        pick(chosen, rng).map(|(_, t)| t)
    }

    /// Like [`SearchSpace::mutate`] with the move fixed.
    pub fn mutate_with<R: Rng + ?Sized>(
        &self,
        op: MutationOp,
        parent: &PipelineTree,
        seen: &dyn KeySet,
        rng: &mut R,
    ) -> Option<PipelineTree> {
        pick(self.mutation_outcome_set(parent, op).novel(seen), rng).map(|(_, t)| t)
    }

    fn crossover_outcome_set(&self, a: &PipelineTree, b: &PipelineTree) -> Outcomes<'_> {
        let mut out = Outcomes::new(self, vec![self.key(a), self.key(b)]);
        let donors: Vec<_> = b.paths().into_iter().filter(|p| !p.is_empty()).collect();
        for cut in a.paths().into_iter().filter(|p| !p.is_empty()) {
            for donor in &donors {
                let mut t = a.clone();
                *t.node_mut(&cut) = b.node(donor).clone();
                out.push(t);
            }
        }
        out
    }

    /// All distinct single-offspring subtree grafts of `b` into `a`.
    pub fn crossover_outcomes(&self, a: &PipelineTree, b: &PipelineTree) -> Vec<PipelineTree> {
        self.crossover_outcome_set(a, b).items.into_iter().map(|(_, t)| t).collect()
    }

    /// One-point subtree exchange producing a single child (a modified copy of
    /// `a`). Only non-root nodes are cut points, so classifiers never move.
    pub fn crossover<R: Rng + ?Sized>(
        &self,
        a: &PipelineTree,
        b: &PipelineTree,
        seen: &dyn KeySet,
        rng: &mut R,
    ) -> Result<Option<PipelineTree>> {
        if self.key(a) == self.key(b) {
            return Err(Error::Precondition("crossover parents must differ".into()));
        }
        Ok(pick(self.crossover_outcome_set(a, b).novel(seen), rng).map(|(_, t)| t))
    }
}
