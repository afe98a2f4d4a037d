//! Canonical textual form of a pipeline.
//!
//! ```text
//! node   := NAME [ "{" param ( "," param )* "}" ] [ "(" node ( "," node )* ")" ]
//! param  := NAME "=" VALUE
//! ```
//!
//! Hyperparameters appear in the primitive's declared field order, so two
//! trees share a key exactly when they are structurally identical with the
//! same assignments. Example:
//! `KNeighbors{n_neighbors=5,p=2}(FeatureUnion(StandardScaler,VarianceTopK{k=3}))`.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::primitives::Registry;
use super::tree::{Node, PipelineTree};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalKey(String);

impl CanonicalKey {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn from_raw(s: impl Into<String>) -> Self {
        CanonicalKey(s.into())
    }
}

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::borrow::Borrow<str> for CanonicalKey {
    fn borrow(&self) -> &str {
        &self.0
    }
}

pub fn serialize(registry: &Registry, tree: &PipelineTree) -> CanonicalKey {
    let mut out = String::with_capacity(64);
    write_node(registry, &tree.root, &mut out);
    CanonicalKey(out)
}

fn write_node(registry: &Registry, node: &Node, out: &mut String) {
    use std::fmt::Write;
    let spec = registry.get(node.primitive);
    out.push_str(&spec.name);
    if !spec.params.is_empty() {
        out.push('{');
        for (i, (p, &idx)) in spec.params.iter().zip(&node.params).enumerate() {
            if i > 0 {
                out.push(',');
            }
            let _ = write!(out, "{}={}", p.name, p.values[idx]);
        }
        out.push('}');
    }
    if !node.children.is_empty() {
        out.push('(');
        for (i, c) in node.children.iter().enumerate() {
            if i > 0 {
                out.push(',');
            }
            write_node(registry, c, out);
        }
        out.push(')');
    }
}

pub fn parse(registry: &Registry, key: &str) -> Result<PipelineTree> {
    let mut p = Parser { src: key.as_bytes(), pos: 0, registry };
    let root = p.node()?;
    if p.pos != p.src.len() {
        return Err(p.error("trailing input"));
    }
    Ok(PipelineTree::new(root))
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    registry: &'a Registry,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> Error {
        Error::KeyParse { offset: self.pos, message: message.to_string() }
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.peek() == Some(c) {
            self.pos += 1;
            Ok(())
        } else {
            Err(self.error(&format!("expected '{}'", c as char)))
        }
    }

    fn token(&mut self, stop: &[u8]) -> Result<&str> {
        let start = self.pos;
        while let Some(c) = self.peek() {
            if stop.contains(&c) {
                break;
            }
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("empty token"));
        }
        std::str::from_utf8(&self.src[start..self.pos]).map_err(|_| self.error("invalid utf-8"))
    }

    fn node(&mut self) -> Result<Node> {
        let name_at = self.pos;
        let name = self.token(b"{}(),=")?.to_string();
        let id = self.registry.by_name(&name).ok_or(Error::KeyParse {
            offset: name_at,
            message: format!("unknown primitive {name:?}"),
        })?;
        let spec = self.registry.get(id);
        let mut params = Vec::with_capacity(spec.params.len());
        if !spec.params.is_empty() {
            self.expect(b'{')?;
            for (i, p) in spec.params.iter().enumerate() {
                if i > 0 {
                    self.expect(b',')?;
                }
                let pname = self.token(b"{}(),=")?.to_string();
                if pname != p.name {
                    return Err(self.error(&format!("expected hyperparameter {}", p.name)));
                }
                self.expect(b'=')?;
                let value = self.token(b"{}(),=")?.to_string();
                let idx = p
                    .values
                    .iter()
                    .position(|v| v.to_string() == value)
                    .ok_or_else(|| self.error(&format!("{value} not in grid of {}.{}", spec.name, p.name)))?;
                params.push(idx);
            }
            self.expect(b'}')?;
        }
        let mut children = Vec::new();
        if self.peek() == Some(b'(') {
            self.pos += 1;
            loop {
                children.push(self.node()?);
                match self.peek() {
                    Some(b',') => self.pos += 1,
                    Some(b')') => {
                        self.pos += 1;
                        break;
                    }
                    _ => return Err(self.error("expected ',' or ')'")),
                }
            }
        }
        Ok(Node { primitive: id, params, children })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_reports_unknown_primitive_and_bad_values() {
        let r = Registry::default_set();
        assert!(matches!(parse(&r, "Nope"), Err(Error::KeyParse { offset: 0, .. })));
        assert!(parse(&r, "KNeighbors{n_neighbors=4,p=2}").is_err());
        assert!(parse(&r, "KNeighbors{p=2,n_neighbors=5}").is_err());
        assert!(parse(&r, "GaussianNB{var_smoothing=0.00001}(StandardScaler").is_err());
        assert!(parse(&r, "GaussianNB{var_smoothing=0.00001}x").is_err());
    }

    #[test]
    fn known_key_round_trips() {
        let r = Registry::default_set();
        let text = "KNeighbors{n_neighbors=5,p=2}(FeatureUnion(StandardScaler,VarianceTopK{k=3}))";
        let tree = parse(&r, text).unwrap();
        assert_eq!(tree.complexity(), 4);
        assert_eq!(serialize(&r, &tree).as_str(), text);
    }
}
