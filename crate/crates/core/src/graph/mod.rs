//! Temporal multidimensional graph model.
//!
//! A [`TemporalGraph`] holds nodes and undirected edges, each carrying a
//! scalar attribute map and the set of time frames in which it exists.
//! Views are produced from it with [`slice`]. The graph is immutable once
//! loaded.

mod dataset;
mod view;

use std::borrow::Borrow;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dataset::{load_dataset, serialize_dataset, validate_document, LoadError, Rule, Violation};
pub use view::{slice, Comparison, Condition, SliceError, ViewGraph, ViewKind, ViewSpec};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub String);

impl NodeId {
    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl Borrow<str> for NodeId {
    fn borrow(&self) -> &str {
        &self.0
    }
}

impl From<&str> for NodeId {
    fn from(s: &str) -> Self {
        Self(s.to_owned())
    }
}

impl From<String> for NodeId {
    fn from(s: String) -> Self {
        Self(s)
    }
}

/// Canonical identity of an undirected edge: the endpoint pair ordered so
/// that `lo < hi`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct EdgeKey {
    lo: NodeId,
    hi: NodeId,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("self-loop on node {0}")]
pub struct SelfLoopError(pub NodeId);

impl EdgeKey {
    pub fn lo(&self) -> &NodeId {
        &self.lo
    }

    pub fn hi(&self) -> &NodeId {
        &self.hi
    }

    pub fn contains(&self, id: &NodeId) -> bool {
        &self.lo == id || &self.hi == id
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.lo, self.hi)
    }
}

impl Serialize for EdgeKey {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("EdgeKey", 2)?;
        st.serialize_field("source", &self.lo)?;
        st.serialize_field("target", &self.hi)?;
        st.end()
    }
}

pub fn edge_identity(a: impl Into<NodeId>, b: impl Into<NodeId>) -> Result<EdgeKey, SelfLoopError> {
    let (a, b) = (a.into(), b.into());
    match a.cmp(&b) {
        std::cmp::Ordering::Less => Ok(EdgeKey { lo: a, hi: b }),
        std::cmp::Ordering::Greater => Ok(EdgeKey { lo: b, hi: a }),
        std::cmp::Ordering::Equal => Err(SelfLoopError(a)),
    }
}

/// Scalar attribute value.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum AttrValue {
    Bool(bool),
    Number(f64),
    Text(String),
}

impl AttrValue {
    pub fn type_name(&self) -> &'static str {
        match self {
            AttrValue::Bool(_) => "boolean",
            AttrValue::Number(_) => "number",
            AttrValue::Text(_) => "string",
        }
    }
}

pub type Attributes = BTreeMap<String, AttrValue>;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrameDescriptor {
    pub id: String,
    pub label: String,
    pub order: i64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct NodeRecord {
    pub id: NodeId,
    pub attributes: Attributes,
    pub frames: BTreeSet<String>,
    /// Community label per frame id. Keys are a subset of `frames`.
    pub community: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EdgeRecord {
    pub key: EdgeKey,
    pub attributes: Attributes,
    pub frames: BTreeSet<String>,
}

/// A validated graph. Frames are sorted by `order`, nodes by id and edges by
/// canonical key.
#[derive(Debug, Clone, PartialEq)]
pub struct TemporalGraph {
    frames: Vec<FrameDescriptor>,
    nodes: BTreeMap<NodeId, NodeRecord>,
    edges: BTreeMap<EdgeKey, EdgeRecord>,
}

impl TemporalGraph {
    pub fn frames(&self) -> &[FrameDescriptor] {
        &self.frames
    }

    pub fn frame(&self, id: &str) -> Option<&FrameDescriptor> {
        self.frames.iter().find(|f| f.id == id)
    }

    pub fn nodes(&self) -> impl Iterator<Item = &NodeRecord> {
        self.nodes.values()
    }

    pub fn node(&self, id: &str) -> Option<&NodeRecord> {
        self.nodes.get(id)
    }

    pub fn edges(&self) -> impl Iterator<Item = &EdgeRecord> {
        self.edges.values()
    }

    pub fn edge(&self, key: &EdgeKey) -> Option<&EdgeRecord> {
        self.edges.get(key)
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }
}
