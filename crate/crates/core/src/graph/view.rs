//! Per-view subgraphs sliced out of a [`TemporalGraph`].

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{AttrValue, Attributes, EdgeKey, NodeId, TemporalGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Comparison {
    #[serde(rename = "=", alias = "==")]
    Eq,
    #[serde(rename = "!=", alias = "≠")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=", alias = "≤")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=", alias = "≥")]
    Ge,
}

impl Comparison {
    fn is_ordering(self) -> bool {
        !matches!(self, Comparison::Eq | Comparison::Ne)
    }

    fn holds(self, ord: Ordering) -> bool {
        match self {
            Comparison::Eq => ord == Ordering::Equal,
            Comparison::Ne => ord != Ordering::Equal,
            Comparison::Lt => ord == Ordering::Less,
            Comparison::Le => ord != Ordering::Greater,
            Comparison::Gt => ord == Ordering::Greater,
            Comparison::Ge => ord != Ordering::Less,
        }
    }
}

/// One `attribute op value` clause of a predicate view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Condition {
    pub attribute: String,
    pub op: Comparison,
    pub value: AttrValue,
}

impl Condition {
    /// Evaluates the clause against an attribute map. `absent` is the verdict
    /// when the element does not carry the attribute at all.
    fn eval(&self, attrs: &Attributes, absent: bool, element: &str) -> Result<bool, SliceError> {
        let Some(actual) = attrs.get(&self.attribute) else {
            return Ok(absent);
        };
        let type_error = || SliceError::PredicateType {
            element: element.to_owned(),
            attribute: self.attribute.clone(),
            expected: self.value.type_name(),
            found: actual.type_name(),
        };
        let ord = match (actual, &self.value) {
            (AttrValue::Number(a), AttrValue::Number(b)) => a.partial_cmp(b).ok_or_else(type_error)?,
            (AttrValue::Text(a), AttrValue::Text(b)) => a.cmp(b),
            (AttrValue::Bool(a), AttrValue::Bool(b)) if !self.op.is_ordering() => a.cmp(b),
            _ => return Err(type_error()),
        };
        Ok(self.op.holds(ord))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ViewKind {
    Frame(String),
    /// Conjunction of clauses.
    Predicate(Vec<Condition>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawViewSpec", into = "RawViewSpec")]
pub struct ViewSpec {
    pub view_id: String,
    pub label: Option<String>,
    pub kind: ViewKind,
}

impl ViewSpec {
    pub fn frame(view_id: impl Into<String>, frame_id: impl Into<String>) -> Self {
        Self {
            view_id: view_id.into(),
            label: None,
            kind: ViewKind::Frame(frame_id.into()),
        }
    }

    pub fn predicate(view_id: impl Into<String>, conditions: Vec<Condition>) -> Self {
        Self {
            view_id: view_id.into(),
            label: None,
            kind: ViewKind::Predicate(conditions),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
struct RawViewSpec {
    view_id: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    frame_id: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    predicate: Option<Vec<Condition>>,
}

impl TryFrom<RawViewSpec> for ViewSpec {
    type Error = String;

    fn try_from(raw: RawViewSpec) -> Result<Self, String> {
        let kind = match (raw.kind.as_str(), raw.frame_id, raw.predicate) {
            ("frame", Some(f), None) => ViewKind::Frame(f),
            ("predicate", None, Some(p)) => ViewKind::Predicate(p),
            ("frame", _, _) => return Err("frame view needs frameId and no predicate".into()),
            ("predicate", _, _) => return Err("predicate view needs predicate and no frameId".into()),
            (other, _, _) => return Err(format!("unknown view kind {other:?}")),
        };
        Ok(ViewSpec {
            view_id: raw.view_id,
            label: raw.label,
            kind,
        })
    }
}

impl From<ViewSpec> for RawViewSpec {
    fn from(spec: ViewSpec) -> Self {
        let (kind, frame_id, predicate) = match spec.kind {
            ViewKind::Frame(f) => ("frame", Some(f), None),
            ViewKind::Predicate(p) => ("predicate", None, Some(p)),
        };
        RawViewSpec {
            view_id: spec.view_id,
            label: spec.label,
            kind: kind.to_owned(),
            frame_id,
            predicate,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SliceError {
    #[error("unknown frame {0}")]
    UnknownFrame(String),
    #[error("predicate on {attribute} expects {expected} but {element} has {found}")]
    PredicateType {
        element: String,
        attribute: String,
        expected: &'static str,
        found: &'static str,
    },
    #[error("edge {0} has an endpoint outside the view")]
    DanglingEdge(EdgeKey),
}

/// One view's subgraph `G_i` together with its community labelling.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewGraph {
    pub view_id: String,
    pub node_ids: BTreeSet<NodeId>,
    pub edge_ids: BTreeSet<EdgeKey>,
    pub community_of: BTreeMap<NodeId, String>,
}

impl ViewGraph {
    /// Builds a view from explicit sets, giving every node without a label in
    /// `labels` its connected-component fallback.
    pub fn from_parts(
        view_id: impl Into<String>,
        node_ids: BTreeSet<NodeId>,
        edge_ids: BTreeSet<EdgeKey>,
        labels: &BTreeMap<NodeId, String>,
    ) -> Result<Self, SliceError> {
        if let Some(e) = edge_ids
            .iter()
            .find(|e| !node_ids.contains(e.lo()) || !node_ids.contains(e.hi()))
        {
            return Err(SliceError::DanglingEdge(e.clone()));
        }
        let community_of = assign_communities(&node_ids, &edge_ids, labels);
        Ok(Self {
            view_id: view_id.into(),
            node_ids,
            edge_ids,
            community_of,
        })
    }

    pub fn contains_node(&self, id: &NodeId) -> bool {
        self.node_ids.contains(id)
    }

    pub fn contains_edge(&self, key: &EdgeKey) -> bool {
        self.edge_ids.contains(key)
    }

    /// Edges of this view whose endpoints both lie in `nodes`.
    pub fn induced_edges(&self, nodes: &BTreeSet<NodeId>) -> BTreeSet<EdgeKey> {
        self.edge_ids
            .iter()
            .filter(|e| nodes.contains(e.lo()) && nodes.contains(e.hi()))
            .cloned()
            .collect()
    }
}

/// Labels each node, falling back to `cc:<k>` with `k` the index of the
/// node's connected component, components ordered by smallest member id.
fn assign_communities(
    nodes: &BTreeSet<NodeId>,
    edges: &BTreeSet<EdgeKey>,
    labels: &BTreeMap<NodeId, String>,
) -> BTreeMap<NodeId, String> {
    let mut adjacency: BTreeMap<&NodeId, Vec<&NodeId>> = nodes.iter().map(|n| (n, Vec::new())).collect();
    for e in edges {
        adjacency.get_mut(e.lo()).expect("endpoint in view").push(e.hi());
        adjacency.get_mut(e.hi()).expect("endpoint in view").push(e.lo());
    }

    let mut component: BTreeMap<&NodeId, usize> = BTreeMap::new();
    let mut next = 0;
    for start in nodes {
        if component.contains_key(start) {
            continue;
        }
        let mut queue = VecDeque::from([start]);
        component.insert(start, next);
        while let Some(n) = queue.pop_front() {
            for &m in &adjacency[n] {
                if !component.contains_key(m) {
                    component.insert(m, next);
                    queue.push_back(m);
                }
            }
        }
        next += 1;
    }

    nodes
        .iter()
        .map(|n| {
            let label = labels
                .get(n)
                .cloned()
                .unwrap_or_else(|| format!("cc:{}", component[n]));
            (n.clone(), label)
        })
        .collect()
}

pub fn slice(graph: &TemporalGraph, spec: &ViewSpec) -> Result<ViewGraph, SliceError> {
    match &spec.kind {
        ViewKind::Frame(frame_id) => {
            if graph.frame(frame_id).is_none() {
                return Err(SliceError::UnknownFrame(frame_id.clone()));
            }
            let nodes = graph
                .nodes()
                .filter(|n| n.frames.contains(frame_id))
                .map(|n| n.id.clone())
                .collect();
            let edges = graph
                .edges()
                .filter(|e| e.frames.contains(frame_id))
                .map(|e| e.key.clone())
                .collect();
            let labels = graph
                .nodes()
                .filter_map(|n| n.community.get(frame_id).map(|c| (n.id.clone(), c.clone())))
                .collect();
            ViewGraph::from_parts(spec.view_id.clone(), nodes, edges, &labels)
        }
        ViewKind::Predicate(conditions) => {
            let all = |attrs: &Attributes, absent: bool, element: &str| -> Result<bool, SliceError> {
                for c in conditions {
                    if !c.eval(attrs, absent, element)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            };
            let mut nodes = BTreeSet::new();
            for n in graph.nodes() {
                if all(&n.attributes, false, n.id.as_str())? {
                    nodes.insert(n.id.clone());
                }
            }
            let mut edges = BTreeSet::new();
            for e in graph.edges() {
                let keep = all(&e.attributes, true, &e.key.to_string())?;
                if keep && nodes.contains(e.key.lo()) && nodes.contains(e.key.hi()) {
                    edges.insert(e.key.clone());
                }
            }
            ViewGraph::from_parts(spec.view_id.clone(), nodes, edges, &BTreeMap::new())
        }
    }
}
