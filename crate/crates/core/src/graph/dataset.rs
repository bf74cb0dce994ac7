//! JSON dataset document: parsing, invariant checking and canonical output.

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{edge_identity, Attributes, EdgeRecord, FrameDescriptor, NodeId, NodeRecord, TemporalGraph};

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct DatasetDoc {
    frames: Vec<FrameDescriptor>,
    nodes: Vec<NodeDoc>,
    #[serde(default)]
    edges: Vec<EdgeDoc>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct NodeDoc {
    id: String,
    #[serde(default)]
    attributes: Attributes,
    frames: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    community: BTreeMap<String, String>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct EdgeDoc {
    source: String,
    target: String,
    #[serde(default)]
    attributes: Attributes,
    frames: Vec<String>,
}

/// Dataset invariant that a document can violate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Rule {
    DuplicateId,
    DuplicateFrameOrder,
    EmptyFrames,
    UnknownFrame,
    CommunityOutsideFrames,
    DanglingEndpoint,
    SelfLoop,
    DuplicateEdge,
    EdgeFrameWithoutEndpoint,
}

impl Rule {
    pub fn describe(self) -> &'static str {
        match self {
            Rule::DuplicateId => "duplicate id",
            Rule::DuplicateFrameOrder => "duplicate frame order",
            Rule::EmptyFrames => "frames non-empty",
            Rule::UnknownFrame => "unknown frame reference",
            Rule::CommunityOutsideFrames => "community frame not in node frames",
            Rule::DanglingEndpoint => "dangling endpoint",
            Rule::SelfLoop => "self-loop",
            Rule::DuplicateEdge => "duplicate edge",
            Rule::EdgeFrameWithoutEndpoint => "edge frame without endpoint presence",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.describe())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    /// Offending element: a frame id, a node id, or `(source,target)` for edges.
    pub element: String,
    pub detail: Option<String>,
}

impl Violation {
    fn new(rule: Rule, element: impl Into<String>) -> Self {
        Self {
            rule,
            element: element.into(),
            detail: None,
        }
    }

    fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.rule, self.element)?;
        if let Some(d) = &self.detail {
            write!(f, " ({d})")?;
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum LoadError {
    #[error("malformed dataset document: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid dataset: {} violation(s), first: {}", .0.len(), .0[0])]
    Invalid(Vec<Violation>),
}

fn edge_label(e: &EdgeDoc) -> String {
    format!("({},{})", e.source, e.target)
}

fn check(doc: &DatasetDoc) -> Vec<Violation> {
    let mut out = Vec::new();

    let mut frame_ids = HashSet::new();
    let mut orders = HashSet::new();
    for f in &doc.frames {
        if !frame_ids.insert(f.id.as_str()) {
            out.push(Violation::new(Rule::DuplicateId, &f.id).with_detail("frame"));
        }
        if !orders.insert(f.order) {
            out.push(Violation::new(Rule::DuplicateFrameOrder, &f.id).with_detail(format!("order {}", f.order)));
        }
    }

    let mut node_frames: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for n in &doc.nodes {
        if node_frames.contains_key(n.id.as_str()) {
            out.push(Violation::new(Rule::DuplicateId, &n.id).with_detail("node"));
            continue;
        }
        if n.frames.is_empty() {
            out.push(Violation::new(Rule::EmptyFrames, &n.id));
        }
        for f in &n.frames {
            if !frame_ids.contains(f.as_str()) {
                out.push(Violation::new(Rule::UnknownFrame, &n.id).with_detail(format!("frame {f}")));
            }
        }
        for f in n.community.keys() {
            if !frame_ids.contains(f.as_str()) {
                out.push(Violation::new(Rule::UnknownFrame, &n.id).with_detail(format!("community frame {f}")));
            } else if !n.frames.contains(f) {
                out.push(Violation::new(Rule::CommunityOutsideFrames, &n.id).with_detail(format!("frame {f}")));
            }
        }
        node_frames.insert(&n.id, n.frames.iter().map(String::as_str).collect());
    }

    let mut seen_edges = HashSet::new();
    for e in &doc.edges {
        let label = edge_label(e);
        let key = match edge_identity(e.source.as_str(), e.target.as_str()) {
            Ok(k) => k,
            Err(_) => {
                out.push(Violation::new(Rule::SelfLoop, label));
                continue;
            }
        };
        let mut dangling = false;
        for end in [&e.source, &e.target] {
            if !node_frames.contains_key(end.as_str()) {
                out.push(Violation::new(Rule::DanglingEndpoint, &label).with_detail(format!("node {end}")));
                dangling = true;
            }
        }
        if !seen_edges.insert(key) {
            out.push(Violation::new(Rule::DuplicateEdge, &label));
            continue;
        }
        for f in &e.frames {
            if !frame_ids.contains(f.as_str()) {
                out.push(Violation::new(Rule::UnknownFrame, &label).with_detail(format!("frame {f}")));
            } else if !dangling
                && !(node_frames[e.source.as_str()].contains(f.as_str())
                    && node_frames[e.target.as_str()].contains(f.as_str()))
            {
                out.push(Violation::new(Rule::EdgeFrameWithoutEndpoint, &label).with_detail(format!("frame {f}")));
            }
        }
    }
    out
}

/// Parses a document and reports every invariant violation it contains.
/// An empty list means the document loads.
pub fn validate_document(source: impl Read) -> Result<Vec<Violation>, serde_json::Error> {
    let doc: DatasetDoc = serde_json::from_reader(source)?;
    Ok(check(&doc))
}

pub fn load_dataset(source: impl Read) -> Result<TemporalGraph, LoadError> {
    let doc: DatasetDoc = serde_json::from_reader(source)?;
    let violations = check(&doc);
    if !violations.is_empty() {
        return Err(LoadError::Invalid(violations));
    }

    let mut frames = doc.frames;
    frames.sort_by_key(|f| f.order);

    let nodes = doc
        .nodes
        .into_iter()
        .map(|n| {
            let id = NodeId(n.id);
            let record = NodeRecord {
                id: id.clone(),
                attributes: n.attributes,
                frames: n.frames.into_iter().collect(),
                community: n.community,
            };
            (id, record)
        })
        .collect();

    let edges = doc
        .edges
        .into_iter()
        .map(|e| {
            let key = edge_identity(e.source, e.target).expect("checked above");
            let record = EdgeRecord {
                key: key.clone(),
                attributes: e.attributes,
                frames: e.frames.into_iter().collect(),
            };
            (key, record)
        })
        .collect();

    Ok(TemporalGraph { frames, nodes, edges })
}

/// Emits the canonical document: frames by order, nodes by id, edges by
/// canonical pair with `source < target`.
pub fn serialize_dataset(graph: &TemporalGraph) -> String {
    let doc = DatasetDoc {
        frames: graph.frames.clone(),
        nodes: graph
            .nodes()
            .map(|n| NodeDoc {
                id: n.id.0.clone(),
                attributes: n.attributes.clone(),
                frames: n.frames.iter().cloned().collect(),
                community: n.community.clone(),
            })
            .collect(),
        edges: graph
            .edges()
            .map(|e| EdgeDoc {
                source: e.key.lo().0.clone(),
                target: e.key.hi().0.clone(),
                attributes: e.attributes.clone(),
                frames: e.frames.iter().cloned().collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("dataset serializes");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "frames": [{"id": "f1", "label": "T1", "order": 0}],
        "nodes": [
            {"id": "a", "attributes": {}, "frames": ["f1"]},
            {"id": "b", "attributes": {}, "frames": ["f1"]}
        ],
        "edges": [{"source": "a", "target": "b", "attributes": {}, "frames": ["f1"]}]
    }"#;

    fn rules(doc: &str) -> Vec<(Rule, String)> {
        match load_dataset(doc.as_bytes()) {
            Err(LoadError::Invalid(v)) => v.into_iter().map(|v| (v.rule, v.element)).collect(),
            other => panic!("expected violations, got {other:?}"),
        }
    }

    #[test]
    fn minimal_dataset_loads() {
        let g = load_dataset(MINIMAL.as_bytes()).unwrap();
        assert_eq!((g.node_count(), g.edge_count(), g.frames().len()), (2, 1, 1));
    }

    #[test]
    fn empty_node_frames_rejected() {
        let doc = MINIMAL.replace(r#"{"id": "a", "attributes": {}, "frames": ["f1"]}"#, r#"{"id": "a", "frames": []}"#);
        // the edge also loses endpoint presence for a
        let got = rules(&doc);
        assert_eq!(got[0], (Rule::EmptyFrames, "a".to_string()));
    }

    #[test]
    fn edge_frame_needs_both_endpoints() {
        let doc = r#"{
            "frames": [{"id": "f1", "label": "T1", "order": 0}, {"id": "f2", "label": "T2", "order": 1}],
            "nodes": [
                {"id": "a", "frames": ["f1", "f2"]},
                {"id": "b", "frames": ["f1"]}
            ],
            "edges": [{"source": "a", "target": "b", "frames": ["f2"]}]
        }"#;
        assert_eq!(rules(doc), vec![(Rule::EdgeFrameWithoutEndpoint, "(a,b)".to_string())]);
    }

    #[test]
    fn each_violation_class_detected() {
        let base = |nodes: &str, edges: &str| {
            format!(
                r#"{{"frames": [{{"id": "f1", "label": "T1", "order": 0}}, {{"id": "f2", "label": "T2", "order": 1}}],
                    "nodes": [{nodes}], "edges": [{edges}]}}"#
            )
        };
        let a = r#"{"id": "a", "frames": ["f1"]}"#;
        let b = r#"{"id": "b", "frames": ["f1"]}"#;
        let cases = [
            (base(&format!("{a},{a}"), ""), Rule::DuplicateId),
            (base(r#"{"id": "a", "frames": ["f9"]}"#, ""), Rule::UnknownFrame),
            (base(&format!("{a},{b}"), r#"{"source": "a", "target": "b", "frames": ["f2"]}"#), Rule::EdgeFrameWithoutEndpoint),
            (base(a, r#"{"source": "a", "target": "z", "frames": ["f1"]}"#), Rule::DanglingEndpoint),
            (base(a, r#"{"source": "a", "target": "a", "frames": ["f1"]}"#), Rule::SelfLoop),
            (
                base(
                    &format!("{a},{b}"),
                    r#"{"source": "a", "target": "b", "frames": ["f1"]}, {"source": "b", "target": "a", "frames": ["f1"]}"#,
                ),
                Rule::DuplicateEdge,
            ),
        ];
        for (doc, rule) in cases {
            let got = rules(&doc);
            assert!(got.iter().any(|(r, _)| *r == rule), "{rule:?} not in {got:?}");
        }
    }

    #[test]
    fn community_keys_must_be_node_frames() {
        let doc = r#"{
            "frames": [{"id": "f1", "label": "T1", "order": 0}, {"id": "f2", "label": "T2", "order": 1}],
            "nodes": [{"id": "a", "frames": ["f1"], "community": {"f2": "x"}}]
        }"#;
        assert_eq!(rules(doc), vec![(Rule::CommunityOutsideFrames, "a".to_string())]);
    }

    #[test]
    fn malformed_document_is_parse_error() {
        assert!(matches!(load_dataset(&b"{\"frames\": ["[..]), Err(LoadError::Parse(_))));
        assert!(matches!(load_dataset(&b"{\"frames\": [], \"nodes\": [], \"extra\": 1}"[..]), Err(LoadError::Parse(_))));
    }

    #[test]
    fn serialization_is_canonical() {
        let shuffled = r#"{
            "frames": [{"id": "f2", "label": "T2", "order": 5}, {"id": "f1", "label": "T1", "order": 0}],
            "nodes": [
                {"id": "b", "attributes": {"w": 2, "kind": "x"}, "frames": ["f2", "f1"]},
                {"id": "a", "attributes": {"flag": true}, "frames": ["f1"], "community": {"f1": "c0"}}
            ],
            "edges": [{"source": "b", "target": "a", "attributes": {}, "frames": ["f1"]}]
        }"#;
        let g = load_dataset(shuffled.as_bytes()).unwrap();
        let text = serialize_dataset(&g);
        let again = load_dataset(text.as_bytes()).unwrap();
        assert_eq!(g, again);
        assert_eq!(text, serialize_dataset(&again));
        assert!(text.find("\"f1\"").unwrap() < text.find("\"f2\"").unwrap());
        assert!(text.contains("\"source\": \"a\""));
    }
}
