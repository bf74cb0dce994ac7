//! Linked-view algebra: building selections, propagating them to every
//! view, dragging them rigidly and classifying a drop against a target view.

use std::collections::{BTreeMap, BTreeSet};

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{point_in_polygon, Point, Vector};
use crate::graph::{EdgeKey, NodeId, ViewGraph};
use crate::layout::LayoutMap;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SelectionError {
    #[error("lasso polygon needs at least 3 vertices, got {0}")]
    DegeneratePolygon(usize),
    #[error("node {0} is not in view {1}")]
    UnknownNode(NodeId, String),
    #[error("layout has no position for node {0}")]
    MissingPosition(NodeId),
}

/// An induced subgraph of one view together with where its nodes were when
/// it was grabbed.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Selection {
    source_view_id: String,
    node_ids: BTreeSet<NodeId>,
    edge_ids: BTreeSet<EdgeKey>,
    grab_positions: BTreeMap<NodeId, Point>,
}

impl Selection {
    fn induced(view: &ViewGraph, layout: &LayoutMap, node_ids: BTreeSet<NodeId>) -> Result<Self, SelectionError> {
        let grab_positions = node_ids
            .iter()
            .map(|id| {
                layout
                    .position(id)
                    .map(|p| (id.clone(), p.snapped()))
                    .ok_or_else(|| SelectionError::MissingPosition(id.clone()))
            })
            .collect::<Result<_, _>>()?;
        Ok(Self {
            source_view_id: view.view_id.clone(),
            edge_ids: view.induced_edges(&node_ids),
            node_ids,
            grab_positions,
        })
    }

    pub fn empty(source_view_id: impl Into<String>) -> Self {
        Self {
            source_view_id: source_view_id.into(),
            node_ids: BTreeSet::new(),
            edge_ids: BTreeSet::new(),
            grab_positions: BTreeMap::new(),
        }
    }

    pub fn source_view_id(&self) -> &str {
        &self.source_view_id
    }

    pub fn node_ids(&self) -> &BTreeSet<NodeId> {
        &self.node_ids
    }

    pub fn edge_ids(&self) -> &BTreeSet<EdgeKey> {
        &self.edge_ids
    }

    pub fn grab_positions(&self) -> &BTreeMap<NodeId, Point> {
        &self.grab_positions
    }

    pub fn is_empty(&self) -> bool {
        self.node_ids.is_empty()
    }
}

pub fn select_lasso(view: &ViewGraph, layout: &LayoutMap, polygon: &[Point]) -> Result<Selection, SelectionError> {
    if polygon.len() < 3 {
        return Err(SelectionError::DegeneratePolygon(polygon.len()));
    }
    let inside = view
        .node_ids
        .iter()
        .filter(|id| layout.position(id).is_some_and(|p| point_in_polygon(p, polygon)))
        .cloned()
        .collect();
    Selection::induced(view, layout, inside)
}

pub fn select_ids<'a, I>(view: &ViewGraph, layout: &LayoutMap, node_ids: I) -> Result<Selection, SelectionError>
where
    I: IntoIterator<Item = &'a NodeId>,
{
    let mut set = BTreeSet::new();
    for id in node_ids {
        if !view.contains_node(id) {
            return Err(SelectionError::UnknownNode(id.clone(), view.view_id.clone()));
        }
        set.insert(id.clone());
    }
    Selection::induced(view, layout, set)
}

#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct Highlight {
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<EdgeKey>,
}

/// Intersects the selection with every view, the source view included.
pub fn linked_highlight<'a, I>(selection: &Selection, views: I) -> BTreeMap<String, Highlight>
where
    I: IntoIterator<Item = &'a ViewGraph>,
{
    views
        .into_iter()
        .map(|v| {
            let h = Highlight {
                nodes: selection.node_ids.intersection(&v.node_ids).cloned().collect(),
                edges: selection.edge_ids.intersection(&v.edge_ids).cloned().collect(),
            };
            (v.view_id.clone(), h)
        })
        .collect()
}

/// Grab positions shifted by `delta`. The delta is snapped to the layout
/// grid first, which makes every pairwise offset survive bit-for-bit as
/// long as coordinates stay below 2^20 in magnitude.
pub fn translate_selection(selection: &Selection, delta: Vector) -> BTreeMap<NodeId, Point> {
    let delta = delta.snapped();
    selection
        .grab_positions
        .iter()
        .map(|(id, p)| (id.clone(), p.translated(delta)))
        .collect()
}

/// Outcome of dropping a selection onto a view.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct MatchResult {
    pub target_view_id: String,
    /// `V'_i ∩ V_j`
    pub matched_nodes: BTreeSet<NodeId>,
    /// `E'_i ∩ E_j`
    pub matched_edges: BTreeSet<EdgeKey>,
    /// `V'_i \ V_j`
    pub faded_nodes: BTreeSet<NodeId>,
    /// `E'_i \ E_j`
    pub faded_edges: BTreeSet<EdgeKey>,
    /// `V_j \ V'_i`
    pub grayed_nodes: BTreeSet<NodeId>,
    /// `E_j \ E'_i`
    pub grayed_edges: BTreeSet<EdgeKey>,
}

pub fn classify_drop(selection: &Selection, target: &ViewGraph) -> MatchResult {
    let sel_n = &selection.node_ids;
    let sel_e = &selection.edge_ids;
    MatchResult {
        target_view_id: target.view_id.clone(),
        matched_nodes: sel_n.intersection(&target.node_ids).cloned().collect(),
        matched_edges: sel_e.intersection(&target.edge_ids).cloned().collect(),
        faded_nodes: sel_n.difference(&target.node_ids).cloned().collect(),
        faded_edges: sel_e.difference(&target.edge_ids).cloned().collect(),
        grayed_nodes: target.node_ids.difference(sel_n).cloned().collect(),
        grayed_edges: target.edge_ids.difference(sel_e).cloned().collect(),
    }
}
