//! Drop animation: an [`InterpolationPlan`] built once per drop, sampled as
//! a closed-form function of progress `t`.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Serialize, Serializer};
use serde_json::value::RawValue;
use thiserror::Error;

use crate::color::{Palette, Rgb};
use crate::coordination::MatchResult;
use crate::geometry::{Point, Vector};
use crate::graph::{EdgeKey, NodeId};
use crate::layout::LayoutMap;

pub const DEFAULT_DURATION_MS: u32 = 800;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Role {
    Matched,
    Faded,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NodeTrack {
    pub start: Point,
    pub end: Point,
    pub role: Role,
    /// Color in the source view.
    pub color: Rgb,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ColorTrack {
    pub start: Rgb,
    pub end: Rgb,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct InterpolationPlan {
    pub source_view_id: String,
    pub target_view_id: String,
    pub node_tracks: BTreeMap<NodeId, NodeTrack>,
    #[serde(serialize_with = "edge_roles")]
    pub edge_tracks: BTreeMap<EdgeKey, Role>,
    pub grayed_nodes: BTreeSet<NodeId>,
    pub grayed_edges: BTreeSet<EdgeKey>,
    /// Matched nodes only.
    pub color_tracks: BTreeMap<NodeId, ColorTrack>,
    pub duration_ms: u32,
}

fn edge_roles<S: Serializer>(tracks: &BTreeMap<EdgeKey, Role>, s: S) -> Result<S::Ok, S::Error> {
    #[derive(Serialize)]
    struct Entry<'a> {
        source: &'a NodeId,
        target: &'a NodeId,
        role: Role,
    }
    s.collect_seq(tracks.iter().map(|(k, &role)| Entry {
        source: k.lo(),
        target: k.hi(),
        role,
    }))
}

impl InterpolationPlan {
    /// True when nothing moves or fades, so the animation has zero length.
    pub fn is_static(&self) -> bool {
        self.node_tracks.is_empty() && self.edge_tracks.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnimationError {
    #[error("no position for node {0}")]
    MissingPosition(NodeId),
    #[error("no color for node {0}")]
    MissingColor(NodeId),
    #[error("animation duration must be positive")]
    ZeroDuration,
    #[error("progress {0} outside [0, 1]")]
    ProgressOutOfRange(f64),
    #[error("scrub anchors coincide")]
    DegenerateAnchors,
    #[error("scrub position is not finite")]
    NonFinitePointer,
}

pub fn plan_animation(
    matched: &MatchResult,
    released: &BTreeMap<NodeId, Point>,
    target_layout: &LayoutMap,
    source_palette: &Palette,
    target_palette: &Palette,
    source_view_id: &str,
    duration_ms: u32,
) -> Result<InterpolationPlan, AnimationError> {
    if duration_ms == 0 {
        return Err(AnimationError::ZeroDuration);
    }
    let released_at = |id: &NodeId| released.get(id).copied().ok_or_else(|| AnimationError::MissingPosition(id.clone()));
    let color_in = |p: &Palette, id: &NodeId| p.get(id).copied().ok_or_else(|| AnimationError::MissingColor(id.clone()));

    let mut node_tracks = BTreeMap::new();
    let mut color_tracks = BTreeMap::new();
    for id in &matched.matched_nodes {
        let start = released_at(id)?;
        let end = target_layout
            .position(id)
            .ok_or_else(|| AnimationError::MissingPosition(id.clone()))?;
        let colors = ColorTrack {
            start: color_in(source_palette, id)?,
            end: color_in(target_palette, id)?,
        };
        node_tracks.insert(
            id.clone(),
            NodeTrack {
                start,
                end,
                role: Role::Matched,
                color: colors.start,
            },
        );
        color_tracks.insert(id.clone(), colors);
    }
    for id in &matched.faded_nodes {
        let at = released_at(id)?;
        node_tracks.insert(
            id.clone(),
            NodeTrack {
                start: at,
                end: at,
                role: Role::Faded,
                color: color_in(source_palette, id)?,
            },
        );
    }

    let edge_tracks = matched
        .matched_edges
        .iter()
        .map(|e| (e.clone(), Role::Matched))
        .chain(matched.faded_edges.iter().map(|e| (e.clone(), Role::Faded)))
        .collect();

    Ok(InterpolationPlan {
        source_view_id: source_view_id.to_owned(),
        target_view_id: matched.target_view_id.clone(),
        node_tracks,
        edge_tracks,
        grayed_nodes: matched.grayed_nodes.clone(),
        grayed_edges: matched.grayed_edges.clone(),
        color_tracks,
        duration_ms,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeState {
    pub position: Point,
    pub alpha: f64,
    pub color: Rgb,
}

/// Rendering state of a plan at one progress value.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub progress: f64,
    pub nodes: BTreeMap<NodeId, NodeState>,
    pub edges: BTreeMap<EdgeKey, f64>,
    pub grayed_nodes: BTreeSet<NodeId>,
    pub grayed_edges: BTreeSet<EdgeKey>,
}

fn lerp_point(start: Point, end: Point, t: f64) -> Point {
    // endpoints are returned verbatim so no rounding can creep in there
    if t == 0.0 {
        start
    } else if t == 1.0 {
        end
    } else {
        Point::new(start.x + t * (end.x - start.x), start.y + t * (end.y - start.y))
    }
}

pub fn sample(plan: &InterpolationPlan, t: f64) -> Result<Frame, AnimationError> {
    if !(0.0..=1.0).contains(&t) {
        return Err(AnimationError::ProgressOutOfRange(t));
    }
    let nodes = plan
        .node_tracks
        .iter()
        .map(|(id, track)| {
            let state = match track.role {
                Role::Matched => {
                    let colors = plan.color_tracks[id];
                    NodeState {
                        position: lerp_point(track.start, track.end, t),
                        alpha: 1.0,
                        color: colors.start.mix(colors.end, t),
                    }
                }
                Role::Faded => NodeState {
                    position: track.start,
                    alpha: 1.0 - t,
                    color: track.color,
                },
            };
            (id.clone(), state)
        })
        .collect();
    let edges = plan
        .edge_tracks
        .iter()
        .map(|(k, role)| {
            let alpha = match role {
                Role::Matched => 1.0,
                Role::Faded => 1.0 - t,
            };
            (k.clone(), alpha)
        })
        .collect();
    Ok(Frame {
        progress: t,
        nodes,
        edges,
        grayed_nodes: plan.grayed_nodes.clone(),
        grayed_edges: plan.grayed_edges.clone(),
    })
}

/// Projects the pointer onto the line from the source view's center to the
/// target view's center; the clamped fraction along it is the progress.
pub fn scrub_progress(mouse: Point, source_anchor: Point, target_anchor: Point) -> Result<f64, AnimationError> {
    let axis = target_anchor.offset_from(source_anchor);
    let len2 = axis.dot(axis);
    if !(len2 > 0.0 && len2.is_finite()) {
        return Err(AnimationError::DegenerateAnchors);
    }
    if !mouse.is_finite() {
        return Err(AnimationError::NonFinitePointer);
    }
    let along: Vector = mouse.offset_from(source_anchor);
    Ok((along.dot(axis) / len2).clamp(0.0, 1.0))
}

pub fn autoplay_schedule(plan: &InterpolationPlan, elapsed_ms: f64) -> f64 {
    let t = elapsed_ms / plan.duration_ms as f64;
    if t.is_nan() {
        0.0
    } else {
        t.clamp(0.0, 1.0)
    }
}

/// Number written with exactly nine decimal digits.
#[derive(Debug, Clone, Copy)]
pub struct Fixed9(pub f64);

impl Serialize for Fixed9 {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut text = format!("{:.9}", self.0);
        if text == "-0.000000000" {
            text.remove(0);
        }
        RawValue::from_string(text)
            .map_err(serde::ser::Error::custom)?
            .serialize(s)
    }
}

#[derive(Serialize)]
struct NodeDump<'a> {
    id: &'a NodeId,
    x: Fixed9,
    y: Fixed9,
    alpha: Fixed9,
    color: Rgb,
}

#[derive(Serialize)]
struct EdgeDump<'a> {
    source: &'a NodeId,
    target: &'a NodeId,
    alpha: Fixed9,
}

/// Serializable view of a [`Frame`] in the dump format: canonical array
/// order, numbers with nine decimals.
#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
pub struct FrameDump<'a> {
    progress: Fixed9,
    nodes: Vec<NodeDump<'a>>,
    edges: Vec<EdgeDump<'a>>,
    grayed_nodes: &'a BTreeSet<NodeId>,
    grayed_edges: &'a BTreeSet<EdgeKey>,
}

impl Frame {
    pub fn dump(&self) -> FrameDump<'_> {
        FrameDump {
            progress: Fixed9(self.progress),
            nodes: self
                .nodes
                .iter()
                .map(|(id, s)| NodeDump {
                    id,
                    x: Fixed9(s.position.x),
                    y: Fixed9(s.position.y),
                    alpha: Fixed9(s.alpha),
                    color: s.color,
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|(k, &alpha)| EdgeDump {
                    source: k.lo(),
                    target: k.hi(),
                    alpha: Fixed9(alpha),
                })
                .collect(),
            grayed_nodes: &self.grayed_nodes,
            grayed_edges: &self.grayed_edges,
        }
    }

    pub fn to_dump_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.dump()).expect("frame serializes");
        s.push('\n');
        s
    }
}
