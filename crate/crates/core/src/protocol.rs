//! JSON message schema spoken between a client and a [`crate::session::Session`].
//! One JSON object per message, discriminated by `"type"`.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use serde::{Deserialize, Serialize, Serializer};

use crate::animation::{Frame, InterpolationPlan};
use crate::color::Rgb;
use crate::geometry::{Point, Rect};
use crate::graph::{EdgeKey, NodeId, ViewSpec};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "camelCase", deny_unknown_fields)]
pub enum Request {
    /// Exactly one of `path` or `inline` (the dataset document itself).
    LoadDataset {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        path: Option<String>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        inline: Option<serde_json::Value>,
    },
    #[serde(rename_all = "camelCase")]
    DefineViews {
        specs: Vec<ViewSpec>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        iterations: Option<u32>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        duration_ms: Option<u32>,
        /// Global canvas rectangles, one per spec. A grid is used when absent.
        #[serde(default, skip_serializing_if = "Option::is_none")]
        viewports: Option<Vec<Rect>>,
    },
    /// Exactly one of `lasso` (source-view unit coordinates) or `ids`.
    Select {
        view: String,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        lasso: Option<Vec<Point>>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        ids: Option<Vec<NodeId>>,
    },
    BeginDrag,
    /// Cumulative displacement since `beginDrag`, in source-view units.
    DragMove { dx: f64, dy: f64 },
    HoverTarget {
        view: String,
        #[serde(default)]
        ctrl: bool,
    },
    /// Pointer position in global canvas coordinates.
    Scrub { x: f64, y: f64 },
    /// Release position in global canvas coordinates.
    Drop {
        x: f64,
        y: f64,
        #[serde(default)]
        ctrl: bool,
    },
    /// Milliseconds elapsed since the previous tick.
    #[serde(rename_all = "camelCase")]
    Tick { elapsed_ms: f64 },
    Cancel,
    Clear,
}

impl Request {
    pub fn kind(&self) -> &'static str {
        match self {
            Request::LoadDataset { .. } => "loadDataset",
            Request::DefineViews { .. } => "defineViews",
            Request::Select { .. } => "select",
            Request::BeginDrag => "beginDrag",
            Request::DragMove { .. } => "dragMove",
            Request::HoverTarget { .. } => "hoverTarget",
            Request::Scrub { .. } => "scrub",
            Request::Drop { .. } => "drop",
            Request::Tick { .. } => "tick",
            Request::Cancel => "cancel",
            Request::Clear => "clear",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ModeKind {
    Idle,
    Selected,
    Dragging,
    PreviewScrub,
    Animating,
    Completed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ErrorCode {
    IllegalTransition,
    UnknownView,
    MalformedMessage,
    InvalidDataset,
    InvalidView,
    InvalidSelection,
    DegenerateAnchors,
    Io,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ViewNode {
    pub id: NodeId,
    pub x: f64,
    pub y: f64,
    pub community: String,
    pub color: Rgb,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ViewState {
    pub view_id: String,
    pub spec: ViewSpec,
    pub viewport: Rect,
    pub nodes: Vec<ViewNode>,
    pub edges: Vec<EdgeKey>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ViewHighlight {
    pub view_id: String,
    pub nodes: BTreeSet<NodeId>,
    pub edges: BTreeSet<EdgeKey>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "type", rename_all = "camelCase")]
pub enum Event {
    Dataset {
        frames: usize,
        nodes: usize,
        edges: usize,
    },
    #[serde(rename_all = "camelCase")]
    Views {
        seed: u64,
        iterations: u32,
        duration_ms: u32,
        views: Vec<ViewState>,
    },
    Highlight {
        source: String,
        views: Vec<ViewHighlight>,
    },
    /// Positions of the dragged selection in source-view units.
    Drag {
        view: String,
        dx: f64,
        dy: f64,
        positions: BTreeMap<NodeId, Point>,
    },
    Plan {
        #[serde(serialize_with = "arc_plan")]
        plan: Arc<InterpolationPlan>,
    },
    Frame {
        mode: ModeKind,
        #[serde(serialize_with = "frame_dump")]
        frame: Frame,
    },
    State {
        mode: ModeKind,
    },
    Error {
        code: ErrorCode,
        detail: String,
    },
}

impl Event {
    pub fn kind(&self) -> &'static str {
        match self {
            Event::Dataset { .. } => "dataset",
            Event::Views { .. } => "views",
            Event::Highlight { .. } => "highlight",
            Event::Drag { .. } => "drag",
            Event::Plan { .. } => "plan",
            Event::Frame { .. } => "frame",
            Event::State { .. } => "state",
            Event::Error { .. } => "error",
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("events serialize")
    }
}

fn arc_plan<S: Serializer>(plan: &Arc<InterpolationPlan>, s: S) -> Result<S::Ok, S::Error> {
    plan.as_ref().serialize(s)
}

fn frame_dump<S: Serializer>(frame: &Frame, s: S) -> Result<S::Ok, S::Error> {
    frame.dump().serialize(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn request_wire_names() {
        let r: Request = serde_json::from_str(r#"{"type":"tick","elapsedMs":16.5}"#).unwrap();
        assert_eq!(r, Request::Tick { elapsed_ms: 16.5 });
        let r: Request = serde_json::from_str(r#"{"type":"hoverTarget","view":"v2","ctrl":true}"#).unwrap();
        assert_eq!(r, Request::HoverTarget { view: "v2".into(), ctrl: true });
        let r: Request = serde_json::from_str(r#"{"type":"select","view":"v1","lasso":[[0,0],[1,0],[1,1]]}"#).unwrap();
        assert!(matches!(r, Request::Select { lasso: Some(ref l), .. } if l.len() == 3));
        let r: Request = serde_json::from_str(r#"{"type":"beginDrag"}"#).unwrap();
        assert_eq!(r, Request::BeginDrag);
        assert!(serde_json::from_str::<Request>(r#"{"type":"warp"}"#).is_err());
        assert!(serde_json::from_str::<Request>(r#"{"type":"dragMove","dx":1}"#).is_err());
    }

    #[test]
    fn event_wire_names() {
        let e = Event::Error {
            code: ErrorCode::IllegalTransition,
            detail: "x".into(),
        };
        assert_eq!(e.to_json(), r#"{"type":"error","code":"IllegalTransition","detail":"x"}"#);
        let e = Event::State { mode: ModeKind::PreviewScrub };
        assert_eq!(e.to_json(), r#"{"type":"state","mode":"PreviewScrub"}"#);
    }
}
