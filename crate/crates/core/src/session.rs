//! Interaction state machine for one client session.
//!
//! ```text
//!  Idle ──select──▶ Selected ──beginDrag──▶ Dragging ──drop──▶ Animating ──t=1──▶ Completed
//!                                              │  ▲                ▲                     │
//!                                hoverTarget+ctrl│  │ctrl released    │drop                 │clear
//!                                              ▼  │                │                     ▼
//!                                           PreviewScrub ──────────┘                   Idle
//! ```
//!
//! Every request either succeeds, replacing the state and emitting events
//! that end with a `state` event, or fails with a single `error` event and
//! leaves the state untouched.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::sync::Arc;

use thiserror::Error;

use crate::animation::{
    autoplay_schedule, plan_animation, sample, scrub_progress, AnimationError, InterpolationPlan, DEFAULT_DURATION_MS,
};
use crate::color::{community_palette, Palette};
use crate::coordination::{classify_drop, linked_highlight, select_ids, select_lasso, translate_selection, Selection};
use crate::geometry::{Point, Rect, Vector};
use crate::graph::{load_dataset, slice, NodeId, TemporalGraph, ViewGraph, ViewSpec};
use crate::layout::{compute_layout, LayoutMap, DEFAULT_ITERATIONS, DEFAULT_SEED};
use crate::protocol::{ErrorCode, Event, ModeKind, Request, ViewHighlight, ViewNode, ViewState};

/// Side of a default grid cell, in canvas pixels.
pub const GRID_CELL: f64 = 400.0;
/// Gap between default grid cells.
pub const GRID_GUTTER: f64 = 40.0;
/// Largest accepted drag displacement, in source-view units.
pub const MAX_DRAG: f64 = 1024.0;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SessionError {
    #[error("{request} not valid in mode {mode:?}")]
    IllegalTransition { request: &'static str, mode: ModeKind },
    #[error("no dataset loaded")]
    NoDataset,
    #[error("unknown view {0}")]
    UnknownView(String),
    #[error("malformed message: {0}")]
    Malformed(String),
    #[error("{0}")]
    InvalidDataset(String),
    #[error("{0}")]
    InvalidView(String),
    #[error("{0}")]
    InvalidSelection(String),
    #[error("{0}")]
    Animation(#[from] AnimationError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
}

impl SessionError {
    pub fn code(&self) -> ErrorCode {
        match self {
            SessionError::IllegalTransition { .. } | SessionError::NoDataset => ErrorCode::IllegalTransition,
            SessionError::UnknownView(_) => ErrorCode::UnknownView,
            SessionError::Malformed(_) => ErrorCode::MalformedMessage,
            SessionError::InvalidDataset(_) => ErrorCode::InvalidDataset,
            SessionError::InvalidView(_) => ErrorCode::InvalidView,
            SessionError::InvalidSelection(_) => ErrorCode::InvalidSelection,
            SessionError::Animation(AnimationError::DegenerateAnchors) => ErrorCode::DegenerateAnchors,
            SessionError::Animation(_) => ErrorCode::InvalidView,
            SessionError::Io { .. } => ErrorCode::Io,
        }
    }

    pub fn to_event(&self) -> Event {
        Event::Error {
            code: self.code(),
            detail: self.to_string(),
        }
    }
}

/// One small multiple: its definition, subgraph, layout, placement and colors.
#[derive(Debug, Clone, PartialEq)]
pub struct ViewEntry {
    pub spec: ViewSpec,
    pub graph: ViewGraph,
    pub layout: LayoutMap,
    pub viewport: Rect,
    pub palette: Palette,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SessionConfig {
    pub seed: u64,
    pub iterations: u32,
    pub duration_ms: u32,
    /// Directory that relative `loadDataset` paths resolve against.
    pub base_dir: Option<PathBuf>,
}

impl Default for SessionConfig {
    fn default() -> Self {
        Self {
            seed: DEFAULT_SEED,
            iterations: DEFAULT_ITERATIONS,
            duration_ms: DEFAULT_DURATION_MS,
            base_dir: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Grab {
    selection: Selection,
    source: usize,
}

#[derive(Debug, Clone, PartialEq)]
struct Drop {
    plan: Arc<InterpolationPlan>,
    target: usize,
}

#[derive(Debug, Clone, PartialEq)]
enum Mode {
    Idle,
    Selected(Grab),
    Dragging(Grab, Vector),
    PreviewScrub(Grab, Vector, Drop, f64),
    Animating {
        grab: Grab,
        delta: Vector,
        drop: Drop,
        /// Progress at which autoplay began.
        from: f64,
        elapsed_ms: f64,
        t: f64,
    },
    Completed(Grab, Vector, Drop),
}

impl Mode {
    fn kind(&self) -> ModeKind {
        match self {
            Mode::Idle => ModeKind::Idle,
            Mode::Selected(..) => ModeKind::Selected,
            Mode::Dragging(..) => ModeKind::Dragging,
            Mode::PreviewScrub(..) => ModeKind::PreviewScrub,
            Mode::Animating { .. } => ModeKind::Animating,
            Mode::Completed(..) => ModeKind::Completed,
        }
    }

    fn grab(&self) -> Option<&Grab> {
        match self {
            Mode::Idle => None,
            Mode::Selected(g) | Mode::Dragging(g, _) | Mode::PreviewScrub(g, ..) | Mode::Completed(g, ..) => Some(g),
            Mode::Animating { grab, .. } => Some(grab),
        }
    }

    fn drop(&self) -> Option<&Drop> {
        match self {
            Mode::PreviewScrub(_, _, d, _) | Mode::Completed(_, _, d) => Some(d),
            Mode::Animating { drop, .. } => Some(drop),
            _ => None,
        }
    }
}

/// Layout and timing parameters fixed by the last `defineViews`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct ViewParams {
    seed: u64,
    iterations: u32,
    duration_ms: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Session {
    config: SessionConfig,
    dataset: Option<Arc<TemporalGraph>>,
    views: Arc<Vec<ViewEntry>>,
    params: ViewParams,
    mode: Mode,
}

/// Result of a successful request, applied atomically.
struct Outcome {
    mode: Mode,
    dataset: Option<Arc<TemporalGraph>>,
    views: Option<(Arc<Vec<ViewEntry>>, ViewParams)>,
    events: Vec<Event>,
}

impl Outcome {
    fn mode(mode: Mode, events: Vec<Event>) -> Self {
        Self {
            mode,
            dataset: None,
            views: None,
            events,
        }
    }
}

impl Session {
    pub fn new(config: SessionConfig) -> Self {
        let params = ViewParams {
            seed: config.seed,
            iterations: config.iterations,
            duration_ms: config.duration_ms,
        };
        Self {
            config,
            dataset: None,
            views: Arc::new(Vec::new()),
            params,
            mode: Mode::Idle,
        }
    }

    pub fn mode(&self) -> ModeKind {
        self.mode.kind()
    }

    pub fn dataset(&self) -> Option<&TemporalGraph> {
        self.dataset.as_deref()
    }

    pub fn views(&self) -> &[ViewEntry] {
        &self.views
    }

    pub fn view(&self, id: &str) -> Option<&ViewEntry> {
        self.views.iter().find(|v| v.spec.view_id == id)
    }

    pub fn current_selection(&self) -> Option<&Selection> {
        self.mode.grab().map(|g| &g.selection)
    }

    pub fn drag_delta(&self) -> Option<Vector> {
        match &self.mode {
            Mode::Dragging(_, d) | Mode::PreviewScrub(_, d, ..) | Mode::Completed(_, d, _) => Some(*d),
            Mode::Animating { delta, .. } => Some(*delta),
            _ => None,
        }
    }

    pub fn active_plan(&self) -> Option<&InterpolationPlan> {
        self.mode.drop().map(|d| d.plan.as_ref())
    }

    pub fn scrub_t(&self) -> Option<f64> {
        match self.mode {
            Mode::PreviewScrub(.., t) => Some(t),
            _ => None,
        }
    }

    /// Current animation progress in `Animating`, `PreviewScrub` and `Completed`.
    pub fn progress(&self) -> Option<f64> {
        match self.mode {
            Mode::PreviewScrub(.., t) => Some(t),
            Mode::Animating { t, .. } => Some(t),
            Mode::Completed(..) => Some(1.0),
            _ => None,
        }
    }

    /// The view whose viewport contains `point` (min edges inclusive, max
    /// edges exclusive).
    pub fn hit_view(&self, point: Point) -> Option<&str> {
        hit_index(&self.views, point).map(|i| self.views[i].spec.view_id.as_str())
    }

    /// Parses one wire message and handles it.
    pub fn handle_text(&mut self, text: &str) -> Vec<Event> {
        match serde_json::from_str::<Request>(text) {
            Ok(req) => self.handle(req),
            Err(e) => vec![SessionError::Malformed(e.to_string()).to_event()],
        }
    }

    pub fn handle(&mut self, request: Request) -> Vec<Event> {
        match self.step(request) {
            Ok(out) => {
                if let Some(d) = out.dataset {
                    self.dataset = Some(d);
                    self.views = Arc::new(Vec::new());
                }
                if let Some((views, params)) = out.views {
                    self.views = views;
                    self.params = params;
                }
                self.mode = out.mode;
                let mut events = out.events;
                events.push(Event::State { mode: self.mode.kind() });
                events
            }
            Err(e) => vec![e.to_event()],
        }
    }

    fn illegal(&self, request: &Request) -> SessionError {
        SessionError::IllegalTransition {
            request: request.kind(),
            mode: self.mode.kind(),
        }
    }

    fn view_index(&self, id: &str) -> Result<usize, SessionError> {
        self.views
            .iter()
            .position(|v| v.spec.view_id == id)
            .ok_or_else(|| SessionError::UnknownView(id.to_owned()))
    }

    fn step(&self, request: Request) -> Result<Outcome, SessionError> {
        let kind = self.mode.kind();
        match request {
            Request::LoadDataset { path, inline } if kind == ModeKind::Idle => self.load(path, inline),
            Request::DefineViews {
                specs,
                seed,
                iterations,
                duration_ms,
                viewports,
            } if kind == ModeKind::Idle => self.define_views(specs, seed, iterations, duration_ms, viewports),
            Request::Select { view, lasso, ids } if matches!(kind, ModeKind::Idle | ModeKind::Selected) => {
                self.select(&view, lasso, ids)
            }
            Request::BeginDrag => match &self.mode {
                Mode::Selected(grab) => {
                    let delta = Vector::default();
                    let event = drag_event(&self.views, grab, delta);
                    Ok(Outcome::mode(Mode::Dragging(grab.clone(), delta), vec![event]))
                }
                _ => Err(self.illegal(&request)),
            },
            Request::DragMove { dx, dy } => match &self.mode {
                Mode::Dragging(grab, _) => {
                    let delta = Vector::new(dx, dy);
                    if !delta.is_finite() || dx.abs() > MAX_DRAG || dy.abs() > MAX_DRAG {
                        return Err(SessionError::Malformed(format!("drag delta ({dx}, {dy}) out of range")));
                    }
                    let delta = delta.snapped();
                    let event = drag_event(&self.views, grab, delta);
                    Ok(Outcome::mode(Mode::Dragging(grab.clone(), delta), vec![event]))
                }
                _ => Err(self.illegal(&request)),
            },
            Request::HoverTarget { ref view, ctrl } => {
                if !matches!(kind, ModeKind::Dragging | ModeKind::PreviewScrub) {
                    return Err(self.illegal(&request));
                }
                let target = self.view_index(view)?;
                self.hover(target, ctrl)
            }
            Request::Scrub { x, y } => match &self.mode {
                Mode::PreviewScrub(grab, delta, drop, _) => {
                    let t = scrub_progress(
                        Point::new(x, y),
                        self.views[grab.source].viewport.center(),
                        self.views[drop.target].viewport.center(),
                    )?;
                    let frame = sample(&drop.plan, t)?;
                    Ok(Outcome::mode(
                        Mode::PreviewScrub(grab.clone(), *delta, drop.clone(), t),
                        vec![Event::Frame {
                            mode: ModeKind::PreviewScrub,
                            frame,
                        }],
                    ))
                }
                _ => Err(self.illegal(&request)),
            },
            Request::Drop { x, y, .. } => {
                if !matches!(kind, ModeKind::Dragging | ModeKind::PreviewScrub) {
                    return Err(self.illegal(&request));
                }
                if !(x.is_finite() && y.is_finite()) {
                    return Err(SessionError::Malformed("drop position is not finite".into()));
                }
                self.drop_at(Point::new(x, y))
            }
            Request::Tick { elapsed_ms } => match &self.mode {
                Mode::Animating {
                    grab,
                    delta,
                    drop,
                    from,
                    elapsed_ms: before,
                    ..
                } => {
                    if !(elapsed_ms.is_finite() && elapsed_ms >= 0.0) {
                        return Err(SessionError::Malformed(format!("elapsedMs {elapsed_ms} must be a non-negative number")));
                    }
                    let elapsed = before + elapsed_ms;
                    let t = autoplay_schedule(&drop.plan, from * drop.plan.duration_ms as f64 + elapsed);
                    Ok(animate(grab.clone(), *delta, drop.clone(), *from, elapsed, t)?)
                }
                _ => Err(self.illegal(&request)),
            },
            Request::Cancel if matches!(
                kind,
                ModeKind::Selected | ModeKind::Dragging | ModeKind::PreviewScrub | ModeKind::Completed
            ) =>
            {
                Ok(Outcome::mode(Mode::Idle, Vec::new()))
            }
            Request::Clear if matches!(kind, ModeKind::Idle | ModeKind::Selected | ModeKind::Completed) => {
                Ok(Outcome::mode(Mode::Idle, Vec::new()))
            }
            other => Err(self.illegal(&other)),
        }
    }

    fn load(&self, path: Option<String>, inline: Option<serde_json::Value>) -> Result<Outcome, SessionError> {
        let bytes = match (path, inline) {
            (Some(p), None) => {
                let full = match &self.config.base_dir {
                    Some(base) => base.join(&p),
                    None => PathBuf::from(&p),
                };
                std::fs::read(&full).map_err(|e| SessionError::Io {
                    path: full.display().to_string(),
                    message: e.to_string(),
                })?
            }
            (None, Some(doc)) => serde_json::to_vec(&doc).expect("value serializes"),
            _ => return Err(SessionError::Malformed("loadDataset needs exactly one of path or inline".into())),
        };
        let graph = load_dataset(bytes.as_slice()).map_err(|e| SessionError::InvalidDataset(e.to_string()))?;
        let events = vec![Event::Dataset {
            frames: graph.frames().len(),
            nodes: graph.node_count(),
            edges: graph.edge_count(),
        }];
        Ok(Outcome {
            mode: Mode::Idle,
            dataset: Some(Arc::new(graph)),
            views: None,
            events,
        })
    }

    fn define_views(
        &self,
        specs: Vec<ViewSpec>,
        seed: Option<u64>,
        iterations: Option<u32>,
        duration_ms: Option<u32>,
        viewports: Option<Vec<Rect>>,
    ) -> Result<Outcome, SessionError> {
        let dataset = self.dataset.as_ref().ok_or(SessionError::NoDataset)?;
        let params = ViewParams {
            seed: seed.unwrap_or(self.config.seed),
            iterations: iterations.unwrap_or(self.config.iterations),
            duration_ms: duration_ms.unwrap_or(self.config.duration_ms),
        };
        if params.iterations == 0 || params.duration_ms == 0 {
            return Err(SessionError::Malformed("iterations and durationMs must be positive".into()));
        }
        let viewports = match viewports {
            Some(v) => {
                if v.len() != specs.len() {
                    return Err(SessionError::InvalidView(format!(
                        "{} viewports for {} views",
                        v.len(),
                        specs.len()
                    )));
                }
                check_viewports(&v)?;
                v
            }
            None => grid_viewports(specs.len()),
        };
        let mut views = Vec::with_capacity(specs.len());
        for (spec, viewport) in specs.into_iter().zip(viewports) {
            if views.iter().any(|v: &ViewEntry| v.spec.view_id == spec.view_id) {
                return Err(SessionError::InvalidView(format!("duplicate view id {}", spec.view_id)));
            }
            let graph = slice(dataset, &spec).map_err(|e| SessionError::InvalidView(format!("{}: {e}", spec.view_id)))?;
            let layout = compute_layout(&graph, params.seed, params.iterations)
                .map_err(|e| SessionError::InvalidView(e.to_string()))?;
            let palette = community_palette(&graph);
            views.push(ViewEntry {
                spec,
                graph,
                layout,
                viewport,
                palette,
            });
        }
        let event = Event::Views {
            seed: params.seed,
            iterations: params.iterations,
            duration_ms: params.duration_ms,
            views: views.iter().map(view_state).collect(),
        };
        Ok(Outcome {
            mode: Mode::Idle,
            dataset: None,
            views: Some((Arc::new(views), params)),
            events: vec![event],
        })
    }

    fn select(&self, view: &str, lasso: Option<Vec<Point>>, ids: Option<Vec<NodeId>>) -> Result<Outcome, SessionError> {
        let source = self.view_index(view)?;
        let entry = &self.views[source];
        let selection = match (lasso, ids) {
            (Some(polygon), None) => {
                if polygon.iter().any(|p| !p.is_finite()) {
                    return Err(SessionError::Malformed("lasso vertex is not finite".into()));
                }
                select_lasso(&entry.graph, &entry.layout, &polygon)
            }
            (None, Some(ids)) => select_ids(&entry.graph, &entry.layout, &ids),
            _ => return Err(SessionError::Malformed("select needs exactly one of lasso or ids".into())),
        }
        .map_err(|e| SessionError::InvalidSelection(e.to_string()))?;

        let highlights = linked_highlight(&selection, self.views.iter().map(|v| &v.graph));
        let event = Event::Highlight {
            source: view.to_owned(),
            views: self
                .views
                .iter()
                .map(|v| {
                    let h = &highlights[&v.spec.view_id];
                    ViewHighlight {
                        view_id: v.spec.view_id.clone(),
                        nodes: h.nodes.clone(),
                        edges: h.edges.clone(),
                    }
                })
                .collect(),
        };
        Ok(Outcome::mode(Mode::Selected(Grab { selection, source }), vec![event]))
    }

    fn build_drop(&self, grab: &Grab, delta: Vector, target: usize) -> Result<Drop, SessionError> {
        let src = &self.views[grab.source];
        let tgt = &self.views[target];
        let dragged = translate_selection(&grab.selection, delta);
        let released: BTreeMap<NodeId, Point> = if grab.source == target {
            dragged
        } else {
            dragged
                .into_iter()
                .map(|(id, p)| (id, tgt.viewport.to_local(src.viewport.to_global(p))))
                .collect()
        };
        let matched = classify_drop(&grab.selection, &tgt.graph);
        let plan = plan_animation(
            &matched,
            &released,
            &tgt.layout,
            &src.palette,
            &tgt.palette,
            &src.spec.view_id,
            self.params.duration_ms,
        )?;
        Ok(Drop {
            plan: Arc::new(plan),
            target,
        })
    }

    fn hover(&self, target: usize, ctrl: bool) -> Result<Outcome, SessionError> {
        match (&self.mode, ctrl) {
            (Mode::Dragging(grab, delta), false) => Ok(Outcome::mode(Mode::Dragging(grab.clone(), *delta), Vec::new())),
            (Mode::PreviewScrub(grab, delta, ..), false) => {
                Ok(Outcome::mode(Mode::Dragging(grab.clone(), *delta), Vec::new()))
            }
            (Mode::PreviewScrub(grab, delta, drop, t), true) if drop.target == target => Ok(Outcome::mode(
                Mode::PreviewScrub(grab.clone(), *delta, drop.clone(), *t),
                Vec::new(),
            )),
            (Mode::Dragging(grab, delta) | Mode::PreviewScrub(grab, delta, ..), true) => {
                let drop = self.build_drop(grab, *delta, target)?;
                let frame = sample(&drop.plan, 0.0)?;
                let events = vec![
                    Event::Plan { plan: drop.plan.clone() },
                    Event::Frame {
                        mode: ModeKind::PreviewScrub,
                        frame,
                    },
                ];
                Ok(Outcome::mode(Mode::PreviewScrub(grab.clone(), *delta, drop, 0.0), events))
            }
            _ => unreachable!("hover guarded by mode check"),
        }
    }

    fn drop_at(&self, point: Point) -> Result<Outcome, SessionError> {
        let Some(target) = hit_index(&self.views, point) else {
            return Ok(Outcome::mode(Mode::Idle, Vec::new()));
        };
        match &self.mode {
            Mode::PreviewScrub(grab, delta, drop, t) if drop.target == target => {
                animate(grab.clone(), *delta, drop.clone(), *t, 0.0, *t)
            }
            Mode::Dragging(grab, delta) | Mode::PreviewScrub(grab, delta, ..) => {
                let drop = self.build_drop(grab, *delta, target)?;
                let plan_event = Event::Plan { plan: drop.plan.clone() };
                let mut out = animate(grab.clone(), *delta, drop, 0.0, 0.0, 0.0)?;
                out.events.insert(0, plan_event);
                Ok(out)
            }
            _ => unreachable!("drop guarded by mode check"),
        }
    }

    /// Checks every structural invariant of the session; used by tests and
    /// the model checker.
    pub fn check_invariants(&self) -> Result<(), String> {
        for (i, a) in self.views.iter().enumerate() {
            if !a.viewport.is_valid() {
                return Err(format!("viewport of {} is degenerate", a.spec.view_id));
            }
            for b in &self.views[i + 1..] {
                if a.viewport.overlaps(&b.viewport) {
                    return Err(format!("viewports of {} and {} overlap", a.spec.view_id, b.spec.view_id));
                }
            }
            if a.layout.positions().keys().ne(a.graph.node_ids.iter()) {
                return Err(format!("layout of {} does not cover its nodes", a.spec.view_id));
            }
            if a.graph
                .edge_ids
                .iter()
                .any(|e| !a.graph.contains_node(e.lo()) || !a.graph.contains_node(e.hi()))
            {
                return Err(format!("view {} has a dangling edge", a.spec.view_id));
            }
        }

        let kind = self.mode.kind();
        let needs_selection = kind != ModeKind::Idle;
        let needs_plan = matches!(kind, ModeKind::PreviewScrub | ModeKind::Animating | ModeKind::Completed);
        if self.current_selection().is_some() != needs_selection {
            return Err(format!("selection presence wrong in {kind:?}"));
        }
        if self.active_plan().is_some() != needs_plan {
            return Err(format!("plan presence wrong in {kind:?}"));
        }
        if self.scrub_t().is_some() != (kind == ModeKind::PreviewScrub) {
            return Err(format!("scrub_t presence wrong in {kind:?}"));
        }

        if let Some(grab) = self.mode.grab() {
            let view = self.views.get(grab.source).ok_or("selection source view missing")?;
            let sel = &grab.selection;
            if sel.source_view_id() != view.spec.view_id {
                return Err("selection source id mismatch".into());
            }
            if !sel.node_ids().is_subset(&view.graph.node_ids) {
                return Err("selection escapes its source view".into());
            }
            if sel.edge_ids() != &view.graph.induced_edges(sel.node_ids()) {
                return Err("selection is not induced".into());
            }
            if sel.grab_positions().keys().ne(sel.node_ids().iter()) {
                return Err("grab positions do not cover the selection".into());
            }
        }
        if let Some(d) = self.drag_delta() {
            if !d.is_finite() {
                return Err("drag delta not finite".into());
            }
        }
        if let (Some(grab), Some(drop)) = (self.mode.grab(), self.mode.drop()) {
            let target = self.views.get(drop.target).ok_or("plan target view missing")?;
            let plan = &drop.plan;
            if plan.target_view_id != target.spec.view_id {
                return Err("plan target id mismatch".into());
            }
            let m = classify_drop(&grab.selection, &target.graph);
            let matched: Vec<_> = plan.color_tracks.keys().collect();
            if matched.iter().copied().ne(m.matched_nodes.iter())
                || plan.node_tracks.keys().ne(grab.selection.node_ids().iter())
                || plan.edge_tracks.keys().ne(grab.selection.edge_ids().iter())
                || plan.grayed_nodes != m.grayed_nodes
                || plan.grayed_edges != m.grayed_edges
            {
                return Err("plan tracks diverge from drop classification".into());
            }
        }
        if let Some(t) = self.progress() {
            if !(0.0..=1.0).contains(&t) {
                return Err(format!("progress {t} out of range"));
            }
        }
        Ok(())
    }
}

/// Enters `Animating` at progress `t`, or `Completed` when `t` is already 1
/// or there is nothing to animate.
fn animate(grab: Grab, delta: Vector, drop: Drop, from: f64, elapsed_ms: f64, t: f64) -> Result<Outcome, SessionError> {
    let done = t >= 1.0 || drop.plan.is_static();
    let t = if done { 1.0 } else { t };
    let frame = sample(&drop.plan, t)?;
    let (mode, kind) = if done {
        (Mode::Completed(grab, delta, drop), ModeKind::Completed)
    } else {
        (
            Mode::Animating {
                grab,
                delta,
                drop,
                from,
                elapsed_ms,
                t,
            },
            ModeKind::Animating,
        )
    };
    Ok(Outcome::mode(mode, vec![Event::Frame { mode: kind, frame }]))
}

fn drag_event(views: &[ViewEntry], grab: &Grab, delta: Vector) -> Event {
    Event::Drag {
        view: views[grab.source].spec.view_id.clone(),
        dx: delta.dx,
        dy: delta.dy,
        positions: translate_selection(&grab.selection, delta),
    }
}

fn hit_index(views: &[ViewEntry], point: Point) -> Option<usize> {
    views.iter().position(|v| v.viewport.contains(point))
}

/// Row-major square grid, `ceil(sqrt(n))` columns.
pub fn grid_viewports(n: usize) -> Vec<Rect> {
    let mut cols = 1;
    while cols * cols < n {
        cols += 1;
    }
    (0..n)
        .map(|i| {
            let (row, col) = (i / cols, i % cols);
            Rect::new(
                col as f64 * (GRID_CELL + GRID_GUTTER),
                row as f64 * (GRID_CELL + GRID_GUTTER),
                GRID_CELL,
                GRID_CELL,
            )
        })
        .collect()
}

fn check_viewports(rects: &[Rect]) -> Result<(), SessionError> {
    for (i, a) in rects.iter().enumerate() {
        if !a.is_valid() {
            return Err(SessionError::InvalidView(format!("viewport {i} is degenerate")));
        }
        if let Some(j) = rects[i + 1..].iter().position(|b| a.overlaps(b)) {
            return Err(SessionError::InvalidView(format!("viewports {i} and {} overlap", i + 1 + j)));
        }
    }
    Ok(())
}

fn view_state(v: &ViewEntry) -> ViewState {
    ViewState {
        view_id: v.spec.view_id.clone(),
        spec: v.spec.clone(),
        viewport: v.viewport,
        nodes: v
            .layout
            .positions()
            .iter()
            .map(|(id, p)| ViewNode {
                id: id.clone(),
                x: p.x,
                y: p.y,
                community: v.graph.community_of[id].clone(),
                color: v.palette[id],
            })
            .collect(),
        edges: v.graph.edge_ids.iter().cloned().collect(),
    }
}
