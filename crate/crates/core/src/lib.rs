//! Coordination engine for drag-and-drop subgraph transfer between
//! small-multiple views of a temporal graph.
//!
//! The pipeline runs [`graph`] (load and slice) → [`layout`] (per-view
//! positions) → [`coordination`] (select, highlight, drag, classify) →
//! [`animation`] (interpolate and sample). [`session`] wraps it all in the
//! interaction state machine spoken over the JSON protocol in
//! [`protocol`], and [`scenario`] replays scripted sessions headlessly.

pub mod animation;
pub mod color;
pub mod coordination;
pub mod geometry;
pub mod graph;
pub mod layout;
pub mod protocol;
pub mod scenario;
pub mod session;
