//! Deterministic force-directed layout.
//!
//! Fruchterman-Reingold over the unit square with a fixed iteration count
//! and a linearly cooling displacement cap. Initial positions come from a
//! splitmix64 stream, and every loop visits nodes and edges in canonical id
//! order, so a given `(view, seed, iterations)` always produces the same
//! bits. Only `+ - * /` and `sqrt` are used, all of which IEEE 754 rounds
//! exactly.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::geometry::{bounding_box, Point};
use crate::graph::{NodeId, ViewGraph};

pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_ITERATIONS: u32 = 300;

/// Normalized layouts occupy `[MARGIN, 1 - MARGIN]` on each axis.
const MARGIN: f64 = 0.05;
/// Initial displacement cap, a tenth of the unit frame width.
const INITIAL_TEMPERATURE: f64 = 0.1;
/// Distances below this are treated as coincident.
const MIN_DISTANCE: f64 = 1e-9;

/// splitmix64 (Steele, Lea & Flood). State advances by the golden-ratio
/// increment `0x9E3779B97F4A7C15`; output mixing uses the multipliers
/// `0xBF58476D1CE4E5B9` and `0x94D049BB133111EB` with shifts 30, 27, 31.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }

    /// Uniform in `[0, 1)` from the top 53 bits.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LayoutMap {
    pub view_id: String,
    pub seed: u64,
    pub iterations: u32,
    positions: BTreeMap<NodeId, Point>,
}

impl LayoutMap {
    /// Wraps externally supplied positions. Coordinates are snapped to the
    /// shared grid (see [`crate::geometry::GRID_SCALE`]).
    pub fn from_positions(
        view_id: impl Into<String>,
        positions: impl IntoIterator<Item = (NodeId, Point)>,
    ) -> Self {
        Self {
            view_id: view_id.into(),
            seed: 0,
            iterations: 0,
            positions: positions.into_iter().map(|(id, p)| (id, p.snapped())).collect(),
        }
    }

    pub fn position(&self, id: &NodeId) -> Option<Point> {
        self.positions.get(id).copied()
    }

    pub fn positions(&self) -> &BTreeMap<NodeId, Point> {
        &self.positions
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LayoutError {
    #[error("iteration count must be positive")]
    ZeroIterations,
}

pub fn compute_layout(view: &ViewGraph, seed: u64, iterations: u32) -> Result<LayoutMap, LayoutError> {
    if iterations == 0 {
        return Err(LayoutError::ZeroIterations);
    }
    let ids: Vec<&NodeId> = view.node_ids.iter().collect();
    let n = ids.len();
    let index: BTreeMap<&NodeId, usize> = ids.iter().enumerate().map(|(i, id)| (*id, i)).collect();
    let edges: Vec<(usize, usize)> = view
        .edge_ids
        .iter()
        .map(|e| (index[e.lo()], index[e.hi()]))
        .collect();

    let mut rng = SplitMix64::new(seed);
    let mut pos: Vec<(f64, f64)> = (0..n)
        .map(|_| {
            let x = rng.next_f64();
            let y = rng.next_f64();
            (x, y)
        })
        .collect();

    if n > 0 {
        let k = (1.0 / n as f64).sqrt();
        let k2 = k * k;
        let mut disp = vec![(0.0f64, 0.0f64); n];
        for step in 0..iterations {
            let temperature = INITIAL_TEMPERATURE * (iterations - step) as f64 / iterations as f64;
            disp.iter_mut().for_each(|d| *d = (0.0, 0.0));

            for i in 0..n {
                for j in (i + 1)..n {
                    let (ux, uy, d) = direction(pos[i], pos[j]);
                    let f = k2 / d;
                    disp[i].0 += ux * f;
                    disp[i].1 += uy * f;
                    disp[j].0 -= ux * f;
                    disp[j].1 -= uy * f;
                }
            }

            for &(a, b) in &edges {
                let (ux, uy, d) = direction(pos[a], pos[b]);
                let f = d * d / k;
                disp[a].0 -= ux * f;
                disp[a].1 -= uy * f;
                disp[b].0 += ux * f;
                disp[b].1 += uy * f;
            }

            for (p, d) in pos.iter_mut().zip(&disp) {
                let len = (d.0 * d.0 + d.1 * d.1).sqrt();
                if len > 0.0 {
                    let scale = len.min(temperature) / len;
                    p.0 += d.0 * scale;
                    p.1 += d.1 * scale;
                }
            }
        }
    }

    let points: Vec<Point> = pos.iter().map(|&(x, y)| Point::new(x, y)).collect();
    let positions = match bounding_box(points.iter().copied()) {
        Ok(bb) => ids
            .iter()
            .zip(&points)
            .map(|(id, p)| {
                let q = Point::new(normalize(p.x, bb.min_x, bb.max_x), normalize(p.y, bb.min_y, bb.max_y));
                ((*id).clone(), q.snapped())
            })
            .collect(),
        Err(_) => BTreeMap::new(),
    };

    Ok(LayoutMap {
        view_id: view.view_id.clone(),
        seed,
        iterations,
        positions,
    })
}

/// Unit vector from `b` to `a` and their distance, with coincident points
/// separated along +x.
fn direction(a: (f64, f64), b: (f64, f64)) -> (f64, f64, f64) {
    let dx = a.0 - b.0;
    let dy = a.1 - b.1;
    let d = (dx * dx + dy * dy).sqrt();
    if d < MIN_DISTANCE {
        (1.0, 0.0, MIN_DISTANCE)
    } else {
        (dx / d, dy / d, d)
    }
}

fn normalize(v: f64, min: f64, max: f64) -> f64 {
    let range = max - min;
    if range > 0.0 {
        MARGIN + (1.0 - 2.0 * MARGIN) * ((v - min) / range)
    } else {
        0.5
    }
}
