//! Categorical community colors and the crossfade used during a drop.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Serialize, Serializer};

use crate::graph::{NodeId, ViewGraph};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Rgb(pub u8, pub u8, pub u8);

impl Rgb {
    pub const fn from_hex(v: u32) -> Self {
        Rgb((v >> 16) as u8, (v >> 8) as u8, v as u8)
    }

    /// Per-channel linear blend in sRGB space, rounded to the nearest
    /// level. Returns `end` exactly at `t = 1`.
    pub fn mix(self, end: Rgb, t: f64) -> Rgb {
        if t >= 1.0 {
            return end;
        }
        if t <= 0.0 {
            return self;
        }
        let ch = |a: u8, b: u8| {
            let (a, b) = (a as f64, b as f64);
            (a + (b - a) * t).round().clamp(0.0, 255.0) as u8
        };
        Rgb(ch(self.0, end.0), ch(self.1, end.1), ch(self.2, end.2))
    }
}

impl fmt::Display for Rgb {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{:02x}{:02x}{:02x}", self.0, self.1, self.2)
    }
}

impl Serialize for Rgb {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Twelve-class paired qualitative scheme.
pub const CATEGORICAL: [Rgb; 12] = [
    Rgb::from_hex(0xa6cee3),
    Rgb::from_hex(0x1f78b4),
    Rgb::from_hex(0xb2df8a),
    Rgb::from_hex(0x33a02c),
    Rgb::from_hex(0xfb9a99),
    Rgb::from_hex(0xe31a1c),
    Rgb::from_hex(0xfdbf6f),
    Rgb::from_hex(0xff7f00),
    Rgb::from_hex(0xcab2d6),
    Rgb::from_hex(0x6a3d9a),
    Rgb::from_hex(0xffff99),
    Rgb::from_hex(0xb15928),
];

/// Node colors of one view.
pub type Palette = BTreeMap<NodeId, Rgb>;

/// Colors each node by its community, ranking the view's labels
/// lexicographically and cycling through [`CATEGORICAL`].
pub fn community_palette(view: &ViewGraph) -> Palette {
    let labels: BTreeSet<&String> = view.community_of.values().collect();
    let rank: BTreeMap<&String, usize> = labels.into_iter().enumerate().map(|(i, l)| (l, i)).collect();
    view.community_of
        .iter()
        .map(|(id, label)| (id.clone(), CATEGORICAL[rank[label] % CATEGORICAL.len()]))
        .collect()
}
