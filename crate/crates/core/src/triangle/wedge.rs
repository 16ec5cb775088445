use dashmap::DashMap;
use rustc_hash::FxBuildHasher;

use crate::graph::VertexId;

/// Wedge counters for one pair of high-degree vertices, over low-degree
/// centers. Between batches only `t[0]` is nonzero.
///
/// - `t[0]`: both edges old
/// - `t[1]`, `t[2]`: one / two freshly inserted edges
/// - `t[3]`, `t[4]`: one / two freshly deleted edges
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WedgeTuple {
    pub t: [i64; 5],
}

impl WedgeTuple {
    pub fn steady(count: i64) -> Self {
        Self {
            t: [count, 0, 0, 0, 0],
        }
    }

    pub fn is_zero(&self) -> bool {
        self.t == [0; 5]
    }

    /// Collapses the transient counters once marks are cleared: wedges with
    /// no deleted edge survive as old wedges. Wedges with a deleted edge were
    /// already taken out of `t[0]` while deletions were recorded.
    pub fn fold(&mut self) {
        *self = Self::steady(self.t[0] + self.t[1] + self.t[2]);
    }
}

pub type WedgeTable = DashMap<(VertexId, VertexId), WedgeTuple, FxBuildHasher>;

#[inline]
pub fn pair(a: VertexId, b: VertexId) -> (VertexId, VertexId) {
    if a < b {
        (a, b)
    } else {
        (b, a)
    }
}

pub fn new_table() -> WedgeTable {
    DashMap::with_hasher(FxBuildHasher)
}
