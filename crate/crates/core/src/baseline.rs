//! Merge-based batch-dynamic triangle counter used as a comparison baseline.
//!
//! Each sub-batch (deletions first, then insertions) is sorted per vertex and
//! merged linearly into sorted adjacency rows. Triangle deltas come from
//! three intersections per update edge, combined by inclusion-exclusion:
//!
//! - `s1 = Σ |G(u) ∩ G(v)|` sees a triangle once per update edge it holds,
//! - `s2 = Σ |G(u) ∩ U(v)| + |U(u) ∩ G(v)|` sees it 0, 2 or 6 times for 1, 2
//!   or 3 update edges,
//! - `s3 = Σ |U(u) ∩ U(v)|` over truncated lists (`w > v` for `u < v`) sees
//!   each all-update triangle once,
//!
//! where `G` is the graph holding the updates and `U` is the update graph.
//! Every affected triangle is then counted once by `s1 - s2/2 + s3`.

use rayon::prelude::*;
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::par::group_by_key;
use crate::static_algos::{intersect_count, static_triangle_count};
use crate::stream::{Batch, EdgeUpdate, UpdateKind};
use crate::DynamicCounter;

/// Rows up to this length stay inline.
pub const INLINE_DEGREE: usize = 16;

pub type Row = SmallVec<[VertexId; INLINE_DEGREE]>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MergeOutcome {
    pub row: Row,
    /// Inserted neighbors already present, or deleted neighbors not present.
    pub redundant: Vec<VertexId>,
}

/// Linear merge of a sorted row with sorted, distinct updates of one kind.
pub fn sorted_merge(
    row: &[VertexId],
    updates: &[VertexId],
    kind: UpdateKind,
) -> Result<MergeOutcome> {
    let strictly_sorted = |xs: &[VertexId]| xs.windows(2).all(|w| w[0] < w[1]);
    if !strictly_sorted(row) || !strictly_sorted(updates) {
        return Err(Error::Contract(
            "sorted_merge needs strictly sorted inputs".into(),
        ));
    }
    let mut out = Row::with_capacity(row.len() + updates.len());
    let mut redundant = Vec::new();
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < updates.len() {
        let (r, u) = (row.get(i).copied(), updates.get(j).copied());
        match (r, u) {
            (Some(r), Some(u)) if r == u => {
                if kind == UpdateKind::Insert {
                    out.push(r);
                    redundant.push(u);
                }
                i += 1;
                j += 1;
            }
            (Some(r), Some(u)) if r < u => {
                out.push(r);
                i += 1;
            }
            (Some(r), None) => {
                out.push(r);
                i += 1;
            }
            (_, Some(u)) => {
                match kind {
                    UpdateKind::Insert => out.push(u),
                    UpdateKind::Delete => redundant.push(u),
                }
                j += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    Ok(MergeOutcome {
        row: out,
        redundant,
    })
}

#[derive(Debug, Clone, Default)]
pub struct MergeStore {
    adj: Vec<Row>,
    m: usize,
    count: u64,
    last_applied: usize,
}

impl MergeStore {
    pub fn new(graph: &Graph) -> Self {
        let adj = graph.adjacency();
        let rows = (0..graph.n())
            .into_par_iter()
            .map(|v| Row::from_slice(adj.neighbors(v as VertexId)))
            .collect();
        Self {
            adj: rows,
            m: graph.m(),
            count: static_triangle_count(graph),
            last_applied: 0,
        }
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.adj.get(v as usize).map_or(&[], |r| r.as_slice())
    }

    pub fn graph(&self) -> Graph {
        let pairs = self
            .adj
            .iter()
            .enumerate()
            .flat_map(|(v, r)| r.iter().map(move |&u| (v as VertexId, u)));
        Graph::from_pairs(self.adj.len(), pairs)
    }

    /// Merges one sub-batch into the rows and returns the updates that
    /// changed the graph, as (u, v) with u < v.
    fn merge(&mut self, ups: &[EdgeUpdate], kind: UpdateKind) -> Result<Vec<(VertexId, VertexId)>> {
        let pairs: Vec<(usize, VertexId)> = ups
            .iter()
            .flat_map(|u| [(u.u() as usize, u.v()), (u.v() as usize, u.u())])
            .collect();
        let mut work: Vec<(usize, Row, Vec<VertexId>)> = group_by_key(pairs)
            .into_iter()
            .map(|(v, l)| (v, std::mem::take(&mut self.adj[v]), l))
            .collect();
        let merged: Vec<Result<Vec<VertexId>>> = work
            .par_iter_mut()
            .map(|(_, row, l)| {
                l.sort_unstable();
                let o = sorted_merge(row, l, kind)?;
                *row = o.row;
                Ok(o.redundant)
            })
            .collect();
        let mut redundant = Vec::new();
        for ((v, row, _), res) in work.into_iter().zip(merged) {
            self.adj[v] = row;
            let v = v as VertexId;
            redundant.extend(res?.into_iter().map(|x| (v.min(x), v.max(x))));
        }
        redundant.sort_unstable();
        Ok(ups
            .iter()
            .map(|u| (u.u(), u.v()))
            .filter(|p| redundant.binary_search(p).is_err())
            .collect())
    }

    /// Triangles in the current rows that contain at least one of `edges`,
    /// each counted once.
    fn triangles_touching(&self, edges: &[(VertexId, VertexId)]) -> u64 {
        let mut pairs: Vec<(usize, VertexId)> = edges
            .iter()
            .flat_map(|&(a, b)| [(a as usize, b), (b as usize, a)])
            .collect();
        pairs.par_sort_unstable();
        let mut update: Vec<Vec<VertexId>> = Vec::new();
        let mut index = rustc_hash::FxHashMap::default();
        for (v, x) in pairs {
            let slot = *index.entry(v).or_insert_with(|| {
                update.push(Vec::new());
                update.len() - 1
            });
            update[slot].push(x);
        }
        let u_row = |v: VertexId| -> &[VertexId] {
            index
                .get(&(v as usize))
                .map_or(&[], |&i| update[i].as_slice())
        };
        let (s1, s2, s3) = edges
            .par_iter()
            .map(|&(a, b)| {
                let (ga, gb) = (self.neighbors(a), self.neighbors(b));
                let (ua, ub) = (u_row(a), u_row(b));
                let s1 = intersect_count(ga, gb) as u64;
                let s2 = (intersect_count(ga, ub) + intersect_count(ua, gb)) as u64;
                let cut = |r: &[VertexId]| -> usize { r.partition_point(|&w| w <= b) };
                let s3 = intersect_count(&ua[cut(ua)..], &ub[cut(ub)..]) as u64;
                (s1, s2, s3)
            })
            .reduce(|| (0, 0, 0), |x, y| (x.0 + y.0, x.1 + y.1, x.2 + y.2));
        debug_assert_eq!(s2 % 2, 0);
        s1 - s2 / 2 + s3
    }
}

impl DynamicCounter for MergeStore {
    fn name(&self) -> &'static str {
        "merge-baseline"
    }

    fn apply_batch(&mut self, batch: &Batch) -> Result<u64> {
        batch.ensure_normalized()?;
        if let Some(max_v) = batch.iter().map(|u| u.v()).max() {
            if self.adj.len() <= max_v as usize {
                self.adj.resize_with(max_v as usize + 1, Row::new);
            }
        }
        let (ins, dels) = batch.split();

        // deletions: find which ones hit existing edges, count on the old rows
        let present: Vec<(VertexId, VertexId)> = dels
            .iter()
            .filter(|u| self.neighbors(u.u()).binary_search(&u.v()).is_ok())
            .map(|u| (u.u(), u.v()))
            .collect();
        let lost = self.triangles_touching(&present);
        let applied_dels = self.merge(&dels, UpdateKind::Delete)?;
        debug_assert_eq!(applied_dels, present);

        let applied_ins = self.merge(&ins, UpdateKind::Insert)?;
        let gained = self.triangles_touching(&applied_ins);

        self.count = self.count + gained - lost;
        self.m = self.m + applied_ins.len() - applied_dels.len();
        self.last_applied = applied_ins.len() + applied_dels.len();
        Ok(self.count)
    }

    fn count(&self) -> u64 {
        self.count
    }

    fn edge_count(&self) -> usize {
        self.m
    }

    fn last_applied(&self) -> usize {
        self.last_applied
    }

    fn perturb_count(&mut self, delta: i64) {
        self.count = crate::offset_count(self.count, delta);
    }
}
