//! Batch-dynamic k-clique counting for k divisible by 3 through triangles of
//! the clique graph (vertices are ℓ-cliques, ℓ = k/3; edges are 2ℓ-cliques).
//!
//! Clique-graph vertices are split by degree. Triangles touching a low vertex
//! are kept as a running total and patched per batch by scanning from low
//! endpoints of changed edges. All-high triangles come from the trace of A³
//! over the high core. Every k-clique shows up as the same number of
//! clique-graph triangles, so the clique count is a fixed quotient.
//!
//! Triangle totals are kept in ordered units: six per triangle, matching the
//! trace of A³.

mod clique_graph;

use std::collections::BTreeSet;

use rayon::prelude::*;
use rustc_hash::{FxHashMap, FxHashSet};

use clique_graph::{bipartitions, cliques_through_edge, is_clique, tripartitions};
pub use clique_graph::{CliqueGraph, Tuple};

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::matmul::{cube_diagonal_sum, DenseMatrix};
use crate::static_algos::count_cliques;
use crate::stream::{Batch, EdgeUpdate};
use crate::{offset_count, DynamicCounter};

#[derive(Debug, Clone, Copy)]
pub struct MmConfig {
    /// Fixed degree threshold instead of the size-derived one.
    pub threshold_override: Option<f64>,
    /// Refuse graphs with more ℓ- or 2ℓ-cliques than this.
    pub clique_budget: usize,
    /// Matrix multiplication exponent used for the threshold.
    pub omega: f64,
}

impl Default for MmConfig {
    fn default() -> Self {
        Self {
            threshold_override: None,
            clique_budget: 1_000_000,
            omega: 7f64.log2(),
        }
    }
}

/// Exponent `t` such that the degree threshold is `M^(t·k/3)`.
pub fn threshold_exponent(k: usize, omega: f64) -> f64 {
    let k = k as f64;
    (3.0 - k + k * omega) / (k + k * omega)
}

/// Clique-graph triangles per k-clique, times six for ordered units.
pub fn triangles_per_clique(k: usize) -> u64 {
    let ell = k / 3;
    binomial(k, ell) * binomial(2 * ell, ell)
}

fn binomial(n: usize, r: usize) -> u64 {
    (0..r).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// Clique-graph changes caused by one batch, by tuple.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct GPrimeDelta {
    pub added_vertices: Vec<Tuple>,
    pub removed_vertices: Vec<Tuple>,
    pub inserted_edges: Vec<(Tuple, Tuple)>,
    pub deleted_edges: Vec<(Tuple, Tuple)>,
}

/// Per-batch totals of the low-triangle patching, in ordered units.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct PhaseTotals {
    pub deleted: u64,
    pub inserted: u64,
    /// Scanned (triangle, edge) pairs that carried a nonzero contribution.
    pub designated: usize,
    /// Vertices that changed class.
    pub moved: usize,
}

/// What a scan needs to know about the other side of the batch.
pub(crate) struct Phase<'a> {
    /// Base graph on the other side: after the batch when deleting, before it
    /// when inserting.
    other: &'a [Vec<VertexId>],
    scan_high: &'a FxHashSet<u32>,
    other_high: &'a FxHashSet<u32>,
    /// Vertices whose class flips into the scan side's high set (deleting)
    /// or out of it (inserting); their surviving edges count as changed.
    movers: &'a FxHashSet<u32>,
}

#[derive(Debug, Clone)]
pub struct MmStore {
    k: usize,
    config: MmConfig,
    lists: Vec<Vec<VertexId>>,
    m: usize,
    big_m: usize,
    threshold: f64,
    cg: CliqueGraph,
    low: FxHashSet<u32>,
    slot_of: FxHashMap<u32, usize>,
    owner: Vec<Option<u32>>,
    free: Vec<usize>,
    a: DenseMatrix,
    c_low: u64,
    c_high: u64,
    count: u64,
    last_applied: usize,
    last_phase: PhaseTotals,
    reinits: usize,
}

impl MmStore {
    pub fn new(graph: &Graph, k: usize) -> Result<Self> {
        Self::with_config(graph, k, MmConfig::default())
    }

    pub fn with_config(graph: &Graph, k: usize, config: MmConfig) -> Result<Self> {
        if k < 6 || !k.is_multiple_of(3) {
            return Err(Error::Parameter(format!(
                "clique size must be a multiple of 3 and at least 6, got {k}"
            )));
        }
        let adj = graph.adjacency();
        let lists = (0..adj.n())
            .map(|v| adj.neighbors(v as VertexId).to_vec())
            .collect();
        Self::build(lists, k, config)
    }

    fn build(lists: Vec<Vec<VertexId>>, k: usize, config: MmConfig) -> Result<Self> {
        let ell = k / 3;
        let m = lists.iter().map(Vec::len).sum::<usize>() / 2;
        let cg = CliqueGraph::from_lists(&lists, ell, config.clique_budget)?;
        let big_m = 2 * m + 1;
        let threshold = config.threshold_override.unwrap_or_else(|| {
            (big_m as f64).powf(threshold_exponent(k, config.omega) * ell as f64)
        });
        let highs: Vec<u32> = cg
            .live_ids()
            .filter(|&v| cg.degree(v) as f64 > threshold)
            .collect();
        let high_set: FxHashSet<u32> = highs.iter().copied().collect();
        let dim = highs.len().next_power_of_two();
        let mut store = Self {
            k,
            config,
            lists,
            m,
            big_m,
            threshold,
            low: cg.live_ids().filter(|v| !high_set.contains(v)).collect(),
            cg,
            slot_of: FxHashMap::default(),
            owner: vec![None; dim],
            free: (0..dim).rev().collect(),
            a: DenseMatrix::zeros(dim),
            c_low: 0,
            c_high: 0,
            count: 0,
            last_applied: 0,
            last_phase: PhaseTotals::default(),
            reinits: 0,
        };
        for &v in &highs {
            store.alloc_slot(v);
        }
        for &v in &highs {
            let s = store.slot_of[&v];
            for nb in store.cg.neighbors(v) {
                if let Some(&t) = store.slot_of.get(nb) {
                    store.a.set(s, t, 1);
                }
            }
        }
        store.c_low = store.low_triangle_total();
        store.finish()?;
        Ok(store)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    pub fn clique_graph(&self) -> &CliqueGraph {
        &self.cg
    }

    pub fn is_high(&self, id: u32) -> bool {
        self.slot_of.contains_key(&id)
    }

    pub fn high_count(&self) -> usize {
        self.slot_of.len()
    }

    /// Ordered-unit total of triangles with at least one low vertex.
    pub fn low_triangle_units(&self) -> u64 {
        self.c_low
    }

    /// Number of clique-graph triangles whose vertices are all high.
    pub fn high_degree_triangle_count(&self) -> u64 {
        self.c_high / 6
    }

    /// Ordered-unit total of all clique-graph triangles.
    pub fn triangle_units(&self) -> u64 {
        self.c_low + self.c_high
    }

    pub fn last_phase(&self) -> PhaseTotals {
        self.last_phase
    }

    pub fn reinits(&self) -> usize {
        self.reinits
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.lists
            .get(a as usize)
            .is_some_and(|l| l.binary_search(&b).is_ok())
    }

    pub fn graph(&self) -> Graph {
        let pairs = self
            .lists
            .iter()
            .enumerate()
            .flat_map(|(v, l)| l.iter().map(move |&u| (v as VertexId, u)));
        Graph::from_pairs(self.lists.len(), pairs)
    }

    /// Clique-graph changes the batch would cause, without applying it.
    pub fn derive_gprime_updates(&self, batch: &Batch) -> Result<GPrimeDelta> {
        batch.ensure_normalized()?;
        let ups = self.effective(batch);
        let mut after = self.lists.clone();
        grow(&mut after, &ups);
        apply_updates(&mut after, &ups);
        Ok(derive_delta(self.k / 3, &self.lists, &after, &ups))
    }

    fn effective(&self, batch: &Batch) -> Vec<EdgeUpdate> {
        batch
            .iter()
            .filter(|u| u.is_insert() != self.has_edge(u.u(), u.v()))
            .copied()
            .collect()
    }

    fn alloc_slot(&mut self, v: u32) -> usize {
        if self.free.is_empty() {
            let old = self.a.dim();
            let dim = (old * 2).max(1);
            self.a = self.a.resized(dim);
            self.owner.resize(dim, None);
            self.free.extend((old..dim).rev());
        }
        let s = self.free.pop().expect("free slot after growth");
        self.owner[s] = Some(v);
        self.slot_of.insert(v, s);
        s
    }

    fn free_slot(&mut self, v: u32) {
        if let Some(s) = self.slot_of.remove(&v) {
            self.a.clear_row_and_col(s);
            self.owner[s] = None;
            self.free.push(s);
        }
    }

    fn set_matrix_edge(&mut self, a: u32, b: u32, x: i64) {
        if let (Some(&s), Some(&t)) = (self.slot_of.get(&a), self.slot_of.get(&b)) {
            self.a.set(s, t, x);
            self.a.set(t, s, x);
        }
    }

    /// Six times the number of triangles with a low vertex, each found from
    /// its smallest low vertex.
    fn low_triangle_total(&self) -> u64 {
        let lows: Vec<u32> = self.low.iter().copied().collect();
        let found: u64 = lows
            .par_iter()
            .map(|&x| {
                let mut nbrs: Vec<u32> = self.cg.neighbors(x).iter().copied().collect();
                nbrs.sort_unstable();
                let mut c = 0;
                for (i, &y) in nbrs.iter().enumerate() {
                    if y < x && self.low.contains(&y) {
                        continue;
                    }
                    for &z in &nbrs[i + 1..] {
                        if z < x && self.low.contains(&z) {
                            continue;
                        }
                        if self.cg.has_edge(y, z) {
                            c += 1;
                        }
                    }
                }
                c
            })
            .sum();
        6 * found
    }

    fn finish(&mut self) -> Result<()> {
        let trace = cube_diagonal_sum(&self.a);
        if trace < 0 || trace % 6 != 0 {
            return Err(Error::Invariant(format!("trace of A^3 is {trace}")));
        }
        self.c_high = trace as u64;
        let total = self.c_low + self.c_high;
        let per = triangles_per_clique(self.k);
        if !total.is_multiple_of(per) {
            return Err(Error::Invariant(format!(
                "triangle total {total} is not a multiple of {per}"
            )));
        }
        self.count = total / per;
        Ok(())
    }

    fn reinit(&mut self) -> Result<()> {
        let lists = std::mem::take(&mut self.lists);
        let (applied, phase, reinits) = (self.last_applied, self.last_phase, self.reinits);
        *self = Self::build(lists, self.k, self.config)?;
        self.last_applied = applied;
        self.last_phase = phase;
        self.reinits = reinits + 1;
        Ok(())
    }

    fn apply(&mut self, batch: &Batch) -> Result<u64> {
        batch.ensure_normalized()?;
        let ups = self.effective(batch);
        self.last_applied = ups.len();
        self.last_phase = PhaseTotals::default();
        if ups.is_empty() {
            return Ok(self.count);
        }
        let before = self.lists.clone();
        grow(&mut self.lists, &ups);
        apply_updates(&mut self.lists, &ups);
        let m_before = self.m;
        self.m = self.lists.iter().map(Vec::len).sum::<usize>() / 2;
        let omega = self.config.omega;
        if ups.len() as f64 > (m_before as f64).powf(omega / (1.0 + omega)) {
            self.reinit()?;
            return Ok(self.count);
        }

        let delta = derive_delta(self.k / 3, &before, &self.lists, &ups);
        self.patch(&before, delta)?;

        if self.m * 4 < self.big_m || self.m > self.big_m {
            self.reinit()?;
        }
        Ok(self.count)
    }

    fn patch(&mut self, before: &[Vec<VertexId>], delta: GPrimeDelta) -> Result<()> {
        let lookup = |cg: &CliqueGraph, t: &Tuple| {
            cg.id_of(t)
                .ok_or_else(|| Error::Invariant(format!("no clique-graph vertex for {t:?}")))
        };
        let dead: Vec<u32> = delta
            .removed_vertices
            .iter()
            .map(|t| lookup(&self.cg, t))
            .collect::<Result<_>>()?;
        let born: Vec<u32> = delta
            .added_vertices
            .into_iter()
            .map(|t| self.cg.add_vertex(t))
            .collect();
        let id_pairs = |cg: &CliqueGraph, edges: &[(Tuple, Tuple)]| -> Result<Vec<(u32, u32)>> {
            edges
                .iter()
                .map(|(p, q)| {
                    let (a, b) = (lookup(cg, p)?, lookup(cg, q)?);
                    Ok((a.min(b), a.max(b)))
                })
                .collect()
        };
        let del_edges = id_pairs(&self.cg, &delta.deleted_edges)?;
        let ins_edges = id_pairs(&self.cg, &delta.inserted_edges)?;

        let mut degree_change: FxHashMap<u32, i64> = FxHashMap::default();
        for &(a, b) in &del_edges {
            *degree_change.entry(a).or_default() -= 1;
            *degree_change.entry(b).or_default() -= 1;
        }
        for &(a, b) in &ins_edges {
            *degree_change.entry(a).or_default() += 1;
            *degree_change.entry(b).or_default() += 1;
        }
        let final_degree =
            |v: u32| self.cg.degree(v) as i64 + degree_change.get(&v).copied().unwrap_or(0);
        let dead_set: FxHashSet<u32> = dead.iter().copied().collect();
        let born_set: FxHashSet<u32> = born.iter().copied().collect();
        let thr = self.threshold;

        let high0: FxHashSet<u32> = self.slot_of.keys().copied().collect();
        let mut high1 = FxHashSet::default();
        let mut demoted = FxHashSet::default();
        let mut promoted = FxHashSet::default();
        for &v in &high0 {
            if dead_set.contains(&v) {
                continue;
            }
            if (final_degree(v) as f64) < 0.5 * thr {
                demoted.insert(v);
            } else {
                high1.insert(v);
            }
        }
        for &v in degree_change.keys() {
            if high0.contains(&v) || dead_set.contains(&v) {
                continue;
            }
            if final_degree(v) as f64 > 1.5 * thr {
                if !born_set.contains(&v) {
                    promoted.insert(v);
                }
                high1.insert(v);
            }
        }

        let mut marked: FxHashSet<(u32, u32)> = del_edges.iter().copied().collect();
        for &v in &promoted {
            for &w in self.cg.neighbors(v) {
                marked.insert((v.min(w), v.max(w)));
            }
        }
        let (t_del, hits_del) = self.scan(
            &Phase {
                other: &self.lists,
                scan_high: &high0,
                other_high: &high1,
                movers: &promoted,
            },
            marked,
        );

        for &(a, b) in &del_edges {
            self.cg.remove_edge(a, b);
            self.set_matrix_edge(a, b, 0);
        }
        for &v in &dead {
            self.free_slot(v);
            self.low.remove(&v);
            self.cg.remove_vertex(v);
        }
        for &v in &born {
            if high1.contains(&v) {
                self.alloc_slot(v);
            } else {
                self.low.insert(v);
            }
        }
        for &(a, b) in &ins_edges {
            self.cg.add_edge(a, b);
            self.set_matrix_edge(a, b, 1);
        }
        let mut demoted_sorted: Vec<u32> = demoted.iter().copied().collect();
        demoted_sorted.sort_unstable();
        for &v in &demoted_sorted {
            self.free_slot(v);
            self.low.insert(v);
        }
        let mut promoted_sorted: Vec<u32> = promoted.iter().copied().collect();
        promoted_sorted.sort_unstable();
        for &v in &promoted_sorted {
            self.low.remove(&v);
            self.alloc_slot(v);
            let nbrs: Vec<u32> = self.cg.neighbors(v).iter().copied().collect();
            for w in nbrs {
                self.set_matrix_edge(v, w, 1);
            }
        }

        let mut marked: FxHashSet<(u32, u32)> = ins_edges.iter().copied().collect();
        for &v in &demoted {
            for &w in self.cg.neighbors(v) {
                marked.insert((v.min(w), v.max(w)));
            }
        }
        let (t_ins, hits_ins) = self.scan(
            &Phase {
                other: before,
                scan_high: &high1,
                other_high: &high0,
                movers: &demoted,
            },
            marked,
        );

        self.c_low = (self.c_low + t_ins).checked_sub(t_del).ok_or_else(|| {
            Error::Invariant(format!(
                "low triangle total {} cannot lose {t_del}",
                self.c_low + t_ins
            ))
        })?;
        self.last_phase = PhaseTotals {
            deleted: t_del,
            inserted: t_ins,
            designated: hits_del + hits_ins,
            moved: promoted.len() + demoted.len(),
        };
        self.finish()
    }

    /// Visits every triangle through a marked edge from the edge's smallest
    /// low endpoint and sums the designated contributions.
    fn scan(&self, phase: &Phase<'_>, marked: FxHashSet<(u32, u32)>) -> (u64, usize) {
        let mut edges: Vec<(u32, u32)> = marked.into_iter().collect();
        edges.sort_unstable();
        edges
            .par_iter()
            .map(|&(a, b)| {
                let from = [a, b].into_iter().find(|v| !phase.scan_high.contains(v));
                let Some(from) = from else {
                    return (0, 0);
                };
                let to = if from == a { b } else { a };
                let mut sum = 0;
                let mut hits = 0;
                for &c in self.cg.neighbors(from) {
                    if c == to || !self.cg.has_edge(c, to) {
                        continue;
                    }
                    let mut tri = [a, b, c];
                    tri.sort_unstable();
                    let got = self.count_updated_low_degree_triangles(phase, tri, (a, b));
                    if got > 0 {
                        sum += got;
                        hits += 1;
                    }
                }
                (sum, hits)
            })
            .reduce(|| (0, 0), |x, y| (x.0 + y.0, x.1 + y.1))
    }

    fn changed_edge(&self, phase: &Phase<'_>, a: u32, b: u32) -> bool {
        let (Some(p), Some(q)) = (self.cg.tuple(a), self.cg.tuple(b)) else {
            return true;
        };
        let mut union: Tuple = p.iter().chain(q).copied().collect();
        union.sort_unstable();
        !is_clique(phase.other, &union)
    }

    fn marked_edge(&self, phase: &Phase<'_>, a: u32, b: u32) -> bool {
        phase.movers.contains(&a) || phase.movers.contains(&b) || self.changed_edge(phase, a, b)
    }

    /// Contribution of one scanned (triangle, edge) pair. All triangles over
    /// the same k vertices are settled together, by whichever pair is the
    /// smallest that the scan reaches; every other pair returns 0.
    pub(crate) fn count_updated_low_degree_triangles(
        &self,
        phase: &Phase<'_>,
        tri: [u32; 3],
        edge: (u32, u32),
    ) -> u64 {
        let ell = self.k / 3;
        let mut union: Vec<VertexId> = Vec::with_capacity(self.k);
        for &v in &tri {
            match self.cg.tuple(v) {
                Some(t) => union.extend_from_slice(t),
                None => return 0,
            }
        }
        union.sort_unstable();
        let vertex_set_changed = !is_clique(phase.other, &union);
        let is_low = |v: &u32| !phase.scan_high.contains(v);
        let mut best: Option<([u32; 3], (u32, u32))> = None;
        let mut counted = 0u64;
        for parts in tripartitions(&union, ell) {
            let mut t = [0u32; 3];
            for (slot, p) in t.iter_mut().zip(&parts) {
                match self.cg.id_of(p) {
                    Some(id) => *slot = id,
                    None => return 0,
                }
            }
            t.sort_unstable();
            if !t.iter().any(is_low) {
                continue;
            }
            let low_other = !vertex_set_changed && t.iter().any(|v| !phase.other_high.contains(v));
            if !low_other {
                counted += 1;
            }
            let first = [(t[0], t[1]), (t[0], t[2]), (t[1], t[2])]
                .into_iter()
                .find(|&(x, y)| (is_low(&x) || is_low(&y)) && self.marked_edge(phase, x, y));
            if let Some(e) = first {
                if best.is_none_or(|b| (t, e) < b) {
                    best = Some((t, e));
                }
            }
        }
        if best == Some((tri, edge)) {
            6 * counted
        } else {
            0
        }
    }

    /// Rebuilds everything from the current graph and compares.
    pub fn check_consistency(&self) -> Result<()> {
        let fresh = CliqueGraph::from_lists(&self.lists, self.k / 3, usize::MAX)?;
        if fresh.canonical() != self.cg.canonical() {
            return Err(Error::Invariant(
                "clique graph differs from a rebuild".into(),
            ));
        }
        self.check_partition()?;
        for (&v, &s) in &self.slot_of {
            if self.owner[s] != Some(v) {
                return Err(Error::Invariant(format!("slot {s} not owned by {v}")));
            }
            for (&w, &t) in &self.slot_of {
                if self.a.get(s, t) != self.cg.has_edge(v, w) as i64 {
                    return Err(Error::Invariant(format!(
                        "matrix entry for {v},{w} is stale"
                    )));
                }
            }
        }
        for &s in &self.free {
            if self.a.row(s).iter().any(|&x| x != 0) {
                return Err(Error::Invariant(format!("free slot {s} has entries")));
            }
        }
        let thr = self.threshold;
        for v in self.cg.live_ids() {
            let d = self.cg.degree(v) as f64;
            if (self.is_high(v) && d < 0.5 * thr) || (!self.is_high(v) && d > 1.5 * thr) {
                return Err(Error::Invariant(format!(
                    "vertex {v} of degree {d} misclassified"
                )));
            }
        }
        if self.low_triangle_total() != self.c_low {
            return Err(Error::Invariant("low triangle total drifted".into()));
        }
        if cube_diagonal_sum(&self.a) as u64 != self.c_high {
            return Err(Error::Invariant("high triangle total is stale".into()));
        }
        let expected = count_cliques(&self.graph(), self.k);
        if expected != self.count {
            return Err(Error::Invariant(format!(
                "count {} but recount gives {expected}",
                self.count
            )));
        }
        Ok(())
    }

    /// Every clique-graph vertex is either low or owns a matrix slot.
    pub fn check_partition(&self) -> Result<()> {
        let live: BTreeSet<u32> = self.cg.live_ids().collect();
        for &v in &live {
            if self.low.contains(&v) == self.slot_of.contains_key(&v) {
                return Err(Error::Invariant(format!(
                    "vertex {v} is in both or neither side"
                )));
            }
        }
        if self.low.len() + self.slot_of.len() != live.len() {
            return Err(Error::Invariant("class tables hold dead vertices".into()));
        }
        Ok(())
    }
}

fn grow(lists: &mut Vec<Vec<VertexId>>, ups: &[EdgeUpdate]) {
    if let Some(max_v) = ups.iter().map(|u| u.v()).max() {
        if lists.len() <= max_v as usize {
            lists.resize(max_v as usize + 1, Vec::new());
        }
    }
}

fn apply_updates(lists: &mut [Vec<VertexId>], ups: &[EdgeUpdate]) {
    for up in ups {
        for (x, y) in [(up.u(), up.v()), (up.v(), up.u())] {
            let l = &mut lists[x as usize];
            match (l.binary_search(&y), up.is_insert()) {
                (Err(p), true) => l.insert(p, y),
                (Ok(p), false) => {
                    l.remove(p);
                }
                _ => {}
            }
        }
    }
}

/// New cliques are found in the graph after the batch through inserted
/// edges, destroyed ones in the graph before it through deleted edges.
fn derive_delta(
    ell: usize,
    before: &[Vec<VertexId>],
    after: &[Vec<VertexId>],
    ups: &[EdgeUpdate],
) -> GPrimeDelta {
    type Found = (bool, Vec<Tuple>, Vec<(Tuple, Tuple)>);
    let found: Vec<Found> = ups
        .par_iter()
        .map(|up| {
            let lists = if up.is_insert() { after } else { before };
            let small = cliques_through_edge(lists, up.u(), up.v(), ell);
            let edges = cliques_through_edge(lists, up.u(), up.v(), 2 * ell)
                .iter()
                .flat_map(|t| bipartitions(t, ell))
                .collect();
            (up.is_insert(), small, edges)
        })
        .collect();
    let mut added = BTreeSet::new();
    let mut removed = BTreeSet::new();
    let mut inserted = BTreeSet::new();
    let mut deleted = BTreeSet::new();
    for (ins, small, edges) in found {
        let (vs, es) = if ins {
            (&mut added, &mut inserted)
        } else {
            (&mut removed, &mut deleted)
        };
        vs.extend(small);
        es.extend(edges);
    }
    GPrimeDelta {
        added_vertices: added.into_iter().collect(),
        removed_vertices: removed.into_iter().collect(),
        inserted_edges: inserted.into_iter().collect(),
        deleted_edges: deleted.into_iter().collect(),
    }
}

impl DynamicCounter for MmStore {
    fn name(&self) -> &'static str {
        "kclique-mm"
    }

    fn apply_batch(&mut self, batch: &Batch) -> Result<u64> {
        self.apply(batch)
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
        self.count = offset_count(self.count, delta);
    }
}
