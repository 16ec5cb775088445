//! Batch-dynamic exact triangle counting.
//!
//! Vertices are split into low and high degree classes against `√M` where
//! `M` tracks twice the edge count. Each vertex keeps its neighbors in two
//! tables (high neighbors, low neighbors), so the four edge stores HH, HL,
//! LH and LL are the tables `high`/`low` of high and low vertices. A wedge
//! table holds, for every pair of high vertices, the number of low vertices
//! adjacent to both; triangles through a high-high update edge and a low
//! third vertex are read from it instead of scanning a high neighborhood.
//!
//! A batch marks its edges in place (inserted / deleted), patches the wedge
//! table for low-high updates, counts the triangles each update closes
//! according to how many marked edges they contain, then clears the marks
//! and reclassifies vertices whose degree left the hysteresis band.

mod wedge;

use rayon::prelude::*;
use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{EdgeKey, Graph, VertexId};
use crate::neighbors::{EdgeState, NeighborTable};
use crate::par::{for_each_indexed_mut, group_by_key};
use crate::static_algos::static_triangle_count;
use crate::stream::{Batch, EdgeUpdate};
use crate::DynamicCounter;

pub use wedge::WedgeTuple;
use wedge::{new_table, pair, WedgeTable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DegreeClass {
    Low,
    High,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TriangleConfig {
    /// Rebuild from scratch when a batch has at least as many effective
    /// updates as the graph has edges.
    pub rebuild_when_batch_exceeds_edges: bool,
}

impl Default for TriangleConfig {
    fn default() -> Self {
        Self {
            rebuild_when_batch_exceeds_edges: true,
        }
    }
}

/// Per-batch triangle tallies. Index `j` of `inserted` counts triangles with
/// `j + 1` inserted edges and none deleted, seen once per inserted edge;
/// `deleted` likewise. A triangle with `j + 1` marked edges is therefore
/// seen `j + 1` times.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct DeltaCounters {
    pub inserted: [u64; 3],
    pub deleted: [u64; 3],
}

impl DeltaCounters {
    fn add(mut self, other: Self) -> Self {
        for j in 0..3 {
            self.inserted[j] += other.inserted[j];
            self.deleted[j] += other.deleted[j];
        }
        self
    }

    /// Net change in the triangle count.
    pub fn net_change(&self) -> Result<i64> {
        for j in 1..3 {
            let d = j as u64 + 1;
            if !self.inserted[j].is_multiple_of(d) || !self.deleted[j].is_multiple_of(d) {
                return Err(Error::Invariant(format!(
                    "counters not divisible by {d}: {self:?}"
                )));
            }
        }
        let gained = self.inserted[0] + self.inserted[1] / 2 + self.inserted[2] / 3;
        let lost = self.deleted[0] + self.deleted[1] / 2 + self.deleted[2] / 3;
        Ok(gained as i64 - lost as i64)
    }
}

#[derive(Debug, Clone, Default)]
struct Slot {
    high: NeighborTable,
    low: NeighborTable,
}

impl Slot {
    fn degree(&self) -> usize {
        self.high.len() + self.low.len()
    }

    fn table(&self, class: DegreeClass) -> &NeighborTable {
        match class {
            DegreeClass::High => &self.high,
            DegreeClass::Low => &self.low,
        }
    }

    fn table_mut(&mut self, class: DegreeClass) -> &mut NeighborTable {
        match class {
            DegreeClass::High => &mut self.high,
            DegreeClass::Low => &mut self.low,
        }
    }

    fn all(&self) -> impl Iterator<Item = (VertexId, EdgeState)> + '_ {
        self.high.iter().chain(self.low.iter())
    }
}

// Threshold tests in exact integer arithmetic. With t1 = √M/2 and
// t2 = 3√M/2: initially high iff deg > 2·t1, promote iff deg > t2, demote
// iff deg < t1.
fn starts_high(deg: usize, big_m: usize) -> bool {
    (deg as u128).pow(2) > big_m as u128
}

fn above_upper(deg: usize, big_m: usize) -> bool {
    4 * (deg as u128).pow(2) > 9 * big_m as u128
}

fn below_lower(deg: usize, big_m: usize) -> bool {
    4 * (deg as u128).pow(2) < big_m as u128
}

#[derive(Debug, Clone, Copy)]
enum Mark {
    Insert,
    Delete,
}

/// Dynamic triangle counter; see the module docs.
#[derive(Debug, Clone)]
pub struct TriangleStore {
    config: TriangleConfig,
    slots: Vec<Slot>,
    class: Vec<DegreeClass>,
    wedges: WedgeTable,
    big_m: usize,
    m: usize,
    count: u64,
    last_applied: usize,
    last_counters: DeltaCounters,
    rebuilds: usize,
}

impl TriangleStore {
    pub fn new(graph: &Graph) -> Self {
        Self::with_config(graph, TriangleConfig::default())
    }

    pub fn with_config(graph: &Graph, config: TriangleConfig) -> Self {
        let n = graph.n();
        let m = graph.m();
        let big_m = 2 * m + 1;
        let adj = graph.adjacency();
        let class: Vec<DegreeClass> = (0..n)
            .into_par_iter()
            .map(|v| {
                if starts_high(adj.degree(v as VertexId), big_m) {
                    DegreeClass::High
                } else {
                    DegreeClass::Low
                }
            })
            .collect();
        let slots: Vec<Slot> = (0..n)
            .into_par_iter()
            .map(|v| {
                let (hi, lo): (Vec<VertexId>, Vec<VertexId>) = adj
                    .neighbors(v as VertexId)
                    .iter()
                    .partition(|&&u| class[u as usize] == DegreeClass::High);
                Slot {
                    high: NeighborTable::from_distinct(&hi, EdgeState::Old),
                    low: NeighborTable::from_distinct(&lo, EdgeState::Old),
                }
            })
            .collect();
        let wedges = build_wedges(&slots, &class);
        Self {
            config,
            slots,
            class,
            wedges,
            big_m,
            m,
            count: static_triangle_count(graph),
            last_applied: 0,
            last_counters: DeltaCounters::default(),
            rebuilds: 0,
        }
    }

    pub fn triangle_count(&self) -> u64 {
        self.count
    }

    pub fn threshold_base(&self) -> usize {
        self.big_m
    }

    pub fn n(&self) -> usize {
        self.slots.len()
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.slots.get(v as usize).map_or(0, Slot::degree)
    }

    pub fn class_of(&self, v: VertexId) -> DegreeClass {
        self.class
            .get(v as usize)
            .copied()
            .unwrap_or(DegreeClass::Low)
    }

    pub fn wedge(&self, a: VertexId, b: VertexId) -> Option<WedgeTuple> {
        self.wedges.get(&pair(a, b)).map(|w| *w)
    }

    pub fn wedge_entries(&self) -> usize {
        self.wedges.len()
    }

    pub fn last_counters(&self) -> DeltaCounters {
        self.last_counters
    }

    /// Full rebuilds performed so far (threshold drift or oversized batches).
    pub fn rebuilds(&self) -> usize {
        self.rebuilds
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.state(a, b).is_some()
    }

    pub fn graph(&self) -> Graph {
        let keys: Vec<EdgeKey> = self
            .slots
            .par_iter()
            .enumerate()
            .flat_map_iter(|(v, s)| {
                let v = v as VertexId;
                s.all()
                    .filter(move |&(u, _)| v < u)
                    .map(move |(u, _)| EdgeKey(v, u))
            })
            .collect();
        Graph::from_edge_keys(self.slots.len(), keys)
    }

    #[inline]
    fn state(&self, a: VertexId, b: VertexId) -> Option<EdgeState> {
        let slot = self.slots.get(a as usize)?;
        slot.table(self.class_of(b)).get(b)
    }

    fn ensure_vertex(&mut self, v: VertexId) {
        let need = v as usize + 1;
        if self.slots.len() < need {
            self.slots.resize_with(need, Slot::default);
            self.class.resize(need, DegreeClass::Low);
        }
    }

    fn rebuild(&mut self, graph: &Graph) {
        let keep = (self.last_applied, self.last_counters, self.rebuilds + 1);
        *self = Self::with_config(graph, self.config);
        (self.last_applied, self.last_counters, self.rebuilds) = keep;
    }

    /// Drops insertions of present edges and deletions of absent ones.
    fn effective(&self, batch: &Batch) -> Vec<EdgeUpdate> {
        batch
            .updates()
            .par_iter()
            .filter(|up| up.is_insert() != self.has_edge(up.u(), up.v()))
            .copied()
            .collect()
    }

    /// Writes marks (steps 2-3) or clears them (step 7).
    fn apply_marks(&mut self, ups: &[EdgeUpdate], clear: bool) {
        let ops: Vec<(usize, (VertexId, Mark))> = ups
            .iter()
            .flat_map(|up| {
                let mark = if up.is_insert() {
                    Mark::Insert
                } else {
                    Mark::Delete
                };
                [
                    (up.u() as usize, (up.v(), mark)),
                    (up.v() as usize, (up.u(), mark)),
                ]
            })
            .collect();
        let groups = group_by_key(ops);
        let class = &self.class;
        for_each_indexed_mut(
            &mut self.slots,
            &groups,
            &|slot: &mut Slot, list: &Vec<(VertexId, Mark)>| {
                for &(nb, mark) in list {
                    let table = slot.table_mut(class[nb as usize]);
                    match (mark, clear) {
                        (Mark::Insert, false) => {
                            table.insert(nb, EdgeState::Inserted);
                        }
                        (Mark::Delete, false) => {
                            table.set_state(nb, EdgeState::Deleted);
                        }
                        (Mark::Insert, true) => {
                            table.set_state(nb, EdgeState::Old);
                        }
                        (Mark::Delete, true) => {
                            table.remove(nb);
                        }
                    }
                }
            },
        );
    }

    /// Returns `(high, low)` for an update with exactly one high endpoint.
    fn high_low(&self, up: &EdgeUpdate) -> Option<(VertexId, VertexId)> {
        match (self.class_of(up.u()), self.class_of(up.v())) {
            (DegreeClass::High, DegreeClass::Low) => Some((up.u(), up.v())),
            (DegreeClass::Low, DegreeClass::High) => Some((up.v(), up.u())),
            _ => None,
        }
    }

    /// Records the wedges that marked low-high updates create or destroy.
    /// Returns every wedge-table key touched.
    fn update_wedge_tables(&self, ups: &[EdgeUpdate]) -> Vec<(VertexId, VertexId)> {
        let mut touched: Vec<(VertexId, VertexId)> = ups
            .par_iter()
            .filter_map(|up| self.high_low(up).map(|hl| (up.is_insert(), hl)))
            .flat_map_iter(|(insert, (u, w))| {
                let mut keys = Vec::new();
                for (v, wv) in self.slots[w as usize].high.iter() {
                    if v == u {
                        continue;
                    }
                    let key = pair(u, v);
                    // a wedge with two marked edges is seen from both of them;
                    // only the call from its smaller endpoint records it
                    let slot = match (insert, wv) {
                        (true, EdgeState::Old) => Some((1, 0)),
                        (true, EdgeState::Inserted) if u < v => Some((2, 0)),
                        (false, EdgeState::Old) => Some((3, 1)),
                        (false, EdgeState::Deleted) if u < v => Some((4, 1)),
                        _ => None,
                    };
                    if let Some((idx, drop_old)) = slot {
                        let mut e = self.wedges.entry(key).or_default();
                        e.t[idx] += 1;
                        e.t[0] -= drop_old;
                        keys.push(key);
                    }
                }
                keys
            })
            .collect();
        touched.par_sort_unstable();
        touched.dedup();
        touched
    }

    /// Triangles through `up` bucketed by marked-edge count: index `j` holds
    /// triangles with `j + 1` edges marked like `up` and none marked the
    /// other way. Requires the batch marks to be in place.
    fn profile(&self, up: &EdgeUpdate) -> [u64; 3] {
        let (a, b) = (up.u(), up.v());
        let same = if up.is_insert() {
            EdgeState::Inserted
        } else {
            EdgeState::Deleted
        };
        let other = if up.is_insert() {
            EdgeState::Deleted
        } else {
            EdgeState::Inserted
        };
        let mut out = [0u64; 3];
        let mut tally = |s1: EdgeState, s2: EdgeState| {
            if s1 != other && s2 != other {
                out[(s1 == same) as usize + (s2 == same) as usize] += 1;
            }
        };
        let (ca, cb) = (self.class_of(a), self.class_of(b));
        if ca == DegreeClass::Low || cb == DegreeClass::Low {
            let (w, o) = match (ca, cb) {
                (DegreeClass::Low, DegreeClass::Low) => {
                    if (self.degree(a), a) <= (self.degree(b), b) {
                        (a, b)
                    } else {
                        (b, a)
                    }
                }
                (DegreeClass::Low, _) => (a, b),
                _ => (b, a),
            };
            for (x, s_wx) in self.slots[w as usize].all() {
                if x == o {
                    continue;
                }
                if let Some(s_ox) = self.state(o, x) {
                    tally(s_wx, s_ox);
                }
            }
        } else {
            let (sa, sb) = (&self.slots[a as usize].high, &self.slots[b as usize].high);
            let (small, big, other_end) = if sa.len() <= sb.len() {
                (sa, sb, b)
            } else {
                (sb, sa, a)
            };
            for (x, s1) in small.iter() {
                if x == other_end {
                    continue;
                }
                if let Some(s2) = big.get(x) {
                    tally(s1, s2);
                }
            }
            if let Some(w) = self.wedges.get(&pair(a, b)) {
                let t = w.t;
                let picks = if up.is_insert() {
                    [t[0], t[1], t[2]]
                } else {
                    [t[0], t[3], t[4]]
                };
                for j in 0..3 {
                    out[j] += picks[j].max(0) as u64;
                }
            }
        }
        out
    }

    /// Number of triangles through `update` with exactly `inserted` inserted
    /// edges (or `deleted` deleted edges), counting the update itself.
    /// Exactly one of the two must be nonzero. Outside a batch every edge is
    /// old, so `(1, 0)` and `(0, 1)` count all triangles through the edge.
    pub fn count_triangles(
        &self,
        inserted: usize,
        deleted: usize,
        update: &EdgeUpdate,
    ) -> Result<u64> {
        let (want, is_insert) = match (inserted, deleted) {
            (i @ 1..=3, 0) => (i, true),
            (0, d @ 1..=3) => (d, false),
            _ => {
                return Err(Error::Contract(format!(
                "count_triangles needs exactly one of i, d in 1..=3, got ({inserted}, {deleted})"
            )))
            }
        };
        if update.is_insert() != is_insert {
            return Ok(0);
        }
        if !self.has_edge(update.u(), update.v()) {
            return Ok(0);
        }
        Ok(self.profile(update)[want - 1])
    }

    fn count_batch(&self, ups: &[EdgeUpdate]) -> DeltaCounters {
        ups.par_iter()
            .map(|up| {
                let p = self.profile(up);
                let mut d = DeltaCounters::default();
                if up.is_insert() {
                    d.inserted = p;
                } else {
                    d.deleted = p;
                }
                d
            })
            .reduce(DeltaCounters::default, DeltaCounters::add)
    }

    fn fold_wedges(&self, touched: &[(VertexId, VertexId)]) {
        touched.par_iter().for_each(|key| {
            if let Some(mut w) = self.wedges.get_mut(key) {
                w.fold();
            }
            self.wedges.remove_if(key, |_, w| w.is_zero());
        });
    }

    fn move_between_tables(&mut self, v: VertexId, from: DegreeClass, to: DegreeClass) {
        let mut nbrs: Vec<(usize, ())> = self.slots[v as usize]
            .all()
            .map(|(u, _)| (u as usize, ()))
            .collect();
        nbrs.sort_unstable_by_key(|p| p.0);
        for_each_indexed_mut(&mut self.slots, &nbrs, &|slot: &mut Slot, _: &()| {
            let st = slot.table_mut(from).remove(v).expect("symmetric stores");
            slot.table_mut(to).insert(v, st);
        });
    }

    fn high_pairs(&self, v: VertexId) -> Vec<(VertexId, VertexId)> {
        let highs: Vec<VertexId> = self.slots[v as usize].high.keys().collect();
        (0..highs.len())
            .into_par_iter()
            .flat_map_iter(|i| {
                let a = highs[i];
                highs[i + 1..].iter().map(move |&b| pair(a, b))
            })
            .collect()
    }

    /// Moves `v` across the degree classes and patches the wedge table.
    pub fn minor_rebalance(&mut self, v: VertexId) -> Result<()> {
        let deg = self.degree(v);
        match self.class_of(v) {
            DegreeClass::Low if above_upper(deg, self.big_m) => {
                self.promote(v);
                Ok(())
            }
            DegreeClass::High if below_lower(deg, self.big_m) => {
                self.demote(v);
                Ok(())
            }
            c => Err(Error::Contract(format!(
                "vertex {v} ({c:?}, degree {deg}) has not crossed a threshold"
            ))),
        }
    }

    fn promote(&mut self, v: VertexId) {
        // v stops being a low center for pairs of its high neighbors
        self.high_pairs(v).par_iter().for_each(|key| {
            if let Some(mut w) = self.wedges.get_mut(key) {
                w.t[0] -= 1;
            }
            self.wedges.remove_if(key, |_, w| w.is_zero());
        });
        // and becomes an endpoint of wedges through its low neighbors
        let counts = {
            let slots = &self.slots;
            slots[v as usize]
                .low
                .keys()
                .collect::<Vec<_>>()
                .par_iter()
                .fold(
                    FxHashMap::default,
                    |mut acc: FxHashMap<VertexId, i64>, &x| {
                        for u in slots[x as usize].high.keys() {
                            *acc.entry(u).or_default() += 1;
                        }
                        acc
                    },
                )
                .reduce(FxHashMap::default, |mut a, b| {
                    for (k, c) in b {
                        *a.entry(k).or_default() += c;
                    }
                    a
                })
        };
        for (u, c) in counts {
            self.wedges.entry(pair(v, u)).or_default().t[0] += c;
        }
        self.class[v as usize] = DegreeClass::High;
        self.move_between_tables(v, DegreeClass::Low, DegreeClass::High);
    }

    fn demote(&mut self, v: VertexId) {
        let lows: Vec<VertexId> = self.slots[v as usize].low.keys().collect();
        lows.par_iter().for_each(|&x| {
            for u in self.slots[x as usize].high.keys() {
                if u != v {
                    self.wedges.remove(&pair(v, u));
                }
            }
        });
        self.high_pairs(v).par_iter().for_each(|key| {
            self.wedges.entry(*key).or_default().t[0] += 1;
        });
        self.class[v as usize] = DegreeClass::Low;
        self.move_between_tables(v, DegreeClass::High, DegreeClass::Low);
    }

    /// Checks every structural invariant and the count against a static
    /// recount.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Invariant(msg));
        let mut degree_sum = 0;
        for (v, slot) in self.slots.iter().enumerate() {
            let v = v as VertexId;
            for (class, table) in [
                (DegreeClass::High, &slot.high),
                (DegreeClass::Low, &slot.low),
            ] {
                for (u, st) in table.iter() {
                    if st != EdgeState::Old {
                        return fail(format!("edge ({v}, {u}) still marked {st:?}"));
                    }
                    if self.class_of(u) != class {
                        return fail(format!("neighbor {u} of {v} in the wrong table"));
                    }
                    if self.state(u, v) != Some(EdgeState::Old) {
                        return fail(format!("edge ({v}, {u}) missing its mirror"));
                    }
                }
            }
            let deg = slot.degree();
            degree_sum += deg;
            match self.class_of(v) {
                DegreeClass::High if below_lower(deg, self.big_m) => {
                    return fail(format!("high vertex {v} has degree {deg} below the band"))
                }
                DegreeClass::Low if above_upper(deg, self.big_m) => {
                    return fail(format!("low vertex {v} has degree {deg} above the band"))
                }
                _ => {}
            }
        }
        if degree_sum != 2 * self.m {
            return fail(format!("degree sum {degree_sum} but m = {}", self.m));
        }
        if self.big_m != 2 * self.m + 1 && (4 * self.m < self.big_m || self.m > self.big_m) {
            return fail(format!(
                "m = {} outside [M/4, M] for M = {}",
                self.m, self.big_m
            ));
        }
        let fresh = build_wedges(&self.slots, &self.class);
        if fresh.len() != self.wedges.len() {
            return fail(format!(
                "wedge table has {} entries, recount gives {}",
                self.wedges.len(),
                fresh.len()
            ));
        }
        for e in fresh.iter() {
            match self.wedges.get(e.key()) {
                Some(w) if *w == *e.value() => {}
                other => {
                    return fail(format!(
                        "wedge {:?}: stored {:?}, recount {:?}",
                        e.key(),
                        other.map(|w| *w),
                        e.value()
                    ))
                }
            }
        }
        let want = static_triangle_count(&self.graph());
        if want != self.count {
            return fail(format!("count {} but static recount {want}", self.count));
        }
        Ok(())
    }

    fn apply(&mut self, batch: &Batch) -> Result<u64> {
        batch.ensure_normalized()?;
        if let Some(max_v) = batch.iter().map(|u| u.v()).max() {
            self.ensure_vertex(max_v);
        }
        let ups = self.effective(batch);
        self.last_applied = ups.len();
        self.last_counters = DeltaCounters::default();
        if ups.is_empty() {
            return Ok(self.count);
        }
        if self.config.rebuild_when_batch_exceeds_edges && ups.len() >= self.m {
            let next = self.graph().apply(&ups);
            self.rebuild(&next);
            return Ok(self.count);
        }

        self.apply_marks(&ups, false);
        let touched = self.update_wedge_tables(&ups);
        let counters = self.count_batch(&ups);
        let net = counters.net_change()?;
        let count = self.count as i64 + net;
        if count < 0 {
            return Err(Error::Invariant(format!("count would become {count}")));
        }
        self.count = count as u64;
        self.last_counters = counters;

        self.apply_marks(&ups, true);
        self.fold_wedges(&touched);
        let inserted = ups.iter().filter(|u| u.is_insert()).count();
        self.m = self.m + inserted - (ups.len() - inserted);

        let mut movers: Vec<VertexId> = ups.iter().flat_map(|u| [u.u(), u.v()]).collect();
        movers.sort_unstable();
        movers.dedup();
        for v in movers {
            let deg = self.degree(v);
            let crossed = match self.class_of(v) {
                DegreeClass::Low => above_upper(deg, self.big_m),
                DegreeClass::High => below_lower(deg, self.big_m),
            };
            if crossed {
                self.minor_rebalance(v)?;
            }
        }

        if self.big_m != 2 * self.m + 1 && (4 * self.m < self.big_m || self.m > self.big_m) {
            let g = self.graph();
            self.rebuild(&g);
        }
        Ok(self.count)
    }
}

/// Wedge table from scratch: for each high `u`, count low neighbors shared
/// with every high `v > u`.
fn build_wedges(slots: &[Slot], class: &[DegreeClass]) -> WedgeTable {
    let highs: Vec<VertexId> = (0..slots.len() as VertexId)
        .filter(|&v| class[v as usize] == DegreeClass::High)
        .collect();
    let mut index = vec![u32::MAX; slots.len()];
    for (i, &h) in highs.iter().enumerate() {
        index[h as usize] = i as u32;
    }
    let entries: Vec<((VertexId, VertexId), i64)> = highs
        .par_iter()
        .map_init(
            || (vec![0i64; highs.len()], Vec::new()),
            |(counts, seen), &u| {
                for w in slots[u as usize].low.keys() {
                    for v in slots[w as usize].high.keys() {
                        if v > u {
                            let i = index[v as usize] as usize;
                            if counts[i] == 0 {
                                seen.push(i);
                            }
                            counts[i] += 1;
                        }
                    }
                }
                let out: Vec<_> = seen
                    .drain(..)
                    .map(|i| {
                        let c = std::mem::take(&mut counts[i]);
                        ((u, highs[i]), c)
                    })
                    .collect();
                out
            },
        )
        .flatten()
        .collect();
    let table = new_table();
    for (k, c) in entries {
        table.insert(k, WedgeTuple::steady(c));
    }
    table
}

impl DynamicCounter for TriangleStore {
    fn name(&self) -> &'static str {
        "dyn-tri"
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
        self.count = crate::offset_count(self.count, delta);
    }
}
