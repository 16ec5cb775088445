//! Batch-dynamic k-clique counting by joining (k-2)-cliques with batch edges.
//!
//! Insertions are added first, so every clique that exists before or after
//! the batch is present while enumerating. A k-clique touched by the batch
//! is new if its batch edges are all insertions, gone if they are all
//! deletions, and unchanged otherwise (it never existed on either side).
//! Each such clique is found once per batch edge it contains; only the
//! visit through its smallest batch edge counts.

use std::sync::atomic::{AtomicU64, Ordering};

use rustc_hash::FxHashMap;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, EdgeKey, Graph, VertexId};
use crate::static_algos::{count_cliques_adj, enumerate_cliques_adj, intersect_into};
use crate::stream::{Batch, EdgeUpdate, UpdateKind};
use crate::DynamicCounter;

pub const DEFAULT_MAX_K: usize = 8;

/// Batch edges keyed by canonical edge.
pub type BatchTable = FxHashMap<EdgeKey, UpdateKind>;

/// True iff no batch edge inside `clique` sorts before `e`.
pub fn is_lex_first_batch_edge(e: EdgeKey, clique: &[VertexId], table: &BatchTable) -> bool {
    for (i, &a) in clique.iter().enumerate() {
        for &b in &clique[i + 1..] {
            let k = EdgeKey::new(a, b);
            if k < e && table.contains_key(&k) {
                return false;
            }
        }
    }
    true
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct BatchCliqueStats {
    pub created: u64,
    pub destroyed: u64,
    /// Cliques whose batch edges mix insertions and deletions.
    pub mixed: u64,
}

#[derive(Debug, Clone)]
pub struct KCliqueCounter {
    k: usize,
    lists: Vec<Vec<VertexId>>,
    m: usize,
    count: u64,
    last_applied: usize,
    last_stats: BatchCliqueStats,
}

impl KCliqueCounter {
    pub fn new(graph: &Graph, k: usize) -> Result<Self> {
        Self::with_max_k(graph, k, DEFAULT_MAX_K)
    }

    pub fn with_max_k(graph: &Graph, k: usize, max_k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::Parameter(format!(
                "clique size must be at least 3, got {k}"
            )));
        }
        if k > max_k {
            return Err(Error::Parameter(format!(
                "clique size {k} above the limit {max_k}"
            )));
        }
        let adj = graph.adjacency();
        let count = count_cliques_adj(&adj, k);
        let lists = (0..adj.n())
            .map(|v| adj.neighbors(v as VertexId).to_vec())
            .collect();
        Ok(Self {
            k,
            lists,
            m: graph.m(),
            count,
            last_applied: 0,
            last_stats: BatchCliqueStats::default(),
        })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn last_stats(&self) -> BatchCliqueStats {
        self.last_stats
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

    fn set_edge(&mut self, a: VertexId, b: VertexId, present: bool) {
        for (x, y) in [(a, b), (b, a)] {
            let l = &mut self.lists[x as usize];
            match (l.binary_search(&y), present) {
                (Err(p), true) => l.insert(p, y),
                (Ok(p), false) => {
                    l.remove(p);
                }
                _ => {}
            }
        }
    }

    fn recount(&mut self) {
        let adj = Adjacency::from_sorted_lists(self.lists.clone());
        self.count = count_cliques_adj(&adj, self.k);
    }

    fn apply(&mut self, batch: &Batch) -> Result<u64> {
        batch.ensure_normalized()?;
        if let Some(max_v) = batch.iter().map(|u| u.v()).max() {
            if self.lists.len() <= max_v as usize {
                self.lists.resize(max_v as usize + 1, Vec::new());
            }
        }
        let ups: Vec<EdgeUpdate> = batch
            .iter()
            .filter(|u| u.is_insert() != self.has_edge(u.u(), u.v()))
            .copied()
            .collect();
        self.last_applied = ups.len();
        self.last_stats = BatchCliqueStats::default();
        if ups.is_empty() {
            return Ok(self.count);
        }
        let inserted = ups.iter().filter(|u| u.is_insert()).count();
        if ups.len() >= self.m {
            for up in &ups {
                self.set_edge(up.u(), up.v(), up.is_insert());
            }
            self.m = self.m + inserted - (ups.len() - inserted);
            self.recount();
            return Ok(self.count);
        }

        for up in ups.iter().filter(|u| u.is_insert()) {
            self.set_edge(up.u(), up.v(), true);
        }
        let table: BatchTable = ups.iter().map(|u| (u.key(), u.kind)).collect();
        let stats = self.join_batch(&table);
        for up in ups.iter().filter(|u| !u.is_insert()) {
            self.set_edge(up.u(), up.v(), false);
        }
        self.m = self.m + inserted - (ups.len() - inserted);
        let count = self.count as i64 + stats.created as i64 - stats.destroyed as i64;
        if count < 0 {
            return Err(Error::Invariant(format!(
                "clique count would become {count}"
            )));
        }
        self.count = count as u64;
        self.last_stats = stats;
        Ok(self.count)
    }

    /// Enumerates (k-2)-cliques of the union graph once; for each, every
    /// batch edge between two common neighbors closes a candidate k-clique.
    fn join_batch(&self, table: &BatchTable) -> BatchCliqueStats {
        let k = self.k;
        let mut incident: FxHashMap<VertexId, Vec<VertexId>> = FxHashMap::default();
        for e in table.keys() {
            incident.entry(e.0).or_default().push(e.1);
        }
        let adj = Adjacency::from_sorted_lists(self.lists.clone());
        let created = AtomicU64::new(0);
        let destroyed = AtomicU64::new(0);
        let mixed = AtomicU64::new(0);
        let classify = |clique: &[VertexId], e: EdgeKey| {
            let (mut ins, mut del) = (false, false);
            for (i, &a) in clique.iter().enumerate() {
                for &b in &clique[i + 1..] {
                    match table.get(&EdgeKey::new(a, b)) {
                        Some(UpdateKind::Insert) => ins = true,
                        Some(UpdateKind::Delete) => del = true,
                        None => {}
                    }
                }
            }
            if !is_lex_first_batch_edge(e, clique, table) {
                return;
            }
            let target = match (ins, del) {
                (true, false) => &created,
                (false, true) => &destroyed,
                _ => &mixed,
            };
            target.fetch_add(1, Ordering::Relaxed);
        };
        enumerate_cliques_adj(&adj, k - 2, |base| {
            let mut common = adj.neighbors(base[0]).to_vec();
            let mut tmp = Vec::new();
            for &x in &base[1..] {
                intersect_into(&common, adj.neighbors(x), &mut tmp);
                std::mem::swap(&mut common, &mut tmp);
            }
            let mut clique = Vec::with_capacity(k);
            for &x in &common {
                let Some(partners) = incident.get(&x) else {
                    continue;
                };
                for &y in partners {
                    if common.binary_search(&y).is_err() {
                        continue;
                    }
                    clique.clear();
                    clique.extend_from_slice(base);
                    clique.push(x);
                    clique.push(y);
                    clique.sort_unstable();
                    classify(&clique, EdgeKey(x, y));
                }
            }
        });
        BatchCliqueStats {
            created: created.into_inner(),
            destroyed: destroyed.into_inner(),
            mixed: mixed.into_inner(),
        }
    }
}

impl DynamicCounter for KCliqueCounter {
    fn name(&self) -> &'static str {
        "kclique-enum"
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

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate::{random_graph, random_update_batches};
    use crate::static_algos::brute_force_count;
    use crate::stream::normalize_batch;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn k_must_be_at_least_three() {
        assert!(KCliqueCounter::new(&Graph::complete(4), 2).is_err());
        assert!(KCliqueCounter::new(&Graph::complete(4), 9).is_err());
        assert!(KCliqueCounter::with_max_k(&Graph::complete(4), 9, 9).is_ok());
    }

    #[test]
    fn completing_k4() {
        let g = Graph::complete(4).apply(&[EdgeUpdate::delete(0, 1, 0)]);
        let mut c = KCliqueCounter::new(&g, 4).unwrap();
        assert_eq!(c.count(), 0);
        assert_eq!(
            c.apply_batch(&Batch::new(vec![EdgeUpdate::insert(0, 1, 1)]))
                .unwrap(),
            1
        );
        assert_eq!(c.last_stats().created, 1);
    }

    #[test]
    fn later_delete_wins() {
        let mut c = KCliqueCounter::new(&Graph::complete(4), 4).unwrap();
        let raw = Batch::new(vec![
            EdgeUpdate::delete(0, 1, 2),
            EdgeUpdate::insert(0, 1, 1),
        ]);
        assert_eq!(c.apply_batch(&normalize_batch(&raw)).unwrap(), 0);
        assert_eq!(c.last_stats().destroyed, 1);
    }

    #[test]
    fn lex_first_examples() {
        let mut t = BatchTable::default();
        t.insert(EdgeKey(0, 1), UpdateKind::Insert);
        assert!(is_lex_first_batch_edge(EdgeKey(0, 1), &[0, 1, 2], &t));
        t.insert(EdgeKey(0, 2), UpdateKind::Insert);
        assert!(!is_lex_first_batch_edge(EdgeKey(0, 2), &[0, 1, 2], &t));
    }

    #[test]
    fn exactly_one_lex_first_edge_per_clique() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..200 {
            let clique: Vec<VertexId> = {
                let mut c: Vec<VertexId> = (0..12).filter(|_| rng.gen_bool(0.5)).collect();
                if c.len() < 3 {
                    c = vec![0, 1, 2];
                }
                c
            };
            let mut table = BatchTable::default();
            let mut inside = Vec::new();
            for (i, &a) in clique.iter().enumerate() {
                for &b in &clique[i + 1..] {
                    if rng.gen_bool(0.3) {
                        table.insert(EdgeKey(a, b), UpdateKind::Insert);
                        inside.push(EdgeKey(a, b));
                    }
                }
            }
            let firsts = inside
                .iter()
                .filter(|&&e| is_lex_first_batch_edge(e, &clique, &table))
                .count();
            assert_eq!(firsts, usize::from(!inside.is_empty()));
        }
    }

    #[test]
    fn random_batches_match_brute_force() {
        for (k, seed) in [(3, 1), (4, 2), (5, 3), (6, 4)] {
            let g = random_graph(24, 0.4, seed);
            let mut c = KCliqueCounter::new(&g, k).unwrap();
            let mut cur = g;
            for b in random_update_batches(24, 10, 16, 0.5, seed) {
                let b = normalize_batch(&b);
                cur = cur.apply(b.updates());
                assert_eq!(
                    c.apply_batch(&b).unwrap(),
                    brute_force_count(&cur, k).unwrap(),
                    "k={k}"
                );
                assert_eq!(c.graph(), cur);
            }
        }
    }

    #[test]
    fn mixed_cliques_leave_count_unchanged() {
        // K4 on 0..4 minus (0,1); insert (0,1) and delete (2,3) together
        let g = Graph::complete(6).apply(&[EdgeUpdate::delete(0, 1, 0)]);
        let mut c = KCliqueCounter::new(&g, 4).unwrap();
        let before = c.count();
        let b = Batch::new(vec![
            EdgeUpdate::insert(0, 1, 1),
            EdgeUpdate::delete(2, 3, 2),
        ]);
        let after = c.apply_batch(&b).unwrap();
        assert!(c.last_stats().mixed > 0);
        assert_eq!(after, brute_force_count(&c.graph(), 4).unwrap());
        assert_eq!(
            after as i64 - before as i64,
            c.last_stats().created as i64 - c.last_stats().destroyed as i64
        );
    }
}
