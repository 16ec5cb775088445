//! Static counting: degeneracy orientation, triangle counting, k-clique
//! enumeration, and a brute-force oracle for small graphs.

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::graph::{Adjacency, EdgeKey, Graph, VertexId};
use crate::stream::Batch;
use crate::DynamicCounter;

/// Vertices in peeling order plus every edge directed from the earlier to
/// the later endpoint. Out-lists are sorted by vertex id.
#[derive(Debug, Clone)]
pub struct Orientation {
    pub order: Vec<VertexId>,
    pub rank: Vec<u32>,
    pub out: Vec<Vec<VertexId>>,
}

impl Orientation {
    pub fn max_out_degree(&self) -> usize {
        self.out.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub fn degeneracy_order(graph: &Graph) -> Orientation {
    orient(&graph.adjacency())
}

/// Repeatedly removes a minimum-degree vertex (bucket queue, O(n + m)).
pub fn orient(adj: &Adjacency) -> Orientation {
    let n = adj.n();
    let mut deg: Vec<usize> = (0..n).map(|v| adj.degree(v as VertexId)).collect();
    let max_deg = deg.iter().copied().max().unwrap_or(0);
    let mut buckets: Vec<Vec<VertexId>> = vec![Vec::new(); max_deg + 1];
    for (v, &d) in deg.iter().enumerate() {
        buckets[d].push(v as VertexId);
    }
    let mut removed = vec![false; n];
    let mut rank = vec![0u32; n];
    let mut order = Vec::with_capacity(n);
    let mut cur = 0usize;
    while order.len() < n {
        // a removal lowers neighbor degrees by one, so the minimum can only
        // drop by one per step
        cur = cur.saturating_sub(1);
        while buckets[cur].is_empty() {
            cur += 1;
        }
        let v = buckets[cur].pop().unwrap();
        if removed[v as usize] || deg[v as usize] != cur {
            continue; // stale entry
        }
        removed[v as usize] = true;
        rank[v as usize] = order.len() as u32;
        order.push(v);
        for &w in adj.neighbors(v) {
            let w = w as usize;
            if !removed[w] {
                deg[w] -= 1;
                buckets[deg[w]].push(w as VertexId);
            }
        }
    }
    let out = (0..n)
        .into_par_iter()
        .map(|v| {
            adj.neighbors(v as VertexId)
                .iter()
                .copied()
                .filter(|&w| rank[w as usize] > rank[v])
                .collect()
        })
        .collect();
    Orientation { order, rank, out }
}

/// Size of the intersection of two sorted slices.
#[inline]
pub fn intersect_count(a: &[VertexId], b: &[VertexId]) -> usize {
    let (mut i, mut j, mut c) = (0, 0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                c += 1;
                i += 1;
                j += 1;
            }
        }
    }
    c
}

#[inline]
pub fn intersect_into(a: &[VertexId], b: &[VertexId], out: &mut Vec<VertexId>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
}

pub fn static_triangle_count(graph: &Graph) -> u64 {
    triangle_count_adj(&graph.adjacency())
}

pub fn triangle_count_adj(adj: &Adjacency) -> u64 {
    let o = orient(adj);
    o.out
        .par_iter()
        .map(|nu| {
            nu.iter()
                .map(|&v| intersect_count(nu, &o.out[v as usize]) as u64)
                .sum::<u64>()
        })
        .sum()
}

/// Calls `visitor` once per k-clique with its vertices sorted ascending and
/// returns the number of cliques. The visitor may run on several threads.
pub fn enumerate_cliques<F>(graph: &Graph, k: usize, visitor: F) -> u64
where
    F: Fn(&[VertexId]) + Sync,
{
    enumerate_cliques_adj(&graph.adjacency(), k, visitor)
}

pub fn enumerate_cliques_adj<F>(adj: &Adjacency, k: usize, visitor: F) -> u64
where
    F: Fn(&[VertexId]) + Sync,
{
    if k == 0 {
        return 0;
    }
    let o = orient(adj);
    (0..adj.n())
        .into_par_iter()
        .map(|v| {
            let mut stack = vec![v as VertexId];
            let mut sorted = Vec::with_capacity(k);
            let mut scratch = vec![Vec::new(); k];
            extend(
                &o,
                &o.out[v],
                k - 1,
                &mut stack,
                &mut sorted,
                &mut scratch,
                &visitor,
            )
        })
        .sum()
}

fn extend<F>(
    o: &Orientation,
    cand: &[VertexId],
    remaining: usize,
    stack: &mut Vec<VertexId>,
    sorted: &mut Vec<VertexId>,
    scratch: &mut [Vec<VertexId>],
    visitor: &F,
) -> u64
where
    F: Fn(&[VertexId]) + Sync,
{
    if remaining == 0 {
        sorted.clear();
        sorted.extend_from_slice(stack);
        sorted.sort_unstable();
        visitor(sorted);
        return 1;
    }
    if remaining == 1 {
        for &w in cand {
            stack.push(w);
            sorted.clear();
            sorted.extend_from_slice(stack);
            sorted.sort_unstable();
            visitor(sorted);
            stack.pop();
        }
        return cand.len() as u64;
    }
    let (mine, deeper) = scratch.split_first_mut().unwrap();
    let mut total = 0;
    for &w in cand {
        intersect_into(cand, &o.out[w as usize], mine);
        if mine.len() + 1 < remaining {
            continue;
        }
        let next = std::mem::take(mine);
        stack.push(w);
        total += extend(o, &next, remaining - 1, stack, sorted, deeper, visitor);
        stack.pop();
        *mine = next;
    }
    total
}

/// k-clique count without a visitor.
pub fn count_cliques(graph: &Graph, k: usize) -> u64 {
    count_cliques_adj(&graph.adjacency(), k)
}

pub fn count_cliques_adj(adj: &Adjacency, k: usize) -> u64 {
    match k {
        0 => 0,
        1 => adj.n() as u64,
        2 => adj.edge_count() as u64,
        3 => triangle_count_adj(adj),
        _ => {
            let o = orient(adj);
            o.out
                .par_iter()
                .map(|nu| {
                    let mut scratch = vec![Vec::new(); k];
                    count_rec(&o, nu, k - 1, &mut scratch)
                })
                .sum()
        }
    }
}

fn count_rec(
    o: &Orientation,
    cand: &[VertexId],
    remaining: usize,
    scratch: &mut [Vec<VertexId>],
) -> u64 {
    if remaining == 1 {
        return cand.len() as u64;
    }
    if remaining == 2 {
        return cand
            .iter()
            .map(|&w| intersect_count(cand, &o.out[w as usize]) as u64)
            .sum();
    }
    let (mine, deeper) = scratch.split_first_mut().unwrap();
    let mut total = 0;
    for &w in cand {
        intersect_into(cand, &o.out[w as usize], mine);
        if mine.len() + 1 < remaining {
            continue;
        }
        let next = std::mem::take(mine);
        total += count_rec(o, &next, remaining - 1, deeper);
        *mine = next;
    }
    total
}

pub const BRUTE_FORCE_MAX_N: usize = 64;

/// Counts k-subsets that induce complete subgraphs by bitmask backtracking.
/// Independent of the orientation code so it can serve as an oracle.
pub fn brute_force_count(graph: &Graph, k: usize) -> Result<u64> {
    if graph.n() > BRUTE_FORCE_MAX_N {
        return Err(Error::Refused(format!(
            "brute force limited to {BRUTE_FORCE_MAX_N} vertices, graph has {}",
            graph.n()
        )));
    }
    if k == 0 {
        return Ok(0);
    }
    let mut masks = vec![0u64; graph.n()];
    for e in graph.edges() {
        masks[e.0 as usize] |= 1 << e.1;
        masks[e.1 as usize] |= 1 << e.0;
    }
    fn go(masks: &[u64], allowed: u64, need: usize) -> u64 {
        if need == 0 {
            return 1;
        }
        if (allowed.count_ones() as usize) < need {
            return 0;
        }
        let mut rest = allowed;
        let mut total = 0;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            // only later vertices, so each subset is built in increasing order
            total += go(masks, masks[v] & rest, need - 1);
        }
        total
    }
    let all = if graph.n() == 64 {
        u64::MAX
    } else {
        (1u64 << graph.n()) - 1
    };
    Ok(go(&masks, all, k))
}

/// Recounts from scratch after every batch.
#[derive(Debug, Clone)]
pub struct StaticRecount {
    k: usize,
    n: usize,
    edges: FxHashSet<EdgeKey>,
    count: u64,
    last_applied: usize,
}

impl StaticRecount {
    pub fn new(graph: &Graph, k: usize) -> Result<Self> {
        if k < 3 {
            return Err(Error::Parameter(format!(
                "clique size must be at least 3, got {k}"
            )));
        }
        Ok(Self {
            k,
            n: graph.n(),
            edges: graph.edges().iter().copied().collect(),
            count: count_cliques(graph, k),
            last_applied: 0,
        })
    }

    pub fn graph(&self) -> Graph {
        Graph::from_edge_keys(self.n, self.edges.iter().copied())
    }
}

impl DynamicCounter for StaticRecount {
    fn name(&self) -> &'static str {
        "static"
    }

    fn apply_batch(&mut self, batch: &Batch) -> Result<u64> {
        batch.ensure_normalized()?;
        let mut applied = 0;
        for up in batch {
            self.n = self.n.max(up.v() as usize + 1);
            let changed = if up.is_insert() {
                self.edges.insert(up.key())
            } else {
                self.edges.remove(&up.key())
            };
            applied += changed as usize;
        }
        self.last_applied = applied;
        self.count = count_cliques(&self.graph(), self.k);
        Ok(self.count)
    }

    fn count(&self) -> u64 {
        self.count
    }

    fn edge_count(&self) -> usize {
        self.edges.len()
    }

    fn last_applied(&self) -> usize {
        self.last_applied
    }

    fn perturb_count(&mut self, delta: i64) {
        self.count = crate::offset_count(self.count, delta);
    }
}
