//! Static undirected graphs and the edge-list text format.

use std::fmt;
use std::io::{self, Write};

use rayon::prelude::*;
use rustc_hash::FxHashSet;

use crate::error::{Error, Result};
use crate::stream::{to_vertex, EdgeUpdate, UpdateKind};

pub type VertexId = u32;

/// Canonical undirected edge `(min, max)`. The derived ordering is the
/// numeric lexicographic order used for every tie-break in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeKey(pub VertexId, pub VertexId);

impl EdgeKey {
    #[inline]
    pub fn new(a: VertexId, b: VertexId) -> Self {
        if a < b {
            EdgeKey(a, b)
        } else {
            EdgeKey(b, a)
        }
    }

    #[inline]
    pub fn lo(self) -> VertexId {
        self.0
    }

    #[inline]
    pub fn hi(self) -> VertexId {
        self.1
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.0, self.1)
    }
}

/// Undirected simple graph: `n` vertices `0..n` and a sorted, duplicate-free
/// list of canonical edges.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<EdgeKey>,
}

impl Graph {
    /// Builds a graph from arbitrary pairs; self-loops are dropped and
    /// duplicates collapse. `n` grows to cover every endpoint.
    pub fn from_pairs<I>(n: usize, pairs: I) -> Self
    where
        I: IntoIterator<Item = (VertexId, VertexId)>,
    {
        let mut n = n;
        let mut edges: Vec<EdgeKey> = pairs
            .into_iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| {
                n = n.max(a.max(b) as usize + 1);
                EdgeKey::new(a, b)
            })
            .collect();
        edges.par_sort_unstable();
        edges.dedup();
        Self { n, edges }
    }

    pub fn from_edge_keys<I: IntoIterator<Item = EdgeKey>>(n: usize, keys: I) -> Self {
        Self::from_pairs(n, keys.into_iter().map(|k| (k.0, k.1)))
    }

    pub fn empty(n: usize) -> Self {
        Self {
            n,
            edges: Vec::new(),
        }
    }

    pub fn complete(n: usize) -> Self {
        let n32 = n as VertexId;
        Self::from_pairs(n, (0..n32).flat_map(|a| (a + 1..n32).map(move |b| (a, b))))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[EdgeKey] {
        &self.edges
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        a != b && self.edges.binary_search(&EdgeKey::new(a, b)).is_ok()
    }

    pub fn adjacency(&self) -> Adjacency {
        Adjacency::from_edges(self.n, &self.edges)
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for e in &self.edges {
            deg[e.0 as usize] += 1;
            deg[e.1 as usize] += 1;
        }
        deg
    }

    /// Applies updates literally: inserts add, deletes remove.
    pub fn apply(&self, updates: &[EdgeUpdate]) -> Graph {
        let mut set: FxHashSet<EdgeKey> = self.edges.iter().copied().collect();
        let mut n = self.n;
        for up in updates {
            n = n.max(up.v() as usize + 1);
            match up.kind {
                UpdateKind::Insert => set.insert(up.key()),
                UpdateKind::Delete => set.remove(&up.key()),
            };
        }
        Graph::from_edge_keys(n, set)
    }

    /// Insertions of every edge, in sorted order, timestamped by position.
    pub fn as_insertions(&self) -> Vec<EdgeUpdate> {
        self.edges
            .iter()
            .enumerate()
            .map(|(i, e)| EdgeUpdate::insert(e.0, e.1, i as u64))
            .collect()
    }

    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        for e in &self.edges {
            writeln!(out, "{} {}", e.0, e.1)?;
        }
        out.flush()
    }
}

/// Sorted neighbor lists, one per vertex.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Adjacency {
    lists: Vec<Vec<VertexId>>,
}

impl Adjacency {
    pub fn from_edges(n: usize, edges: &[EdgeKey]) -> Self {
        let mut lists = vec![Vec::new(); n];
        for e in edges {
            lists[e.0 as usize].push(e.1);
            lists[e.1 as usize].push(e.0);
        }
        lists.par_iter_mut().for_each(|l| l.sort_unstable());
        Self { lists }
    }

    /// Lists must already be sorted and symmetric.
    pub fn from_sorted_lists(lists: Vec<Vec<VertexId>>) -> Self {
        debug_assert!(lists.iter().all(|l| l.windows(2).all(|w| w[0] < w[1])));
        Self { lists }
    }

    pub fn n(&self) -> usize {
        self.lists.len()
    }

    pub fn neighbors(&self, v: VertexId) -> &[VertexId] {
        self.lists.get(v as usize).map_or(&[], |l| l.as_slice())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.neighbors(v).len()
    }

    pub fn has_edge(&self, a: VertexId, b: VertexId) -> bool {
        self.neighbors(a).binary_search(&b).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.lists.iter().map(Vec::len).sum::<usize>() / 2
    }
}

/// Counters reported by [`parse_edge_list_with_stats`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct EdgeListStats {
    pub lines: usize,
    pub self_loops: usize,
    pub duplicates: usize,
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let (graph, stats) = parse_edge_list_with_stats(text)?;
    if stats.self_loops > 0 {
        log::warn!("dropped {} self-loop(s) from edge list", stats.self_loops);
    }
    Ok(graph)
}

/// Parses whitespace-separated `u v` lines; `#` starts a comment line.
pub fn parse_edge_list_with_stats(text: &str) -> Result<(Graph, EdgeListStats)> {
    let mut stats = EdgeListStats::default();
    let mut pairs = Vec::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let lineno = lineno + 1;
        let mut fields = line.split_whitespace();
        let mut next = || -> Result<VertexId> {
            let tok = fields
                .next()
                .ok_or_else(|| Error::parse(lineno, "expected two vertex ids"))?;
            let raw = tok
                .parse::<u64>()
                .map_err(|_| Error::parse(lineno, format!("bad vertex id '{tok}'")))?;
            to_vertex(raw, lineno)
        };
        let a = next()?;
        let b = next()?;
        if fields.next().is_some() {
            return Err(Error::parse(lineno, "expected exactly two fields"));
        }
        stats.lines += 1;
        if a == b {
            stats.self_loops += 1;
            continue;
        }
        pairs.push((a, b));
    }
    let n = pairs
        .iter()
        .map(|&(a, b)| a.max(b) as usize + 1)
        .max()
        .unwrap_or(0);
    let raw = pairs.len();
    let graph = Graph::from_pairs(n, pairs);
    stats.duplicates = raw - graph.m();
    Ok((graph, stats))
}
