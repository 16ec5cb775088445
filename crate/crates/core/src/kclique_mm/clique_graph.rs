use std::collections::BTreeSet;

use rustc_hash::{FxHashMap, FxHashSet};
use smallvec::SmallVec;

use crate::error::{Error, Result};
use crate::graph::VertexId;
use crate::static_algos::intersect_into;

/// Sorted vertex tuple of a small clique.
pub type Tuple = SmallVec<[VertexId; 4]>;

/// Graph whose vertices are the ℓ-cliques of a base graph and whose edges
/// join two disjoint ℓ-cliques whose union is a 2ℓ-clique. Ids are handed
/// out densely in creation order and never reused.
#[derive(Debug, Clone, Default)]
pub struct CliqueGraph {
    ell: usize,
    ids: FxHashMap<Tuple, u32>,
    tuples: Vec<Option<Tuple>>,
    adj: Vec<FxHashSet<u32>>,
    edges: usize,
}

impl CliqueGraph {
    pub fn empty(ell: usize) -> Self {
        Self {
            ell,
            ..Self::default()
        }
    }

    /// Builds from sorted adjacency lists of the base graph.
    pub fn from_lists(lists: &[Vec<VertexId>], ell: usize, budget: usize) -> Result<Self> {
        let mut cg = Self::empty(ell);
        let mut small = Vec::new();
        let all: Vec<VertexId> = (0..lists.len() as VertexId).collect();
        cliques_within(lists, &all, ell, &mut Tuple::new(), &mut |t| {
            small.push(t.clone())
        });
        if small.len() > budget {
            return Err(Error::Refused(format!(
                "{} cliques of size {ell} exceed the budget of {budget}",
                small.len()
            )));
        }
        for t in small {
            cg.add_vertex(t);
        }
        let mut big = Vec::new();
        cliques_within(lists, &all, 2 * ell, &mut Tuple::new(), &mut |t| {
            big.push(t.clone())
        });
        if big.len() > budget {
            return Err(Error::Refused(format!(
                "{} cliques of size {} exceed the budget of {budget}",
                big.len(),
                2 * ell
            )));
        }
        for t in big {
            for (p, q) in bipartitions(&t, ell) {
                let (a, b) = (cg.ids[&p], cg.ids[&q]);
                cg.add_edge(a, b);
            }
        }
        Ok(cg)
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    /// One past the largest id ever handed out.
    pub fn id_bound(&self) -> usize {
        self.tuples.len()
    }

    pub fn id_of(&self, tuple: &[VertexId]) -> Option<u32> {
        self.ids.get(tuple).copied()
    }

    pub fn tuple(&self, id: u32) -> Option<&[VertexId]> {
        self.tuples.get(id as usize)?.as_deref()
    }

    pub fn is_live(&self, id: u32) -> bool {
        self.tuple(id).is_some()
    }

    pub fn live_ids(&self) -> impl Iterator<Item = u32> + '_ {
        self.tuples
            .iter()
            .enumerate()
            .filter(|(_, t)| t.is_some())
            .map(|(i, _)| i as u32)
    }

    pub fn degree(&self, id: u32) -> usize {
        self.adj.get(id as usize).map_or(0, FxHashSet::len)
    }

    pub fn neighbors(&self, id: u32) -> &FxHashSet<u32> {
        &self.adj[id as usize]
    }

    pub fn has_edge(&self, a: u32, b: u32) -> bool {
        self.adj.get(a as usize).is_some_and(|s| s.contains(&b))
    }

    pub(crate) fn add_vertex(&mut self, tuple: Tuple) -> u32 {
        if let Some(&id) = self.ids.get(&tuple) {
            return id;
        }
        let id = self.tuples.len() as u32;
        self.ids.insert(tuple.clone(), id);
        self.tuples.push(Some(tuple));
        self.adj.push(FxHashSet::default());
        id
    }

    pub(crate) fn remove_vertex(&mut self, id: u32) {
        debug_assert!(self.adj[id as usize].is_empty());
        if let Some(t) = self.tuples[id as usize].take() {
            self.ids.remove(&t);
        }
    }

    pub(crate) fn add_edge(&mut self, a: u32, b: u32) {
        if self.adj[a as usize].insert(b) {
            self.adj[b as usize].insert(a);
            self.edges += 1;
        }
    }

    pub(crate) fn remove_edge(&mut self, a: u32, b: u32) {
        if self.adj[a as usize].remove(&b) {
            self.adj[b as usize].remove(&a);
            self.edges -= 1;
        }
    }

    /// Vertex and edge sets by tuple, independent of id assignment.
    pub fn canonical(&self) -> (BTreeSet<Tuple>, BTreeSet<(Tuple, Tuple)>) {
        let verts = self.ids.keys().cloned().collect();
        let mut edges = BTreeSet::new();
        for a in self.live_ids() {
            for &b in &self.adj[a as usize] {
                let (ta, tb) = (
                    self.tuples[a as usize].clone().unwrap(),
                    self.tuples[b as usize].clone().unwrap(),
                );
                if ta < tb {
                    edges.insert((ta, tb));
                }
            }
        }
        (verts, edges)
    }
}

/// Calls `visit` for every clique of `size` vertices drawn from `cand`
/// (sorted), extended from `prefix`, in increasing vertex order.
pub(crate) fn cliques_within(
    lists: &[Vec<VertexId>],
    cand: &[VertexId],
    size: usize,
    prefix: &mut Tuple,
    visit: &mut dyn FnMut(&Tuple),
) {
    if size == 0 {
        let mut t = prefix.clone();
        t.sort_unstable();
        visit(&t);
        return;
    }
    let mut next = Vec::new();
    for (i, &x) in cand.iter().enumerate() {
        if cand.len() - i < size {
            break;
        }
        intersect_into(&cand[i + 1..], &lists[x as usize], &mut next);
        prefix.push(x);
        let owned = std::mem::take(&mut next);
        cliques_within(lists, &owned, size - 1, prefix, visit);
        next = owned;
        prefix.pop();
    }
}

/// Cliques of `size` vertices that contain the edge `(u, v)`.
pub(crate) fn cliques_through_edge(
    lists: &[Vec<VertexId>],
    u: VertexId,
    v: VertexId,
    size: usize,
) -> Vec<Tuple> {
    let mut common = Vec::new();
    intersect_into(&lists[u as usize], &lists[v as usize], &mut common);
    let mut out = Vec::new();
    let mut prefix: Tuple = SmallVec::from_slice(&[u, v]);
    cliques_within(lists, &common, size - 2, &mut prefix, &mut |t| {
        out.push(t.clone())
    });
    out
}

pub(crate) fn is_clique(lists: &[Vec<VertexId>], verts: &[VertexId]) -> bool {
    verts.iter().enumerate().all(|(i, &a)| {
        verts[i + 1..].iter().all(|&b| {
            lists
                .get(a as usize)
                .is_some_and(|l| l.binary_search(&b).is_ok())
        })
    })
}

/// Splits a sorted tuple of size 2ℓ into unordered pairs of ℓ-subsets.
pub(crate) fn bipartitions(t: &[VertexId], ell: usize) -> Vec<(Tuple, Tuple)> {
    let mut out = Vec::new();
    for_each_subset(&t[1..], ell - 1, &mut |chosen| {
        let mut p: Tuple = SmallVec::from_slice(&[t[0]]);
        p.extend_from_slice(chosen);
        p.sort_unstable();
        let q: Tuple = t.iter().copied().filter(|x| !p.contains(x)).collect();
        out.push((p, q));
    });
    out
}

/// Splits a sorted tuple of size 3ℓ into unordered triples of ℓ-subsets.
pub(crate) fn tripartitions(t: &[VertexId], ell: usize) -> Vec<[Tuple; 3]> {
    let mut out = Vec::new();
    for_each_subset(&t[1..], ell - 1, &mut |chosen| {
        let mut p: Tuple = SmallVec::from_slice(&[t[0]]);
        p.extend_from_slice(chosen);
        p.sort_unstable();
        let rest: Tuple = t.iter().copied().filter(|x| !p.contains(x)).collect();
        for (q, r) in bipartitions(&rest, ell) {
            out.push([p.clone(), q, r]);
        }
    });
    out
}

fn for_each_subset(items: &[VertexId], size: usize, f: &mut dyn FnMut(&[VertexId])) {
    fn rec(
        items: &[VertexId],
        size: usize,
        cur: &mut Vec<VertexId>,
        f: &mut dyn FnMut(&[VertexId]),
    ) {
        if cur.len() == size {
            f(cur);
            return;
        }
        let need = size - cur.len();
        for i in 0..items.len() {
            if items.len() - i < need {
                break;
            }
            cur.push(items[i]);
            rec(&items[i + 1..], size, cur, f);
            cur.pop();
        }
    }
    rec(items, size, &mut Vec::with_capacity(size), f);
}
