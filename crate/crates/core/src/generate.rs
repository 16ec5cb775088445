//! Synthetic workloads: rMAT edge streams, seeded edge permutations and
//! random graphs / update batches for tests and benchmarks.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};
use crate::stream::{Batch, EdgeUpdate, UpdateKind};

const RMAT_CHUNK: usize = 1 << 16;

/// Quadrant probabilities of the recursive-matrix generator. Always sums to 1.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmatParams {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
}

impl RmatParams {
    /// Scales the four weights proportionally so they sum to 1.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let w = [a, b, c, d];
        if w.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(Error::Parameter(
                "rMAT probabilities must be finite and >= 0".into(),
            ));
        }
        let sum: f64 = w.iter().sum();
        if sum <= 0.0 {
            return Err(Error::Parameter("rMAT probabilities are all zero".into()));
        }
        Ok(Self {
            a: a / sum,
            b: b / sum,
            c: c / sum,
            d: d / sum,
        })
    }

    /// a = 0.5, b = c = 0.1 with the remaining mass (0.3) on d.
    pub fn skewed_default() -> Self {
        Self::new(0.5, 0.1, 0.1, 0.3).expect("valid constants")
    }

    pub fn probabilities(&self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }
}

impl Default for RmatParams {
    fn default() -> Self {
        Self::skewed_default()
    }
}

/// Raw (source, target) samples; self-loops are resampled, duplicates kept.
pub fn generate_rmat_pairs(
    scale: u32,
    num_edges: usize,
    params: RmatParams,
    seed: u64,
) -> Result<Vec<(VertexId, VertexId)>> {
    if scale == 0 || scale > 31 {
        return Err(Error::Parameter(format!(
            "rMAT scale must be in 1..=31, got {scale}"
        )));
    }
    let [a, b, c, _] = params.probabilities();
    let (ab, abc) = (a + b, a + b + c);
    if params.a + params.d >= 1.0 - f64::EPSILON && (params.b + params.c) <= f64::EPSILON {
        // only diagonal quadrants; every sample would be a self-loop
        return Err(Error::Parameter(
            "rMAT parameters can only produce self-loops".into(),
        ));
    }
    let chunks = num_edges.div_ceil(RMAT_CHUNK);
    let out: Vec<Vec<(VertexId, VertexId)>> = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let len = RMAT_CHUNK.min(num_edges - chunk * RMAT_CHUNK);
            let mut pairs = Vec::with_capacity(len);
            while pairs.len() < len {
                let (mut u, mut v) = (0u32, 0u32);
                for _ in 0..scale {
                    let r: f64 = rng.gen();
                    let (du, dv) = if r < a {
                        (0, 0)
                    } else if r < ab {
                        (0, 1)
                    } else if r < abc {
                        (1, 0)
                    } else {
                        (1, 1)
                    };
                    u = (u << 1) | du;
                    v = (v << 1) | dv;
                }
                if u != v {
                    pairs.push((u, v));
                }
            }
            pairs
        })
        .collect();
    Ok(out.into_iter().flatten().collect())
}

/// rMAT stream over `2^scale` vertices as insertions timestamped by position.
pub fn generate_rmat(
    scale: u32,
    num_edges: usize,
    params: RmatParams,
    seed: u64,
) -> Result<Vec<EdgeUpdate>> {
    Ok(generate_rmat_pairs(scale, num_edges, params, seed)?
        .into_iter()
        .enumerate()
        .map(|(i, (u, v))| EdgeUpdate::insert(u, v, i as u64))
        .collect())
}

/// Number of distinct ordered pairs in a sample stream.
pub fn distinct_pairs(pairs: &[(VertexId, VertexId)]) -> usize {
    let mut keys: Vec<u64> = pairs
        .par_iter()
        .map(|&(u, v)| ((u as u64) << 32) | v as u64)
        .collect();
    keys.par_sort_unstable();
    keys.dedup();
    keys.len()
}

/// Every edge once, as insertions in a seeded uniformly random order.
pub fn permute_edges(graph: &Graph, seed: u64) -> Vec<EdgeUpdate> {
    let mut edges = graph.edges().to_vec();
    edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    edges
        .into_iter()
        .enumerate()
        .map(|(i, e)| EdgeUpdate::insert(e.0, e.1, i as u64))
        .collect()
}

/// Erdős–Rényi G(n, p).
pub fn random_graph(n: usize, p: f64, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n32 = n as VertexId;
    let mut pairs = Vec::new();
    for a in 0..n32 {
        for b in a + 1..n32 {
            if rng.gen_bool(p) {
                pairs.push((a, b));
            }
        }
    }
    Graph::from_pairs(n, pairs)
}

/// Raw random update batches over vertices `0..n`: duplicates, nullifying
/// pairs, ghost deletions and re-insertions all occur. Timestamps increase
/// across the whole sequence.
pub fn random_update_batches(
    n: usize,
    num_batches: usize,
    batch_size: usize,
    insert_prob: f64,
    seed: u64,
) -> Vec<Batch> {
    assert!(n >= 2, "need at least two vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut ts = 0u64;
    (0..num_batches)
        .map(|_| {
            let ups = (0..batch_size)
                .map(|_| {
                    let u = rng.gen_range(0..n as VertexId);
                    let mut v = rng.gen_range(0..n as VertexId - 1);
                    if v >= u {
                        v += 1;
                    }
                    let kind = if rng.gen_bool(insert_prob) {
                        UpdateKind::Insert
                    } else {
                        UpdateKind::Delete
                    };
                    ts += 1;
                    EdgeUpdate::new(u, v, kind, ts).expect("distinct endpoints")
                })
                .collect();
            Batch::new(ups)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn rmat_scale_one_single_edge() {
        let ups = generate_rmat(1, 1, RmatParams::default(), 3).unwrap();
        assert_eq!(ups.len(), 1);
        assert_eq!((ups[0].u(), ups[0].v()), (0, 1));
    }

    #[test]
    fn rmat_rejects_degenerate_parameters() {
        assert!(RmatParams::new(0.0, 0.0, 0.0, 0.0).is_err());
        assert!(RmatParams::new(-1.0, 1.0, 1.0, 1.0).is_err());
        let diag = RmatParams::new(0.5, 0.0, 0.0, 0.5).unwrap();
        assert!(generate_rmat(3, 10, diag, 1).is_err());
        assert!(generate_rmat(0, 10, RmatParams::default(), 1).is_err());
    }

    #[test]
    fn rmat_renormalizes() {
        let p = RmatParams::new(0.5, 0.1, 0.1, 0.1).unwrap().probabilities();
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
        assert!((p[0] - 0.625).abs() < 1e-12);
    }

    /// Independent sequential reimplementation of the recursive sampler.
    fn reference_sampler(scale: u32, n: usize, params: RmatParams, seed: u64) -> Vec<(u32, u32)> {
        let [a, b, c, _] = params.probabilities();
        let mut out = Vec::new();
        for chunk in 0..n.div_ceil(RMAT_CHUNK) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(chunk as u64);
            let want = RMAT_CHUNK.min(n - chunk * RMAT_CHUNK);
            let mut got = 0;
            while got < want {
                let (mut u, mut v) = (0u32, 0u32);
                let mut half = 1u32 << (scale - 1);
                for _ in 0..scale {
                    let r: f64 = rng.gen();
                    if r >= a + b + c {
                        u += half;
                        v += half;
                    } else if r >= a + b {
                        u += half;
                    } else if r >= a {
                        v += half;
                    }
                    half >>= 1;
                }
                if u != v {
                    out.push((u, v));
                    got += 1;
                }
            }
        }
        out
    }

    #[test]
    fn rmat_matches_reference_sampler() {
        let params = RmatParams::default();
        let ups = generate_rmat(5, 10_000, params, 99).unwrap();
        assert_eq!(ups.len(), 10_000);
        assert!(ups.iter().all(|u| u.v() < 32));
        let reference = reference_sampler(5, 10_000, params, 99);
        let ours: HashSet<_> = ups.iter().map(|u| u.key()).collect();
        let theirs: HashSet<_> = reference
            .iter()
            .map(|&(a, b)| crate::graph::EdgeKey::new(a, b))
            .collect();
        assert_eq!(ours.len(), theirs.len());
        assert_eq!(ours, theirs);
    }

    #[test]
    fn rmat_is_deterministic() {
        let a = generate_rmat(8, 70_000, RmatParams::default(), 5).unwrap();
        let b = generate_rmat(8, 70_000, RmatParams::default(), 5).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn permutation_of_triangle() {
        let g = Graph::complete(3);
        let p = permute_edges(&g, 42);
        let keys: HashSet<_> = p.iter().map(|u| u.key()).collect();
        assert_eq!(p.len(), 3);
        assert_eq!(keys, g.edges().iter().copied().collect());
        assert_eq!(p, permute_edges(&g, 42));
    }

    #[test]
    fn permutation_emits_each_edge_once() {
        let g = random_graph(600, 0.56, 8);
        assert!(g.m() > 90_000);
        let p = permute_edges(&g, 1);
        let mut keys: Vec<_> = p.iter().map(|u| u.key()).collect();
        keys.sort_unstable();
        assert_eq!(keys, g.edges());
    }
}
