//! Acceptance gate. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any failed.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dyncount_cli::{cmd_bench, Algo, ExperimentConfig, Mode, RmatSpec, Source};
use dyncount_core::baseline::MergeStore;
use dyncount_core::generate::{distinct_pairs, generate_rmat_pairs, random_graph, RmatParams};
use dyncount_core::kclique_enum::KCliqueCounter;
use dyncount_core::kclique_mm::{MmConfig, MmStore};
use dyncount_core::matmul::{naive_multiply, strassen_multiply, DenseMatrix};
use dyncount_core::static_algos::{brute_force_count, static_triangle_count};
use dyncount_core::triangle::TriangleStore;
use dyncount_core::{
    normalize_batch, Batch, DynamicCounter, EdgeKey, EdgeUpdate, Graph, UpdateKind,
};

struct Verdict {
    pass: bool,
    detail: String,
    /// Failed only because the machine has too few hardware threads.
    short_of_cores: bool,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
        short_of_cores: false,
    }
}

fn fail(detail: impl Into<String>) -> Verdict {
    verdict(false, detail)
}

/// Raw mixed batch against the current graph: deletions of present edges,
/// insertions of random pairs, plus duplicates and nullifying pairs.
fn mixed_batch(g: &Graph, size: usize, ts: &mut u64, rng: &mut ChaCha8Rng) -> Batch {
    let n = g.n() as u32;
    let edges = g.edges();
    let mut ups: Vec<EdgeUpdate> = Vec::with_capacity(size);
    while ups.len() < size {
        *ts += 1;
        let r: f64 = rng.gen();
        let up = if r < 0.1 && !ups.is_empty() {
            let prev = ups[rng.gen_range(0..ups.len())];
            let kind = if rng.gen_bool(0.5) {
                prev.kind
            } else if prev.is_insert() {
                UpdateKind::Delete
            } else {
                UpdateKind::Insert
            };
            EdgeUpdate::new(prev.u(), prev.v(), kind, *ts).unwrap()
        } else if r < 0.55 && !edges.is_empty() {
            let e = edges[rng.gen_range(0..edges.len())];
            EdgeUpdate::delete(e.0, e.1, *ts)
        } else {
            let u = rng.gen_range(0..n);
            let mut v = rng.gen_range(0..n - 1);
            if v >= u {
                v += 1;
            }
            EdgeUpdate::insert(u, v, *ts)
        };
        ups.push(up);
    }
    Batch::new(ups)
}

/// Initial graph and raw batches, each generated against the graph state
/// it will be applied to.
fn mixed_stream(n: usize, p: f64, batches: usize, size: usize, seed: u64) -> (Graph, Vec<Batch>) {
    let initial = random_graph(n, p, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x5eed);
    let mut cur = initial.clone();
    let mut ts = 0;
    let mut out = Vec::with_capacity(batches);
    for _ in 0..batches {
        let b = mixed_batch(&cur, size, &mut ts, &mut rng);
        cur = cur.apply(normalize_batch(&b).updates());
        out.push(b);
    }
    (initial, out)
}

const DELTAS: [usize; 4] = [1, 7, 64, 256];
const DENSITIES: [f64; 5] = [0.02, 0.08, 0.2, 0.45, 0.8];

fn triangle_streams() -> Vec<(Graph, Vec<Batch>)> {
    (0..100u64)
        .map(|i| {
            let n = 16 + (i as usize * 7) % 49;
            let p = DENSITIES[i as usize % DENSITIES.len()];
            let delta = DELTAS[(i as usize / DENSITIES.len()) % DELTAS.len()];
            mixed_stream(n, p, 20 + (i as usize % 5), delta, 1000 + i)
        })
        .collect()
}

fn oracle_equivalence(streams: &[(Graph, Vec<Batch>)]) -> (Verdict, Vec<Vec<u64>>) {
    let start = Instant::now();
    let mut sequences = Vec::new();
    let mut checked = 0;
    for (s, (g, batches)) in streams.iter().enumerate() {
        let mut store = TriangleStore::new(g);
        let mut shadow = g.clone();
        let mut seq = Vec::new();
        for (i, raw) in batches.iter().enumerate() {
            let batch = normalize_batch(raw);
            let got = match store.apply_batch(&batch) {
                Ok(c) => c,
                Err(e) => return (fail(format!("stream {s} batch {i}: {e}")), sequences),
            };
            shadow = shadow.apply(batch.updates());
            let want = static_triangle_count(&shadow);
            if got != want {
                return (
                    fail(format!(
                        "stream {s} batch {i}: dyn-tri {got}, static {want}"
                    )),
                    sequences,
                );
            }
            seq.push(got);
            checked += 1;
        }
        sequences.push(seq);
    }
    let t = start.elapsed();
    (
        verdict(
            t < Duration::from_secs(60),
            format!("{} streams, {checked} batches, {:.2?}", streams.len(), t),
        ),
        sequences,
    )
}

fn baseline_agreement(streams: &[(Graph, Vec<Batch>)], reference: &[Vec<u64>]) -> Verdict {
    if reference.len() != streams.len() {
        return fail("reference sequences incomplete");
    }
    let start = Instant::now();
    for (s, ((g, batches), want)) in streams.iter().zip(reference).enumerate() {
        let mut store = MergeStore::new(g);
        for (i, raw) in batches.iter().enumerate() {
            match store.apply_batch(&normalize_batch(raw)) {
                Ok(c) if c == want[i] => {}
                Ok(c) => {
                    return fail(format!(
                        "stream {s} batch {i}: merge {c}, dyn-tri {}",
                        want[i]
                    ))
                }
                Err(e) => return fail(format!("stream {s} batch {i}: {e}")),
            }
        }
    }
    let t = start.elapsed();
    verdict(
        t < Duration::from_secs(60),
        format!("{} streams, {:.2?}", streams.len(), t),
    )
}

fn nullification() -> Verdict {
    let (u, v, w, x) = (1, 2, 3, 4);
    let raw = Batch::new(vec![
        EdgeUpdate::insert(u, v, 3),
        EdgeUpdate::delete(w, x, 1),
        EdgeUpdate::delete(u, v, 2),
    ]);
    let got: BTreeSet<(EdgeKey, bool)> = normalize_batch(&raw)
        .iter()
        .map(|e| (e.key(), e.is_insert()))
        .collect();
    let want: BTreeSet<(EdgeKey, bool)> =
        [(EdgeKey::new(u, v), true), (EdgeKey::new(w, x), false)].into();
    verdict(got == want, format!("{got:?}"))
}

fn kclique_enumeration() -> Verdict {
    let start = Instant::now();
    let mut batches_checked = 0;
    for k in [4, 5, 6] {
        for i in 0..30u64 {
            let n = 12 + (i as usize % 17);
            let p = [0.3, 0.45, 0.6][i as usize % 3];
            let (g, batches) =
                mixed_stream(n, p, 10, 3 + (i as usize % 10), 7000 + i * 13 + k as u64);
            let mut c = match KCliqueCounter::new(&g, k) {
                Ok(c) => c,
                Err(e) => return fail(e.to_string()),
            };
            let mut shadow = g.clone();
            for (b, raw) in batches.iter().enumerate() {
                let batch = normalize_batch(raw);
                shadow = shadow.apply(batch.updates());
                let want = brute_force_count(&shadow, k).unwrap();
                match c.apply_batch(&batch) {
                    Ok(got) if got == want => {}
                    Ok(got) => return fail(format!("k={k} graph {i} batch {b}: {got} vs {want}")),
                    Err(e) => return fail(format!("k={k} graph {i} batch {b}: {e}")),
                }
                batches_checked += 1;
            }
        }
    }
    let t = start.elapsed();
    verdict(
        t < Duration::from_secs(120),
        format!("90 graphs, {batches_checked} batches, {t:.2?}"),
    )
}

fn kclique_mm() -> Verdict {
    let start = Instant::now();
    let mut batches_checked = 0;
    let mut moved = 0;
    for i in 0..20u64 {
        let n = 11 + (i as usize % 6);
        let p = [0.6, 0.7, 0.8][i as usize % 3];
        let (g, batches) = mixed_stream(n, p, 10, 2 + (i as usize % 7), 9000 + i);
        // default thresholds, then a low one so the matrix core is exercised
        for thr in [None, Some(3.0 + (i % 4) as f64 * 3.0)] {
            let cfg = MmConfig {
                threshold_override: thr,
                ..MmConfig::default()
            };
            let mut c = match MmStore::with_config(&g, 6, cfg) {
                Ok(c) => c,
                Err(e) => return fail(e.to_string()),
            };
            let mut shadow = g.clone();
            for (b, raw) in batches.iter().enumerate() {
                let batch = normalize_batch(raw);
                shadow = shadow.apply(batch.updates());
                let want = brute_force_count(&shadow, 6).unwrap();
                match c.apply_batch(&batch) {
                    Ok(got) if got == want => {}
                    Ok(got) => {
                        return fail(format!("graph {i} {thr:?} batch {b}: {got} vs {want}"))
                    }
                    Err(e) => return fail(format!("graph {i} {thr:?} batch {b}: {e}")),
                }
                if c.triangle_units() % 90 != 0 {
                    return fail(format!(
                        "graph {i} batch {b}: total {} not divisible by 90",
                        c.triangle_units()
                    ));
                }
                moved += c.last_phase().moved;
                batches_checked += 1;
            }
        }
    }
    let t = start.elapsed();
    verdict(
        t < Duration::from_secs(120),
        format!(
            "20 graphs x 2 thresholds, {batches_checked} batches, {moved} class moves, {t:.2?}"
        ),
    )
}

fn strassen_exactness() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    let random = |dim: usize, rng: &mut ChaCha8Rng| {
        let rows: Vec<Vec<i64>> = (0..dim)
            .map(|_| (0..dim).map(|_| rng.gen_range(-100..=100)).collect())
            .collect();
        DenseMatrix::from_rows(&rows).unwrap()
    };
    for i in 0..100 {
        let dim = match i {
            0 => 1,
            1 => 256,
            2 => 255,
            3 => 129,
            _ => rng.gen_range(1..=256),
        };
        let a = random(dim, &mut rng);
        let b = random(dim, &mut rng);
        if strassen_multiply(&a, &b).unwrap() != naive_multiply(&a, &b).unwrap() {
            return fail(format!("mismatch at dim {dim}"));
        }
    }
    let t = start.elapsed();
    verdict(
        t < Duration::from_secs(30),
        format!("100 products, {t:.2?}"),
    )
}

fn single_vs_batch() -> Verdict {
    for s in 0..20u64 {
        let (g, batches) = mixed_stream(
            40,
            0.1 + s as f64 * 0.02,
            12,
            DELTAS[s as usize % 4],
            500 + s,
        );
        let mut batched = TriangleStore::new(&g);
        let mut single = TriangleStore::new(&g);
        for raw in &batches {
            batched.apply_batch(&normalize_batch(raw)).unwrap();
            let mut ups = raw.updates().to_vec();
            ups.sort_by_key(|u| u.timestamp);
            for up in ups {
                single.apply_batch(&Batch::new(vec![up])).unwrap();
            }
        }
        if batched.count() != single.count() {
            return fail(format!(
                "stream {s}: batched {} vs singletons {}",
                batched.count(),
                single.count()
            ));
        }
    }
    verdict(true, "20 streams")
}

fn determinism() -> Verdict {
    let mut runs = Vec::new();
    for mode in [Mode::Insert, Mode::Mixed] {
        for threads in [1, 2, 8] {
            let mut cfg = ExperimentConfig::new(
                Algo::DynTri,
                Source::Rmat(RmatSpec {
                    scale: 13,
                    edges: 120_000,
                    params: RmatParams::default(),
                }),
            );
            cfg.batch_size = 10_000;
            cfg.mode = mode;
            cfg.threads = threads;
            let counts: Vec<u64> = match cmd_bench(&cfg) {
                Ok(o) => o.records.iter().map(|r| r.count).collect(),
                Err(e) => return fail(e.to_string()),
            };
            runs.push((mode, threads, counts));
        }
    }
    for w in runs.chunks(3) {
        if w.iter().any(|r| r.2 != w[0].2) {
            return fail(format!("{:?}: count columns differ across threads", w[0].0));
        }
    }
    verdict(
        true,
        format!("insert and mixed, {} rows each", runs[0].2.len()),
    )
}

fn median(mut xs: Vec<Duration>) -> Duration {
    xs.sort();
    xs[xs.len() / 2]
}

/// Batches mixing fresh rMAT samples with deletions of present edges.
fn perf_batches(g: &Graph, scale: u32, count: usize, size: usize, seed: u64) -> Vec<Batch> {
    let fresh = generate_rmat_pairs(scale, count * size / 2, RmatParams::default(), seed).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = g.edges();
    let mut ts = 0u64;
    fresh
        .chunks(size / 2)
        .map(|ins| {
            let mut ups = Vec::with_capacity(size);
            for &(u, v) in ins {
                ts += 1;
                ups.push(EdgeUpdate::insert(u, v, ts));
            }
            for _ in 0..size - ins.len() {
                ts += 1;
                let e = edges[rng.gen_range(0..edges.len())];
                ups.push(EdgeUpdate::delete(e.0, e.1, ts));
            }
            Batch::new(ups)
        })
        .collect()
}

fn pool(threads: usize) -> rayon::ThreadPool {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
}

fn dynamic_vs_static() -> Verdict {
    let scale = 14;
    let pairs = generate_rmat_pairs(scale, 2_000_000, RmatParams::default(), 1).unwrap();
    let g = Graph::from_pairs(1 << scale, pairs);
    if g.m() < 1_000_000 {
        return fail(format!("only {} unique edges", g.m()));
    }
    let batches = perf_batches(&g, scale, 5, 2000, 99);
    let p = pool(1);
    let (dynamic, stat) = p.install(|| {
        let mut store = TriangleStore::new(&g);
        let mut dynamic = Vec::new();
        let mut stat = Vec::new();
        let mut shadow = g.clone();
        for raw in &batches {
            let start = Instant::now();
            let batch = normalize_batch(raw);
            store.apply_batch(&batch).unwrap();
            dynamic.push(start.elapsed());
            shadow = shadow.apply(batch.updates());
            let start = Instant::now();
            let c = static_triangle_count(&shadow);
            stat.push(start.elapsed());
            assert_eq!(c, store.count());
        }
        (median(dynamic), median(stat))
    });
    let ratio = stat.as_secs_f64() / dynamic.as_secs_f64();
    verdict(
        ratio >= 50.0,
        format!(
            "{} edges, batch 2000: dynamic {dynamic:.2?}, static {stat:.2?}, ratio {ratio:.0}x",
            g.m()
        ),
    )
}

fn parallel_speedup() -> Verdict {
    let scale = 16;
    let pairs = generate_rmat_pairs(scale, 2_000_000, RmatParams::default(), 3).unwrap();
    let g = Graph::from_pairs(1 << scale, pairs);
    let batch = perf_batches(&g, scale, 1, 2_000_000, 5).remove(0);
    let base = TriangleStore::new(&g);
    let time_at = |threads: usize| {
        let p = pool(threads);
        let runs: Vec<Duration> = (0..5)
            .map(|_| {
                let mut store = base.clone();
                p.install(|| {
                    let start = Instant::now();
                    store.apply_batch(&normalize_batch(&batch)).unwrap();
                    start.elapsed()
                })
            })
            .collect();
        median(runs)
    };
    let one = time_at(1);
    let eight = time_at(8);
    let speedup = one.as_secs_f64() / eight.as_secs_f64();
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let mut v = verdict(
        speedup >= 2.0,
        format!("batch 2e6: 1 thread {one:.2?}, 8 threads {eight:.2?}, speedup {speedup:.2}x on {cores} hardware thread(s)"),
    );
    v.short_of_cores = !v.pass && cores < 8;
    v
}

fn rmat_shape() -> Verdict {
    let pairs = generate_rmat_pairs(14, 2_000_000, RmatParams::default(), 1).unwrap();
    let unique = distinct_pairs(&pairs) as f64;
    let target = 1_569_454.0;
    let off = (unique - target) / target;
    verdict(
        off.abs() <= 0.05,
        format!("{unique} unique pairs, {:+.2}% from {target}", off * 100.0),
    )
}

type Criterion = (&'static str, Box<dyn FnOnce() -> Verdict>);

fn main() {
    let streams = triangle_streams();
    let (c1, sequences) = oracle_equivalence(&streams);
    let criteria: Vec<Criterion> = vec![
        ("1 dyn-tri equals static recount", Box::new(move || c1)),
        (
            "2 merge baseline equals dyn-tri",
            Box::new(move || baseline_agreement(&streams, &sequences)),
        ),
        ("3 nullification example", Box::new(nullification)),
        (
            "4 kclique-enum equals brute force",
            Box::new(kclique_enumeration),
        ),
        ("5 kclique-mm equals brute force", Box::new(kclique_mm)),
        ("6 strassen equals naive", Box::new(strassen_exactness)),
        ("7 singletons equal one batch", Box::new(single_vs_batch)),
        (
            "8 bench counts independent of threads",
            Box::new(determinism),
        ),
        (
            "9a dynamic batch vs static recount",
            Box::new(dynamic_vs_static),
        ),
        ("9b 8-thread speedup", Box::new(parallel_speedup)),
        ("10 rMAT unique edge count", Box::new(rmat_shape)),
    ];
    // DYNCOUNT_ACCEPT_STRICT=1 also fails the run on core-starved criteria.
    let strict = std::env::var("DYNCOUNT_ACCEPT_STRICT").is_ok_and(|v| v == "1");
    let mut failed = 0;
    for (name, run) in criteria {
        let v = run();
        println!(
            "[{}] {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
        if v.short_of_cores {
            println!("       needs at least 8 hardware threads; not counted in the exit status");
        }
        if !v.pass && (strict || !v.short_of_cores) {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criterion(s) failed");
        std::process::exit(1);
    }
}
