//! Workload construction and the `count`, `bench`, `verify` and `generate`
//! commands behind the `dyncount` binary.

use std::fmt;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, ensure, Context, Result};
use clap::ValueEnum;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dyncount_core::baseline::MergeStore;
use dyncount_core::generate::{generate_rmat, generate_rmat_pairs, permute_edges, RmatParams};
use dyncount_core::graph::parse_edge_list;
use dyncount_core::kclique_enum::KCliqueCounter;
use dyncount_core::kclique_mm::MmStore;
use dyncount_core::static_algos::{
    brute_force_count, static_triangle_count, StaticRecount, BRUTE_FORCE_MAX_N,
};
use dyncount_core::stream::{parse_update_stream, write_update_stream};
use dyncount_core::triangle::TriangleStore;
use dyncount_core::{normalize_batch, Batch, DynamicCounter, EdgeKey, EdgeUpdate, Graph};

pub const CSV_HEADER: &str = "batch_index,batch_size,applied_updates,count,elapsed_ns,algo,threads";

/// Largest graph `verify` recounts triangles on after every batch.
pub const VERIFY_MAX_EDGES: usize = 5_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Algo {
    DynTri,
    MergeBaseline,
    Static,
    KcliqueEnum,
    KcliqueMm,
}

impl Algo {
    pub fn default_k(self) -> usize {
        match self {
            Algo::KcliqueEnum => 4,
            Algo::KcliqueMm => 6,
            _ => 3,
        }
    }
}

impl fmt::Display for Algo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.to_possible_value().expect("no skipped variants");
        f.write_str(v.get_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Insert,
    Delete,
    Mixed,
}

/// `scale,edges[,a,b,c,d]`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmatSpec {
    pub scale: u32,
    pub edges: usize,
    pub params: RmatParams,
}

impl FromStr for RmatSpec {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        ensure!(
            parts.len() == 2 || parts.len() == 6,
            "expected scale,edges or scale,edges,a,b,c,d, got '{s}'"
        );
        let scale = parts[0]
            .parse()
            .with_context(|| format!("bad scale '{}'", parts[0]))?;
        let edges = parse_count(parts[1])?;
        let params = if parts.len() == 6 {
            let w: Vec<f64> = parts[2..]
                .iter()
                .map(|p| {
                    p.parse::<f64>()
                        .with_context(|| format!("bad probability '{p}'"))
                })
                .collect::<Result<_>>()?;
            RmatParams::new(w[0], w[1], w[2], w[3])?
        } else {
            RmatParams::default()
        };
        Ok(Self {
            scale,
            edges,
            params,
        })
    }
}

/// Accepts plain integers and exact scientific notation such as `2e6`.
pub fn parse_count(s: &str) -> Result<usize> {
    if let Ok(n) = s.parse::<usize>() {
        return Ok(n);
    }
    let x: f64 = s.parse().with_context(|| format!("bad count '{s}'"))?;
    ensure!(x >= 0.0 && x.fract() == 0.0 && x < 1e15, "bad count '{s}'");
    Ok(x as usize)
}

#[derive(Debug, Clone)]
pub enum Source {
    File(PathBuf),
    Rmat(RmatSpec),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub algo: Algo,
    pub k: usize,
    pub source: Source,
    pub batch_size: usize,
    /// Cap on the number of batches; `None` runs the whole stream.
    pub num_batches: Option<usize>,
    pub mode: Mode,
    pub threads: usize,
    pub seed: u64,
    pub output: Option<PathBuf>,
    pub verify: bool,
    /// Corrupts the count after this batch; exercises verification failure.
    pub inject_fault: Option<usize>,
}

impl ExperimentConfig {
    pub fn new(algo: Algo, source: Source) -> Self {
        Self {
            algo,
            k: algo.default_k(),
            source,
            batch_size: 1000,
            num_batches: None,
            mode: Mode::Insert,
            threads: 1,
            seed: 1,
            output: None,
            verify: false,
            inject_fault: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        ensure!(self.batch_size >= 1, "batch size must be at least 1");
        ensure!(self.threads >= 1, "thread count must be at least 1");
        match self.algo {
            Algo::DynTri | Algo::MergeBaseline => {
                ensure!(
                    self.k == 3,
                    "{} counts triangles only (k = 3), got k = {}",
                    self.algo,
                    self.k
                )
            }
            Algo::Static | Algo::KcliqueEnum => ensure!(self.k >= 3, "k must be at least 3"),
            Algo::KcliqueMm => ensure!(
                self.k >= 6 && self.k.is_multiple_of(3),
                "kclique-mm needs k divisible by 3 and at least 6, got {}",
                self.k
            ),
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BatchRecord {
    pub batch_index: usize,
    pub batch_size: usize,
    pub applied_updates: usize,
    pub count: u64,
    pub elapsed_ns: u64,
    pub algo: String,
    pub threads: usize,
}

impl BatchRecord {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.batch_index,
            self.batch_size,
            self.applied_updates,
            self.count,
            self.elapsed_ns,
            self.algo,
            self.threads
        )
    }
}

/// Starting graph plus raw (unnormalized) batches.
#[derive(Debug, Clone)]
pub struct Workload {
    pub initial: Graph,
    pub batches: Vec<Batch>,
}

fn load_graph_or_stream(source: &Source, seed: u64) -> Result<Result<Graph, Vec<EdgeUpdate>>> {
    match source {
        Source::Rmat(spec) => {
            let pairs = generate_rmat_pairs(spec.scale, spec.edges, spec.params, seed)?;
            Ok(Ok(Graph::from_pairs(1usize << spec.scale, pairs)))
        }
        Source::File(path) => {
            let text =
                fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let first = text
                .lines()
                .map(str::trim)
                .find(|l| !l.is_empty() && !l.starts_with('#'));
            let is_stream = first.is_some_and(|l| l.starts_with('+') || l.starts_with('-'));
            if is_stream {
                let ups = parse_update_stream(&text)
                    .with_context(|| format!("parsing {}", path.display()))?;
                Ok(Err(ups))
            } else {
                let g = parse_edge_list(&text)
                    .with_context(|| format!("parsing {}", path.display()))?;
                Ok(Ok(g))
            }
        }
    }
}

/// Builds the starting graph and batch sequence for a run.
///
/// Edge lists and rMAT graphs are permuted by `seed`. Insert mode starts
/// empty and inserts forward; delete mode starts full and deletes from the
/// end of the permutation back. Mixed mode starts from the first half and
/// pairs insertions from the second half with deletions of present edges.
/// Update-stream files are replayed in file order whatever the mode.
pub fn build_workload(cfg: &ExperimentConfig) -> Result<Workload> {
    let size = cfg.batch_size;
    let limit = cfg.num_batches.unwrap_or(usize::MAX);
    let graph = match load_graph_or_stream(&cfg.source, cfg.seed)? {
        Ok(g) => g,
        Err(ups) => {
            let n = ups.iter().map(|u| u.v() as usize + 1).max().unwrap_or(0);
            let batches = ups
                .chunks(size)
                .take(limit)
                .map(|c| Batch::new(c.to_vec()))
                .collect();
            return Ok(Workload {
                initial: Graph::empty(n),
                batches,
            });
        }
    };
    let n = graph.n();
    let order = permute_edges(&graph, cfg.seed);
    let chunk = |ups: &[EdgeUpdate]| -> Vec<Batch> {
        ups.chunks(size)
            .take(limit)
            .map(|c| Batch::new(c.to_vec()))
            .collect()
    };
    Ok(match cfg.mode {
        Mode::Insert => Workload {
            initial: Graph::empty(n),
            batches: chunk(&order),
        },
        Mode::Delete => {
            let ups: Vec<EdgeUpdate> = order
                .iter()
                .rev()
                .enumerate()
                .map(|(i, u)| EdgeUpdate::delete(u.u(), u.v(), i as u64))
                .collect();
            Workload {
                initial: graph,
                batches: chunk(&ups),
            }
        }
        Mode::Mixed => mixed_workload(n, &order, size, limit, cfg.seed),
    })
}

fn mixed_workload(
    n: usize,
    order: &[EdgeUpdate],
    size: usize,
    limit: usize,
    seed: u64,
) -> Workload {
    let half = order.len() / 2;
    let initial = Graph::from_edge_keys(n, order[..half].iter().map(|u| u.key()));
    let mut present: Vec<EdgeKey> = order[..half].iter().map(|u| u.key()).collect();
    let mut pending = order[half..].iter();
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x006d_6978_6564);
    let mut ts = 0u64;
    let mut batches = Vec::new();
    while batches.len() < limit {
        let want_ins = size.div_ceil(2);
        let mut ups = Vec::with_capacity(size);
        let mut inserted = Vec::new();
        for up in pending.by_ref().take(want_ins) {
            ups.push(EdgeUpdate::insert(up.u(), up.v(), ts));
            inserted.push(up.key());
            ts += 1;
        }
        if ups.is_empty() {
            break;
        }
        for _ in 0..size - ups.len() {
            if present.is_empty() {
                break;
            }
            let e = present.swap_remove(rng.gen_range(0..present.len()));
            ups.push(EdgeUpdate::delete(e.0, e.1, ts));
            ts += 1;
        }
        present.extend(inserted);
        batches.push(Batch::new(ups));
    }
    Workload { initial, batches }
}

pub fn make_counter(algo: Algo, graph: &Graph, k: usize) -> Result<Box<dyn DynamicCounter>> {
    Ok(match algo {
        Algo::DynTri => Box::new(TriangleStore::new(graph)),
        Algo::MergeBaseline => Box::new(MergeStore::new(graph)),
        Algo::Static => Box::new(StaticRecount::new(graph, k)?),
        Algo::KcliqueEnum => Box::new(KCliqueCounter::new(graph, k)?),
        Algo::KcliqueMm => Box::new(MmStore::new(graph, k)?),
    })
}

/// Recount used to check a run.
fn oracle_count(graph: &Graph, k: usize) -> Result<u64> {
    if k == 3 {
        Ok(static_triangle_count(graph))
    } else {
        Ok(brute_force_count(graph, k)?)
    }
}

fn check_oracle_guard(cfg: &ExperimentConfig, w: &Workload) -> Result<()> {
    let max_n = w
        .batches
        .iter()
        .flat_map(|b| b.iter().map(|u| u.v() as usize + 1))
        .max()
        .unwrap_or(0)
        .max(w.initial.n());
    if cfg.k == 3 {
        let max_m = w.initial.m() + w.batches.iter().map(Batch::len).sum::<usize>();
        ensure!(
            max_m <= VERIFY_MAX_EDGES,
            "refusing to verify: up to {max_m} edges exceeds {VERIFY_MAX_EDGES}"
        );
    } else {
        ensure!(
            max_n <= BRUTE_FORCE_MAX_N,
            "refusing to verify: {max_n} vertices exceeds the brute-force limit {BRUTE_FORCE_MAX_N}"
        );
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Divergence {
    pub batch_index: usize,
    pub expected: u64,
    pub got: u64,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub initial_count: u64,
    pub records: Vec<BatchRecord>,
    /// Set only when verification ran and found a mismatch.
    pub divergence: Option<Divergence>,
}

impl RunOutcome {
    pub fn final_count(&self) -> u64 {
        self.records.last().map_or(self.initial_count, |r| r.count)
    }

    pub fn total_applied(&self) -> usize {
        self.records.iter().map(|r| r.applied_updates).sum()
    }

    pub fn total_elapsed_ns(&self) -> u64 {
        self.records.iter().map(|r| r.elapsed_ns).sum()
    }
}

/// Runs the configured counter over its workload inside a pool of
/// `cfg.threads` workers. Only normalization and `apply_batch` are timed.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.threads)
        .build()
        .context("building thread pool")?;
    pool.install(|| run_in_pool(cfg))
}

fn run_in_pool(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let workload = build_workload(cfg)?;
    if cfg.verify {
        check_oracle_guard(cfg, &workload)?;
    }
    let mut counter = make_counter(cfg.algo, &workload.initial, cfg.k)?;
    let initial_count = counter.count();
    let mut shadow = cfg.verify.then(|| workload.initial.clone());
    let mut divergence = None;
    let mut records = Vec::with_capacity(workload.batches.len());
    for (i, raw) in workload.batches.iter().enumerate() {
        let start = Instant::now();
        let batch = normalize_batch(raw);
        let mut count = counter.apply_batch(&batch)?;
        let elapsed_ns = (start.elapsed().as_nanos() as u64).max(1);
        if cfg.inject_fault == Some(i) {
            counter.perturb_count(1);
            count = counter.count();
        }
        records.push(BatchRecord {
            batch_index: i,
            batch_size: raw.len(),
            applied_updates: counter.last_applied(),
            count,
            elapsed_ns,
            algo: counter.name().to_string(),
            threads: cfg.threads,
        });
        if let Some(g) = shadow.as_mut() {
            *g = g.apply(batch.updates());
            let expected = oracle_count(g, cfg.k)?;
            if expected != count && divergence.is_none() {
                divergence = Some(Divergence {
                    batch_index: i,
                    expected,
                    got: count,
                });
                break;
            }
        }
    }
    Ok(RunOutcome {
        initial_count,
        records,
        divergence,
    })
}

pub fn cmd_count(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    run_experiment(cfg)
}

pub fn cmd_bench(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    run_experiment(cfg)
}

pub fn cmd_verify(cfg: &ExperimentConfig) -> Result<RunOutcome> {
    let cfg = ExperimentConfig {
        verify: true,
        ..cfg.clone()
    };
    run_experiment(&cfg)
}

/// Header, one row per batch, then a `mean` row averaging the numeric
/// columns (its count column is the final count).
pub fn write_csv<W: Write>(
    out: &mut W,
    outcome: &RunOutcome,
    algo: &str,
    threads: usize,
) -> Result<()> {
    writeln!(out, "{CSV_HEADER}")?;
    for r in &outcome.records {
        writeln!(out, "{}", r.csv_row())?;
    }
    let rows = outcome.records.len().max(1) as f64;
    let mean = |f: fn(&BatchRecord) -> f64| outcome.records.iter().map(f).sum::<f64>() / rows;
    writeln!(
        out,
        "mean,{:.1},{:.1},{},{:.0},{},{}",
        mean(|r| r.batch_size as f64),
        mean(|r| r.applied_updates as f64),
        outcome.final_count(),
        mean(|r| r.elapsed_ns as f64),
        algo,
        threads
    )?;
    Ok(())
}

/// Applied updates per second over the timed sections.
pub fn throughput(outcome: &RunOutcome) -> f64 {
    let ns = outcome.total_elapsed_ns();
    if ns == 0 {
        return 0.0;
    }
    outcome.total_applied() as f64 / (ns as f64 / 1e9)
}

#[derive(Debug, Clone)]
pub struct GenerateConfig {
    pub source: Source,
    pub seed: u64,
}

/// rMAT samples as insertions, or an edge list as a permuted insertion
/// stream. Deterministic in `seed`.
pub fn cmd_generate(cfg: &GenerateConfig) -> Result<Vec<EdgeUpdate>> {
    match &cfg.source {
        Source::Rmat(spec) => Ok(generate_rmat(
            spec.scale,
            spec.edges,
            spec.params,
            cfg.seed,
        )?),
        Source::File(_) => match load_graph_or_stream(&cfg.source, cfg.seed)? {
            Ok(g) => Ok(permute_edges(&g, cfg.seed)),
            Err(_) => {
                bail!("generate expects an edge list or rMAT parameters, not an update stream")
            }
        },
    }
}

pub fn write_stream<W: Write>(out: W, ups: &[EdgeUpdate]) -> Result<()> {
    write_update_stream(out, ups).context("writing update stream")
}
