use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dyncount_cli::{
    cmd_bench, cmd_count, cmd_generate, cmd_verify, write_csv, Algo, ExperimentConfig,
    GenerateConfig, Mode, RmatSpec, Source, CSV_HEADER,
};
use dyncount_core::generate::{random_graph, RmatParams};
use dyncount_core::static_algos::static_triangle_count;
use dyncount_core::Graph;
use tempfile::tempdir;

fn dyncount(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dyncount"))
        .args(args)
        .env_remove("DYNCOUNT_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_graph(path: &Path, g: &Graph) {
    let mut buf = Vec::new();
    g.write_edge_list(&mut buf).unwrap();
    fs::write(path, buf).unwrap();
}

fn rmat(scale: u32, edges: usize) -> Source {
    Source::Rmat(RmatSpec {
        scale,
        edges,
        params: RmatParams::default(),
    })
}

#[test]
fn count_k4_and_empty() {
    let dir = tempdir().unwrap();
    let k4 = dir.path().join("k4.txt");
    write_graph(&k4, &Graph::complete(4));
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "").unwrap();
    let o = dyncount(&[
        "count",
        "--algo",
        "static",
        "--k",
        "3",
        "--input",
        k4.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "4");
    for algo in [
        "dyn-tri",
        "merge-baseline",
        "static",
        "kclique-enum",
        "kclique-mm",
    ] {
        let o = dyncount(&["count", "--algo", algo, "--input", empty.to_str().unwrap()]);
        assert!(o.status.success(), "{algo}");
        assert_eq!(stdout(&o).trim(), "0", "{algo}");
    }
}

#[test]
fn rmat_count_matches_static() {
    let mut cfg = ExperimentConfig::new(Algo::DynTri, rmat(10, 100_000));
    cfg.batch_size = 5000;
    let dynamic = cmd_count(&cfg).unwrap().final_count();
    let pairs =
        dyncount_core::generate::generate_rmat_pairs(10, 100_000, RmatParams::default(), cfg.seed)
            .unwrap();
    assert_eq!(
        dynamic,
        static_triangle_count(&Graph::from_pairs(1024, pairs))
    );
}

#[test]
fn bench_csv_shape() {
    let mut cfg = ExperimentConfig::new(Algo::DynTri, rmat(9, 6000));
    cfg.batch_size = 2000;
    let outcome = cmd_bench(&cfg).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, &outcome, "dyn-tri", 1).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert!(lines.last().unwrap().starts_with("mean,"));
    assert_eq!(lines.len(), outcome.records.len() + 2);
    for r in &outcome.records {
        assert!(r.elapsed_ns > 0);
        assert_eq!(r.applied_updates, r.batch_size);
    }
}

#[test]
fn insert_mode_grows_and_delete_mode_empties() {
    let g = random_graph(40, 0.3, 9);
    let dir = tempdir().unwrap();
    let path = dir.path().join("g.txt");
    write_graph(&path, &g);
    let mut cfg = ExperimentConfig::new(Algo::DynTri, Source::File(path));
    cfg.batch_size = 50;
    let ins = cmd_bench(&cfg).unwrap();
    let cumulative: Vec<usize> = ins
        .records
        .iter()
        .scan(0, |acc, r| {
            *acc += r.applied_updates;
            Some(*acc)
        })
        .collect();
    assert!(cumulative.windows(2).all(|w| w[0] < w[1]));
    assert_eq!(*cumulative.last().unwrap(), g.m());
    assert_eq!(ins.final_count(), static_triangle_count(&g));

    cfg.mode = Mode::Delete;
    let del = cmd_bench(&cfg).unwrap();
    assert_eq!(del.initial_count, static_triangle_count(&g));
    assert_eq!(del.final_count(), 0);
}

#[test]
fn counts_do_not_depend_on_threads() {
    let counts = |threads: usize| {
        let mut cfg = ExperimentConfig::new(Algo::DynTri, rmat(10, 20_000));
        cfg.batch_size = 3000;
        cfg.mode = Mode::Mixed;
        cfg.threads = threads;
        cmd_bench(&cfg)
            .unwrap()
            .records
            .iter()
            .map(|r| r.count)
            .collect::<Vec<_>>()
    };
    let one = counts(1);
    assert_eq!(one, counts(2));
    assert_eq!(one, counts(4));
}

#[test]
fn verify_passes_and_catches_faults() {
    let g = random_graph(60, 0.2, 4);
    let dir = tempdir().unwrap();
    let path = dir.path().join("g.txt");
    write_graph(&path, &g);
    let mut cfg = ExperimentConfig::new(Algo::DynTri, Source::File(path.clone()));
    cfg.batch_size = 6;
    cfg.num_batches = Some(50);
    cfg.mode = Mode::Mixed;
    let ok = cmd_verify(&cfg).unwrap();
    assert_eq!(ok.records.len(), 50);
    assert!(ok.divergence.is_none());

    cfg.inject_fault = Some(17);
    let bad = cmd_verify(&cfg).unwrap();
    assert_eq!(bad.divergence.unwrap().batch_index, 17);

    let p = path.to_str().unwrap();
    let args = [
        "verify",
        "--input",
        p,
        "--batch-size",
        "6",
        "--batches",
        "50",
        "--mode",
        "mixed",
    ];
    assert_eq!(dyncount(&args).status.code(), Some(0));
    let mut with_fault = args.to_vec();
    with_fault.extend(["--inject-fault", "17"]);
    let o = dyncount(&with_fault);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("batch 17"));
}

#[test]
fn verify_clique_counters() {
    let g = random_graph(14, 0.65, 2);
    let dir = tempdir().unwrap();
    let path = dir.path().join("g.txt");
    write_graph(&path, &g);
    for (algo, k) in [
        (Algo::KcliqueMm, 6),
        (Algo::KcliqueEnum, 5),
        (Algo::Static, 4),
    ] {
        let mut cfg = ExperimentConfig::new(algo, Source::File(path.clone()));
        cfg.k = k;
        cfg.batch_size = 5;
        cfg.mode = Mode::Mixed;
        let out = cmd_verify(&cfg).unwrap();
        assert!(out.divergence.is_none(), "{algo}");
        assert!(!out.records.is_empty());
    }
}

#[test]
fn verify_refuses_large_clique_graphs() {
    let mut cfg = ExperimentConfig::new(Algo::KcliqueEnum, rmat(8, 1000));
    cfg.k = 4;
    assert!(cmd_verify(&cfg).is_err());
}

#[test]
fn generate_is_deterministic() {
    let dir = tempdir().unwrap();
    let a = dir.path().join("a.txt");
    let b = dir.path().join("b.txt");
    for p in [&a, &b] {
        let o = dyncount(&[
            "generate",
            "--rmat",
            "5,100",
            "--seed",
            "11",
            "--output",
            p.to_str().unwrap(),
        ]);
        assert!(o.status.success());
    }
    let text = fs::read(&a).unwrap();
    assert_eq!(text, fs::read(&b).unwrap());
    let text = String::from_utf8(text).unwrap();
    assert_eq!(text.lines().count(), 100);
    assert!(text.lines().all(|l| l.starts_with("+ ")));

    let k3 = dir.path().join("k3.txt");
    write_graph(&k3, &Graph::complete(3));
    let ups = cmd_generate(&GenerateConfig {
        source: Source::File(k3),
        seed: 3,
    })
    .unwrap();
    let mut keys: Vec<_> = ups.iter().map(|u| (u.u(), u.v())).collect();
    keys.sort_unstable();
    assert_eq!(keys, vec![(0, 1), (0, 2), (1, 2)]);
}

#[test]
fn update_stream_input_is_replayed() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("s.txt");
    fs::write(&path, "+ 0 1\n+ 1 2\n+ 0 2\n- 0 1\n+ 0 1\n+ 2 3\n").unwrap();
    let o = dyncount(&[
        "count",
        "--input",
        path.to_str().unwrap(),
        "--batch-size",
        "2",
    ]);
    assert_eq!(stdout(&o).trim(), "1");
}

#[test]
fn errors_exit_with_one() {
    let o = dyncount(&["count", "--input", "/nonexistent/file"]);
    assert_eq!(o.status.code(), Some(1));
    let dir = tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "0 1\nx y\n").unwrap();
    let o = dyncount(&["count", "--input", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
}

#[test]
fn thread_flag_beats_env() {
    let o = Command::new(env!("CARGO_BIN_EXE_dyncount"))
        .args([
            "bench",
            "--rmat",
            "6,100",
            "--batch-size",
            "50",
            "--threads",
            "2",
        ])
        .env("DYNCOUNT_THREADS", "3")
        .output()
        .unwrap();
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",dyn-tri,2"));
    let o = Command::new(env!("CARGO_BIN_EXE_dyncount"))
        .args(["bench", "--rmat", "6,100", "--batch-size", "50"])
        .env("DYNCOUNT_THREADS", "3")
        .output()
        .unwrap();
    assert!(stdout(&o).lines().nth(1).unwrap().ends_with(",dyn-tri,3"));
}
