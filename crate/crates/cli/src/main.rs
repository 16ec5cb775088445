use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use dyncount_cli::{
    cmd_bench, cmd_count, cmd_generate, cmd_verify, throughput, write_csv, write_stream, Algo,
    ExperimentConfig, GenerateConfig, Mode, RmatSpec, RunOutcome, Source,
};

#[derive(Parser)]
#[command(
    name = "dyncount",
    version,
    about = "Batch-dynamic triangle and k-clique counting"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Apply the whole stream and print the final count.
    Count(RunArgs),
    /// Print one CSV row per batch plus a mean row.
    Bench(RunArgs),
    /// Check every batch against a recount from scratch.
    Verify(RunArgs),
    /// Write an rMAT or permuted-edge update stream.
    Generate(GenerateArgs),
}

#[derive(Args, Clone)]
#[group(id = "source", required = true, multiple = false)]
struct SourceArgs {
    /// Edge list or update stream.
    #[arg(long, group = "source")]
    input: Option<PathBuf>,
    /// scale,edges[,a,b,c,d]
    #[arg(long, group = "source")]
    rmat: Option<RmatSpec>,
}

impl SourceArgs {
    fn source(&self) -> Source {
        match (&self.input, self.rmat) {
            (Some(p), _) => Source::File(p.clone()),
            (None, Some(r)) => Source::Rmat(r),
            (None, None) => unreachable!("clap requires one source"),
        }
    }
}

#[derive(Args)]
struct RunArgs {
    #[arg(long, value_enum, default_value_t = Algo::DynTri)]
    algo: Algo,
    /// Clique size; defaults per algorithm.
    #[arg(long)]
    k: Option<usize>,
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 1000, value_parser = parse_count)]
    batch_size: usize,
    /// Stop after this many batches.
    #[arg(long, value_parser = parse_count)]
    batches: Option<usize>,
    #[arg(long, value_enum, default_value_t = Mode::Insert)]
    mode: Mode,
    #[arg(long, env = "DYNCOUNT_THREADS", default_value_t = default_threads())]
    threads: usize,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
    /// Compare against a recount after every batch.
    #[arg(long)]
    verify: bool,
    #[arg(long, hide = true)]
    inject_fault: Option<usize>,
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    output: Option<PathBuf>,
}

fn parse_count(s: &str) -> Result<usize, String> {
    dyncount_cli::parse_count(s).map_err(|e| e.to_string())
}

fn default_threads() -> usize {
    std::thread::available_parallelism().map_or(1, |n| n.get())
}

impl RunArgs {
    fn config(&self) -> ExperimentConfig {
        ExperimentConfig {
            algo: self.algo,
            k: self.k.unwrap_or(self.algo.default_k()),
            source: self.source.source(),
            batch_size: self.batch_size,
            num_batches: self.batches,
            mode: self.mode,
            threads: self.threads,
            seed: self.seed,
            output: self.output.clone(),
            verify: self.verify,
            inject_fault: self.inject_fault,
        }
    }
}

fn open_output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("creating {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn report_divergence(outcome: &RunOutcome) -> ExitCode {
    match outcome.divergence {
        Some(d) => {
            eprintln!(
                "FAIL at batch {}: expected {}, got {}",
                d.batch_index, d.expected, d.got
            );
            ExitCode::from(2)
        }
        None => ExitCode::SUCCESS,
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Count(args) => {
            let cfg = args.config();
            let outcome = cmd_count(&cfg)?;
            let mut out = open_output(&cfg.output)?;
            writeln!(out, "{}", outcome.final_count())?;
            out.flush()?;
            Ok(report_divergence(&outcome))
        }
        Command::Bench(args) => {
            let cfg = args.config();
            let outcome = cmd_bench(&cfg)?;
            let mut out = open_output(&cfg.output)?;
            write_csv(&mut out, &outcome, &cfg.algo.to_string(), cfg.threads)?;
            out.flush()?;
            eprintln!(
                "throughput: {:.0} updates/s over {} batches",
                throughput(&outcome),
                outcome.records.len()
            );
            Ok(report_divergence(&outcome))
        }
        Command::Verify(args) => {
            let cfg = args.config();
            let outcome = cmd_verify(&cfg)?;
            let code = report_divergence(&outcome);
            if outcome.divergence.is_none() {
                let mut out = open_output(&cfg.output)?;
                writeln!(
                    out,
                    "PASS: {} batches, final count {}",
                    outcome.records.len(),
                    outcome.final_count()
                )?;
                out.flush()?;
            }
            Ok(code)
        }
        Command::Generate(args) => {
            let ups = cmd_generate(&GenerateConfig {
                source: args.source.source(),
                seed: args.seed,
            })?;
            write_stream(open_output(&args.output)?, &ups)?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
