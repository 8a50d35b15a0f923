mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

/// Seed used when `--seed` is not given.
pub const DEFAULT_SEED: u64 = 1729;

#[derive(Parser)]
#[command(
    name = "chronocite",
    version,
    about = "Transitive reduction and dimension estimates for citation DAGs"
)]
struct Cli {
    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long, global = true)]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Ingest node and edge TSVs and report what was dropped.
    Ingest(IngestArgs),
    /// Transitive reduction: reduced edge list, report and degree histogram.
    Tr(TrArgs),
    /// Transitive closure, bounded by an edge budget.
    Closure(ClosureArgs),
    /// One interval between two nodes: N, P and the midpoint split.
    Interval(IntervalArgs),
    /// Sampled dimension estimates over the whole graph.
    Dimension(DimensionArgs),
    /// Sprinkle a synthetic causal set and write it as TSVs.
    Sprinkle(SprinkleArgs),
    /// Nodes ranked by citation count after reduction.
    Rank(RankArgs),
    /// Plot-ready CSV tables.
    Export(ExportArgs),
}

#[derive(Args, Serialize)]
pub struct GraphInput {
    /// Node TSV: `id<TAB>time`.
    #[arg(long)]
    pub nodes: PathBuf,
    /// Edge TSV: `citing<TAB>cited`.
    #[arg(long)]
    pub edges: PathBuf,
    /// Keep edges between equal-time nodes (fails on cycles).
    #[arg(long)]
    pub keep_equal_time: bool,
}

#[derive(Args, Serialize)]
pub struct OutDir {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    pub out: PathBuf,
}

#[derive(Args, Serialize)]
pub struct IngestArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutDir,
}

#[derive(Args, Serialize)]
pub struct TrArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutDir,
    /// Column stripe width of the bitset sweep.
    #[arg(long, default_value_t = chronocite::transitive::DEFAULT_CHUNK_SIZE)]
    pub chunk_size: usize,
}

#[derive(Args, Serialize)]
pub struct ClosureArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutDir,
    #[arg(long, default_value_t = chronocite::transitive::DEFAULT_CHUNK_SIZE)]
    pub chunk_size: usize,
    /// Abort (exit 3) if the closure would exceed this many edges.
    #[arg(long, default_value_t = chronocite::transitive::DEFAULT_EDGE_BUDGET)]
    pub edge_budget: u64,
}

#[derive(Args, Serialize)]
pub struct IntervalArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutDir,
    /// Later (citing) endpoint id.
    #[arg(long)]
    pub source: String,
    /// Earlier (cited) endpoint id.
    #[arg(long)]
    pub target: String,
    /// Count the endpoints as interval members.
    #[arg(long)]
    pub include_endpoints: bool,
}

#[derive(Args, Serialize)]
pub struct DimensionArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutDir,
    /// mm | box-counting | box-space
    #[arg(long, default_value = "mm")]
    pub method: String,
    /// Accepted intervals to sample.
    #[arg(long, default_value_t = 200)]
    pub num_pairs: usize,
    #[arg(long, default_value_t = chronocite::dimension::DEFAULT_MIN_INTERVAL_SIZE)]
    pub min_interval_size: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long)]
    pub include_endpoints: bool,
}

#[derive(Args, Serialize)]
pub struct SprinkleArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutDir,
    /// minkowski | cube
    #[arg(long, default_value = "minkowski")]
    pub geometry: String,
    #[arg(long, default_value_t = 2)]
    pub dim: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
}

#[derive(Args, Serialize)]
pub struct RankArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub input: GraphInput,
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutDir,
    #[arg(long, default_value_t = 20)]
    pub top_k: usize,
}

#[derive(Args, Serialize)]
pub struct ExportArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub out: OutDir,
    /// f3 (degree histogram) | f4 (before/after scatter) | f5 (dimension estimates)
    #[arg(long)]
    pub figure: String,
    /// Graph input, needed by f3 and f4.
    #[arg(long, requires = "edges")]
    pub nodes: Option<PathBuf>,
    #[arg(long, requires = "nodes")]
    pub edges: Option<PathBuf>,
    #[arg(long)]
    pub keep_equal_time: bool,
    /// A `dimension_report.json`, needed by f5.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

/// Bad invocation: exit status 1.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<UsageError>().is_some() {
        return 1;
    }
    match err.downcast_ref::<chronocite::Error>() {
        Some(chronocite::Error::EdgeBudgetExceeded { .. }) => 3,
        Some(chronocite::Error::InvalidArgument(_)) => 1,
        _ => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    if let Some(threads) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(threads).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    let result = match &cli.command {
        Command::Ingest(a) => commands::ingest(a),
        Command::Tr(a) => commands::tr(a),
        Command::Closure(a) => commands::closure(a),
        Command::Interval(a) => commands::interval(a),
        Command::Dimension(a) => commands::dimension(a),
        Command::Sprinkle(a) => commands::sprinkle(a),
        Command::Rank(a) => commands::rank(a),
        Command::Export(a) => commands::export(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
