//! `quark`: command-line front end for quark decomposition.

mod commands;
mod run;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser, Debug)]
#[command(name = "quark", version, about = "Motif-driven dense subgraph discovery")]
struct Cli {
    /// Worker threads for motif counting (default: all cores).
    #[arg(long, global = true, env = "QUARK_THREADS")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Count motif instances and motif degrees.
    Count(CountArgs),
    /// Quark numbers (and optionally role-aware numbers) per M instance.
    Decompose(DecomposeArgs),
    /// Build the quark hierarchy as JSON.
    Build(BuildArgs),
    /// Per-quark quality metrics from a built hierarchy.
    Metrics(MetricsArgs),
    /// Node role profiles from role-aware edge quark numbers.
    Roles(RolesArgs),
    /// Compare the engine against the brute-force oracle.
    Verify(VerifyArgs),
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Directed,
    Signed,
    /// Undirected edge list plus a node label file.
    Labeled,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MArg {
    Auto,
    Node,
    Edge,
    Triangle,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct GraphArgs {
    /// Edge list file.
    #[arg(long)]
    pub graph: PathBuf,
    #[arg(long, value_enum, default_value = "directed")]
    pub mode: Mode,
    /// Node label file ("node label" per line); required in labeled mode.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    /// Keep reciprocal arcs of a directed graph as separate edges.
    #[arg(long)]
    pub no_merge: bool,
    /// In labeled mode, drop nodes whose label does not occur in the motif.
    #[arg(long)]
    pub filter_labels: bool,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct MotifArgs {
    /// Motif N, e.g. acyclic, cycle+, acyclic++-a, tri:FFM, clique4, or "all".
    #[arg(long)]
    pub motif: String,
    /// Motif M; auto pairs edges with triangles and triangles with 4-cliques.
    #[arg(long = "m", value_enum, default_value = "auto")]
    pub m: MArg,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct OutputArgs {
    /// Output file (default: stdout).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Run manifest path (default: <out>.manifest.json when --out is set).
    #[arg(long)]
    pub manifest: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct CountArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub motif: MotifArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
    /// Also run the decomposition and report the maximum quark number.
    #[arg(long)]
    pub max_k: bool,
}

#[derive(Args, Debug, Serialize)]
pub struct DecomposeArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub motif: MotifArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
    /// Add role-aware quark numbers, one column per orbit.
    #[arg(long)]
    pub role_aware: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Assign {
    Largest,
}

#[derive(Args, Debug, Serialize)]
pub struct BuildArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub motif: MotifArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
    /// Leaves smaller than this many nodes are not listed as leaves, and
    /// quarks smaller than this are skipped by the partition export.
    #[arg(long, default_value_t = 0)]
    pub min_nodes: usize,
    /// Skip per-quark metrics.
    #[arg(long)]
    pub no_metrics: bool,
    /// Export a node -> quark partition.
    #[arg(long, value_enum)]
    pub assign: Option<Assign>,
    /// Partition CSV path (with --assign).
    #[arg(long, requires = "assign")]
    pub partition: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct MetricsArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub motif: MotifArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
    /// Hierarchy JSON written by `build`.
    #[arg(long)]
    pub forest: PathBuf,
    /// Ground-truth classes ("node class" per line); switches the output to
    /// agreement scores of the largest-quark partition.
    #[arg(long)]
    pub truth: Option<PathBuf>,
    /// Minimum quark size considered by the partition (with --truth).
    #[arg(long, default_value_t = 0)]
    pub min_nodes: usize,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum AggregationArg {
    Mean,
    Sum,
}

#[derive(Args, Debug, Serialize)]
pub struct RolesArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub motif: MotifArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
    #[arg(long, value_enum, default_value = "mean")]
    pub aggregation: AggregationArg,
    /// Also write the role-aware quarks of this level as JSON to --quarks.
    #[arg(long, requires = "quarks")]
    pub level: Option<u32>,
    #[arg(long)]
    pub quarks: Option<PathBuf>,
}

#[derive(Args, Debug, Serialize)]
pub struct VerifyArgs {
    #[command(flatten)]
    #[serde(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub motif: MotifArgs,
    #[command(flatten)]
    #[serde(flatten)]
    pub output: OutputArgs,
    /// Seed of the tie-break shuffles.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of shuffled peels compared against the unshuffled one.
    #[arg(long, default_value_t = 20)]
    pub shuffles: u64,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(run::EXIT_CONFIG);
        }
    }
    let result = match cli.command {
        Command::Count(a) => commands::count(a),
        Command::Decompose(a) => commands::decompose(a),
        Command::Build(a) => commands::build(a),
        Command::Metrics(a) => commands::metrics(a),
        Command::Roles(a) => commands::roles(a),
        Command::Verify(a) => commands::verify(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
