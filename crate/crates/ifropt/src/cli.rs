//! Command-line arguments.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "ifropt", version, about = "Plan, optimize and simulate MDS-IFR storage codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Communication cost matrix of the instance as CSV
    Closure(Closure),
    /// Greedy repair overlay with MST weights as JSON
    Overlay(Overlay),
    /// Greedy retrieval sets as JSON
    Retrieval(Retrieval),
    /// Optimize a code design
    Solve(Solve),
    /// Storage/repair cost Pareto frontier as CSV, with one witness per row
    Pareto(Pareto),
    /// Monte Carlo and byte-level check of a solution
    Simulate(Simulate),
    /// Walk through encoding, placement, failure, repair and retrieval
    Demo(Demo),
}

#[derive(Debug, Args)]
pub struct Output {
    /// Write here (atomically) instead of stdout
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VarCap {
    /// Largest full model accepted, counted as C(n,ρ+1) + C(n,k)
    #[arg(long, env = "IFROPT_VAR_CAP", default_value_t = 5000)]
    pub var_cap: u64,
    /// Solve even above the variable cap
    #[arg(long)]
    pub force: bool,
}

#[derive(Debug, Args)]
pub struct Closure {
    pub instance: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Overlay {
    pub instance: PathBuf,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Retrieval {
    pub instance: PathBuf,
    /// Use this solution's overlay instead of the greedy one
    #[arg(long, value_name = "PATH")]
    pub solution: Option<PathBuf>,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    /// Exact integer program
    Ilp,
    /// Exact program with continuous block sizes
    Lp,
    /// Greedy overlay and retrieval sets, then block sizes
    Heuristic,
}

impl Method {
    pub fn name(self) -> &'static str {
        match self {
            Method::Ilp => "ilp",
            Method::Lp => "lp",
            Method::Heuristic => "heuristic",
        }
    }
}

#[derive(Debug, Args)]
pub struct Solve {
    pub instance: PathBuf,
    #[arg(long, value_enum, default_value_t = Method::Ilp)]
    pub method: Method,
    /// Continuous block sizes (implied by --method lp)
    #[arg(long)]
    pub relax_b: bool,
    /// Also write the full model as text
    #[arg(long, value_name = "PATH")]
    pub dump_model: Option<PathBuf>,
    #[command(flatten)]
    pub cap: VarCap,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Pareto {
    pub instance: PathBuf,
    /// Not supported: the frontier is over integral block sizes
    #[arg(long)]
    pub relax_b: bool,
    /// Directory for witness solutions; defaults to the directory of --out
    #[arg(long, value_name = "DIR")]
    pub witness_dir: Option<PathBuf>,
    #[command(flatten)]
    pub cap: VarCap,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Args)]
pub struct Simulate {
    pub instance: PathBuf,
    pub solution: PathBuf,
    #[arg(long, default_value_t = 100_000)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Bytes per packet in the byte-level check
    #[arg(long, default_value_t = ifropt_core::erasure::DEFAULT_PACKET_LEN)]
    pub packet_len: usize,
    #[command(flatten)]
    pub output: Output,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Scenario {
    /// Six-node ring, one packet per edge
    Ring,
    /// Five nodes, four 3-node hyperedges
    Hypergraph,
    /// Greedy overlay and retrieval sets on a weighted 5-node ring
    FiveNode,
}

#[derive(Debug, Args)]
pub struct Demo {
    /// Scripted scenario; all three run when neither this nor files are given
    #[arg(long, value_enum, conflicts_with_all = ["instance", "solution"])]
    pub scenario: Option<Scenario>,
    #[arg(requires = "solution")]
    pub instance: Option<PathBuf>,
    pub solution: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub packet_len: usize,
}
