mod cmd;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use corpoly::gadgets::EXHAUSTIVE_HEIGHT_LIMIT;
use corpoly::polytope::ENUMERATION_LIMIT;
use corpoly::treewidth::DEFAULT_EXACT_LIMIT;

/// Exit codes. Clap itself exits with 2 on usage errors.
pub mod exit {
    pub const OK: u8 = 0;
    pub const VERIFICATION_FAILED: u8 = 1;
    pub const USAGE: u8 = 2;
    pub const IO: u8 = 3;
    pub const INVALID_INPUT: u8 = 4;
    pub const LIMIT: u8 = 5;
    pub const SOLVER: u8 = 6;
}

#[derive(Parser)]
#[command(
    name = "corpoly",
    version,
    about = "Correlation polytopes, tree-decomposition formulations and gadget checks"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
pub struct Global {
    /// Print the JSON report on stdout instead of the summary.
    #[arg(long, global = true)]
    pub json: bool,
    /// Also write the JSON report to this file.
    #[arg(long, global = true, value_name = "PATH")]
    pub report: Option<PathBuf>,
    #[command(flatten)]
    pub limits: Limits,
}

/// Caps for exhaustive work; echoed into every report.
#[derive(Args, Clone, Serialize)]
pub struct Limits {
    /// Largest vertex count for subset enumeration (brute force, lift checks).
    #[arg(long = "enum-limit", global = true, env = "CORPOLY_ENUM_LIMIT", default_value_t = ENUMERATION_LIMIT)]
    pub enumeration: usize,
    /// Largest constraint graph accepted by exact treewidth.
    #[arg(long = "exact-tw-limit", global = true, env = "CORPOLY_EXACT_TW_LIMIT", default_value_t = DEFAULT_EXACT_LIMIT)]
    pub exact_treewidth: usize,
    /// Largest grid height for exhaustive face enumeration.
    #[arg(long = "grid-limit", global = true, env = "CORPOLY_GRID_LIMIT", default_value_t = EXHAUSTIVE_HEIGHT_LIMIT)]
    pub grid_height: usize,
}

#[derive(Subcommand)]
enum Command {
    /// Generate or convert graph files.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Extended formulations from tree decompositions.
    #[command(subcommand)]
    Ef(EfCmd),
    /// Maximum-weight subsets.
    #[command(subcommand)]
    Map(MapCmd),
    /// Crossover gadget and grid-with-gadgets checks.
    #[command(subcommand)]
    Gadget(GadgetCmd),
}

#[derive(Clone, Copy, ValueEnum)]
pub enum Family {
    Grid,
    Complete,
    CompleteBipartite,
    Path,
    Cycle,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum GraphFormat {
    EdgeList,
    Json,
}

#[derive(Subcommand)]
pub enum GraphCmd {
    /// grid <h> | complete <n> | complete-bipartite <a> <b> | path <n> | cycle <n>
    Gen {
        family: Family,
        #[arg(required = true)]
        params: Vec<usize>,
        #[arg(long, value_enum, default_value = "edge-list")]
        format: GraphFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rewrite a graph file (either format) in the chosen format.
    Convert {
        input: PathBuf,
        #[arg(long, value_enum)]
        to: GraphFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
pub enum DecompositionMethod {
    MinFill,
    MinDegree,
    Exact,
}

#[derive(Args)]
pub struct DecompositionArgs {
    /// Tree decomposition of the constraint graph (JSON) instead of computing one.
    #[arg(long, value_name = "PATH")]
    pub td: Option<PathBuf>,
    /// How to compute the decomposition when `--td` is not given.
    #[arg(long, value_enum, default_value = "min-fill", conflicts_with = "td")]
    pub decomposition: DecompositionMethod,
}

#[derive(Subcommand)]
pub enum EfCmd {
    /// Build the formulation and report its size.
    Build {
        graph: PathBuf,
        #[command(flatten)]
        decomposition: DecompositionArgs,
        /// Write the decomposition used.
        #[arg(long, value_name = "PATH")]
        td_out: Option<PathBuf>,
    },
    /// Compare LP, DP and brute force on seeded random objectives.
    Verify {
        graph: PathBuf,
        #[command(flatten)]
        decomposition: DecompositionArgs,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write the formulation as an LP file plus a projection sidecar.
    ExportLp {
        graph: PathBuf,
        #[command(flatten)]
        decomposition: DecompositionArgs,
        #[arg(short, long)]
        output: PathBuf,
        /// Defaults to the output path with extension `projection.json`.
        #[arg(long)]
        sidecar: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MapMethod {
    Dp,
    Bf,
    Lp,
}

#[derive(Subcommand)]
pub enum MapCmd {
    Solve {
        graph: PathBuf,
        /// JSON object from variable ids (`u`, `u--v`) to rationals.
        weights: PathBuf,
        #[arg(long, value_enum, default_value = "dp")]
        method: MapMethod,
        /// Run every method that fits the limits and compare.
        #[arg(long)]
        cross_check: bool,
        #[command(flatten)]
        decomposition: DecompositionArgs,
    },
}

#[derive(Subcommand)]
pub enum GadgetCmd {
    /// Enumerate the face of the replaced crossover gadget.
    VerifyCrossover,
    /// Write the grid with gadgets of height h (graph, face equations, descriptor).
    BuildGrid {
        h: usize,
        #[arg(short, long, default_value = ".")]
        out_dir: PathBuf,
    },
    /// Check that the face projects onto COR(K_{h,h}).
    VerifyGrid { h: usize },
    /// Dimension bound, cited bound and their geometric mean.
    Report { n: usize, h: usize },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let g = cli.global;
    let out = match cli.command {
        Command::Graph(c) => cmd::graph::run(c),
        Command::Ef(c) => cmd::ef::run(c, &g),
        Command::Map(c) => cmd::map::run(c, &g),
        Command::Gadget(c) => cmd::gadget::run(c, &g),
    };
    match out {
        Ok(true) => ExitCode::from(exit::OK),
        Ok(false) => ExitCode::from(exit::VERIFICATION_FAILED),
        Err(e) => {
            let code = cmd::exit_code(&e);
            if code == exit::LIMIT {
                eprintln!("error: exhaustive limit exceeded: {e:#}");
            } else {
                eprintln!("error: {e:#}");
            }
            ExitCode::from(code)
        }
    }
}
