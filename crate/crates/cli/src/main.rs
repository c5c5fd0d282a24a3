//! `mwng` — naming-game simulator for word- and sentence-level consensus
//! dynamics on complex networks.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use mwng::commands::{self, OUT_DIR_ENV};
use mwng::config::{KindCfg, NetworkCfg};

#[derive(Parser)]
#[command(
    name = "mwng",
    version,
    about = "Naming-game simulator: multi-word consensus dynamics on complex networks",
    after_help = format!(
        "Output directories default to ${OUT_DIR_ENV}, then the working directory."
    )
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a network and write it as an edge list
    GenNet(GenNetArgs),
    /// Execute an experiment file and write its artifacts
    Run(RunArgs),
    /// Run a density sweep over random graphs and write its CSV
    Sweep(SweepArgs),
    /// Pool converged-pattern counts from summary.json files
    Tally(TallyArgs),
}

#[derive(Args)]
struct GenNetArgs {
    /// Built-in 500-node preset (RG/0.03 ... SF/75)
    #[arg(long, conflicts_with = "kind")]
    preset: Option<String>,
    /// Network family for explicit parameters
    #[arg(long, value_enum)]
    kind: Option<KindArg>,
    /// Node count
    #[arg(long)]
    n: Option<u32>,
    /// Edge probability (random graphs)
    #[arg(long)]
    p: Option<f64>,
    /// Neighbors per side on the starting ring (small worlds)
    #[arg(long)]
    k_half: Option<u32>,
    /// Rewiring probability (small worlds)
    #[arg(long)]
    rp: Option<f64>,
    /// Edges added per new node (scale-free)
    #[arg(long)]
    m: Option<u32>,
    /// Seed-graph size (scale-free; default m + 1)
    #[arg(long)]
    m0: Option<u32>,
    /// Generation seed
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Output edge-list file
    #[arg(short, long)]
    out: PathBuf,
}

#[derive(Args)]
struct RunArgs {
    /// Experiment file (TOML)
    config: PathBuf,
    /// Output directory (overrides the config file)
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Worker cap for parallel runs
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
}

#[derive(Args)]
struct SweepArgs {
    /// Sweep file (TOML)
    config: PathBuf,
    /// Output CSV path (overrides the config file)
    #[arg(short, long)]
    out: Option<PathBuf>,
    /// Worker cap for parallel runs
    #[arg(long, default_value_t = default_jobs())]
    jobs: usize,
}

#[derive(Args)]
struct TallyArgs {
    /// summary.json files to pool
    #[arg(required = true)]
    inputs: Vec<PathBuf>,
    /// Output file (default: print to stdout)
    #[arg(short, long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum KindArg {
    /// Random graph: --n, --p
    Rg,
    /// Small world: --n, --k-half, --rp
    Sw,
    /// Scale-free: --n, --m, optional --m0
    Sf,
}

impl From<KindArg> for KindCfg {
    fn from(k: KindArg) -> KindCfg {
        match k {
            KindArg::Rg => KindCfg::Rg,
            KindArg::Sw => KindCfg::Sw,
            KindArg::Sf => KindCfg::Sf,
        }
    }
}

fn default_jobs() -> usize {
    std::thread::available_parallelism().map_or(1, usize::from)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let outcome = match cli.command {
        Command::GenNet(args) => {
            let network = NetworkCfg {
                preset: args.preset,
                kind: args.kind.map(Into::into),
                n: args.n,
                p: args.p,
                k_half: args.k_half,
                rp: args.rp,
                m: args.m,
                m0: args.m0,
                seed: None,
            };
            commands::gen_net(&network, args.seed, &args.out)
        }
        Command::Run(args) => commands::run(&args.config, args.out.as_deref(), args.jobs),
        Command::Sweep(args) => commands::sweep(&args.config, args.out.as_deref(), args.jobs),
        Command::Tally(args) => commands::tally(&args.inputs, args.out.as_deref()),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("mwng: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
