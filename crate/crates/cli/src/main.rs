use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use hsframe_cli::commands::{run_check, run_gen, run_suite_cmd, CheckOptions, CliResult, GenOptions, SuiteOptions};

/// Hilbert-Schmidt frame toolkit: generate frames and sweep identity
/// checks over index subsets. Exit code 0 means every check passed, 1
/// means some check failed, 2 means the run could not be carried out.
#[derive(Parser)]
#[command(name = "hsframe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a frame from a JSON recipe and report its frame bounds
    Gen(GenCmd),
    /// Sweep one identity over a frame file
    Check(CheckCmd),
    /// Run a multi-trial identity sweep from a config file
    Suite(SuiteCmd),
}

#[derive(Args)]
struct GenCmd {
    /// Recipe file (JSON)
    spec: PathBuf,
    /// Write the frame here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Seed for recipes without one (then HSFRAME_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Args)]
struct CheckCmd {
    /// Frame file (JSON); vector and operator-block frames are lifted
    /// to the Hilbert-Schmidt model
    #[arg(long)]
    frame: PathBuf,
    /// Identity to check (e.g. parseval_identity, canonical_dual)
    #[arg(long)]
    theorem: String,
    /// Dual frame file; only for alternate_dual, complex_identity, and
    /// weighted_identity, which otherwise construct a dual themselves
    #[arg(long)]
    dual: Option<PathBuf>,
    /// Perturbation scale of the constructed dual (0 = canonical)
    #[arg(long, default_value_t = 1.0)]
    dual_scale: f64,
    /// Comma-separated lambda values in [0, 1]
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Option<Vec<f64>>,
    /// Subset sweep: auto, all, or random:<k>
    #[arg(long)]
    subset_mode: Option<String>,
    /// Relative equality tolerance
    #[arg(long)]
    tol_eq: Option<f64>,
    /// Relative inequality tolerance
    #[arg(long)]
    tol_ineq: Option<f64>,
    /// Seed for subsets, test vectors, weights, and constructed duals
    #[arg(long)]
    seed: Option<u64>,
    /// Row format: jsonl or csv
    #[arg(long)]
    format: Option<String>,
    /// Write rows here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
    /// Number of test vectors (basis vectors first)
    #[arg(long, default_value_t = 20)]
    vectors: usize,
    /// Worker threads (0 = default pool); never affects row order
    #[arg(long)]
    threads: Option<usize>,
}

#[derive(Args)]
struct SuiteCmd {
    /// Suite config file (JSON)
    config: PathBuf,
    /// Override the configured trial count
    #[arg(long)]
    trials: Option<usize>,
    /// Restrict to one theorem; repeat the flag for several
    #[arg(long = "theorem")]
    theorems: Option<Vec<String>>,
    /// Comma-separated lambda values in [0, 1]
    #[arg(long, value_delimiter = ',')]
    lambda_grid: Option<Vec<f64>>,
    /// Subset sweep: auto, all, or random:<k>
    #[arg(long)]
    subset_mode: Option<String>,
    /// Relative equality tolerance
    #[arg(long)]
    tol_eq: Option<f64>,
    /// Relative inequality tolerance
    #[arg(long)]
    tol_ineq: Option<f64>,
    /// Master seed (overrides the config; then HSFRAME_SEED, then 0)
    #[arg(long)]
    seed: Option<u64>,
    /// Row format: jsonl or csv
    #[arg(long)]
    format: Option<String>,
    /// Write rows here (summary then goes to stdout instead of stderr)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Override the configured test-vector count
    #[arg(long)]
    vectors: Option<usize>,
    /// Worker threads (0 = default pool); never affects row order
    #[arg(long)]
    threads: Option<usize>,
}

fn run(cli: Cli) -> CliResult<bool> {
    match cli.command {
        Command::Gen(cmd) => {
            run_gen(&GenOptions { spec_path: cmd.spec, out: cmd.out, seed: cmd.seed })?;
            Ok(true)
        }
        Command::Check(cmd) => run_check(&CheckOptions {
            frame_path: cmd.frame,
            dual_path: cmd.dual,
            theorem: cmd.theorem,
            lambda_grid: cmd.lambda_grid,
            subset_mode: cmd.subset_mode,
            tol_eq: cmd.tol_eq,
            tol_ineq: cmd.tol_ineq,
            seed: cmd.seed,
            format: cmd.format,
            out: cmd.out,
            vectors: cmd.vectors,
            dual_scale: cmd.dual_scale,
            threads: cmd.threads,
        }),
        Command::Suite(cmd) => run_suite_cmd(&SuiteOptions {
            config_path: cmd.config,
            trials: cmd.trials,
            theorems: cmd.theorems,
            lambda_grid: cmd.lambda_grid,
            subset_mode: cmd.subset_mode,
            tol_eq: cmd.tol_eq,
            tol_ineq: cmd.tol_ineq,
            seed: cmd.seed,
            format: cmd.format,
            out: cmd.out,
            vectors: cmd.vectors,
            threads: cmd.threads,
        }),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
