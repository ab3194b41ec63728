//! Implements the three subcommands. All failures surface as
//! [`CliError`]; the binary maps them to exit code 2, reserving exit
//! code 1 for sweeps that ran but found a failing check.

use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use hsframe_core::generators::{gen_test_vectors, generate, AnyFrame, GenSpec};
use hsframe_core::hs_frame::{make_alternate_dual, HSFrame};
use hsframe_core::identities::{default_lambda_grid, Theorem, ToleranceConfig};
use hsframe_core::FrameError;
use serde::de::DeserializeOwned;

use crate::config::{resolve_seed, OutputFormat, SubsetMode, SuiteConfig};
use crate::output::{write_rows, write_summary};
use crate::runner::{run_suite, run_theorem, summarize, SweepPlan};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error("{0}")]
    Usage(String),
}

pub type CliResult<T> = std::result::Result<T, CliError>;

fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents)
        .map_err(|e| CliError::Usage(format!("cannot write {}: {e}", path.display())))
}

/// Runs `op` on a dedicated pool of `threads` workers; `None` or zero
/// uses the default pool. Row order never depends on this.
fn in_pool<T: Send>(threads: Option<usize>, op: impl FnOnce() -> T + Send) -> CliResult<T> {
    match threads {
        None | Some(0) => Ok(op()),
        Some(t) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(t)
                .build()
                .map_err(|e| CliError::Usage(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(op))
        }
    }
}

fn parse_lambda_grid(flag: &Option<Vec<f64>>) -> CliResult<Option<Vec<f64>>> {
    match flag {
        None => Ok(None),
        Some(grid) if grid.is_empty() => {
            Err(CliError::Usage("--lambda-grid needs at least one value".into()))
        }
        Some(grid) => Ok(Some(grid.clone())),
    }
}

fn apply_tolerances(
    base: ToleranceConfig,
    tol_eq: Option<f64>,
    tol_ineq: Option<f64>,
) -> CliResult<ToleranceConfig> {
    let cfg = ToleranceConfig {
        tol_eq: tol_eq.unwrap_or(base.tol_eq),
        tol_ineq: tol_ineq.unwrap_or(base.tol_ineq),
    };
    cfg.validate()?;
    Ok(cfg)
}

#[derive(Clone, Debug)]
pub struct GenOptions {
    pub spec_path: PathBuf,
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
}

/// Generates a frame from a recipe file and reports its frame bounds.
/// The frame goes to `--out` (bounds on stdout) or to stdout (bounds on
/// stderr).
pub fn run_gen(opts: &GenOptions) -> CliResult<()> {
    let spec: GenSpec = read_json(&opts.spec_path)?;
    let seed = resolve_seed(opts.seed, None)?;
    let frame = generate(&spec, seed)?;
    let (lower, upper) = frame.frame_bounds()?;
    let mut encoded = serde_json::to_string(&frame).map_err(io::Error::other)?;
    encoded.push('\n');
    let bounds = format!("bounds A={lower} B={upper}");
    match &opts.out {
        Some(path) => {
            write_file(path, &encoded)?;
            println!("{bounds}");
        }
        None => {
            io::stdout().write_all(encoded.as_bytes())?;
            eprintln!("{bounds}");
        }
    }
    Ok(())
}

#[derive(Clone, Debug)]
pub struct CheckOptions {
    pub frame_path: PathBuf,
    pub dual_path: Option<PathBuf>,
    pub theorem: String,
    pub lambda_grid: Option<Vec<f64>>,
    pub subset_mode: Option<String>,
    pub tol_eq: Option<f64>,
    pub tol_ineq: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub vectors: usize,
    pub dual_scale: f64,
    pub threads: Option<usize>,
}

/// Sweeps one theorem over a frame file. The frame is evaluated as
/// given; checks with Parseval or duality preconditions fail (exit 2)
/// when the file does not satisfy them. Returns whether every row
/// passed.
pub fn run_check(opts: &CheckOptions) -> CliResult<bool> {
    let theorem: Theorem = opts.theorem.parse().map_err(CliError::Frame)?;
    let format = match &opts.format {
        Some(text) => text.parse::<OutputFormat>().map_err(CliError::Frame)?,
        None => OutputFormat::default(),
    };
    let subset_mode = match &opts.subset_mode {
        Some(text) => text.parse::<SubsetMode>().map_err(CliError::Frame)?,
        None => SubsetMode::Auto,
    };
    let lambda_grid = parse_lambda_grid(&opts.lambda_grid)?.unwrap_or_else(default_lambda_grid);
    let tolerances = apply_tolerances(ToleranceConfig::default(), opts.tol_eq, opts.tol_ineq)?;
    if opts.vectors == 0 {
        return Err(CliError::Usage("--vectors must be at least 1".into()));
    }

    let any: AnyFrame = read_json(&opts.frame_path)?;
    let frame = any.to_hs();
    let seed = resolve_seed(opts.seed, None)?;

    let dual: Option<HSFrame> = if theorem.uses_dual() {
        Some(match &opts.dual_path {
            Some(path) => read_json::<AnyFrame>(path)?.to_hs(),
            None => make_alternate_dual(&frame, seed, opts.dual_scale)?
                .pair
                .dual()
                .clone(),
        })
    } else {
        if opts.dual_path.is_some() {
            return Err(CliError::Usage(format!(
                "--dual only applies to checks that take a dual frame, not {}",
                theorem.name()
            )));
        }
        None
    };

    let subsets = subset_mode.policy(frame.len()).enumerate(frame.len(), seed)?;
    let vectors = gen_test_vectors(frame.domain_dim(), opts.vectors, seed);
    let plan = SweepPlan {
        theorem,
        frame: &frame,
        dual: dual.as_ref(),
        subsets: &subsets,
        vectors: &vectors,
        lambda_grid: &lambda_grid,
        weights_seed: seed,
        tolerances,
        trial: 0,
    };
    let rows = in_pool(opts.threads, || run_theorem(&plan))??;

    match &opts.out {
        Some(path) => {
            let mut buf = Vec::new();
            write_rows(&mut buf, &rows, format)?;
            write_file(path, &String::from_utf8(buf).expect("rows are utf-8"))?;
        }
        None => {
            let stdout = io::stdout().lock();
            let mut w = BufWriter::new(stdout);
            write_rows(&mut w, &rows, format)?;
            w.flush()?;
        }
    }
    Ok(rows.iter().all(|r| r.report.pass))
}

#[derive(Clone, Debug, Default)]
pub struct SuiteOptions {
    pub config_path: PathBuf,
    pub trials: Option<usize>,
    pub theorems: Option<Vec<String>>,
    pub lambda_grid: Option<Vec<f64>>,
    pub subset_mode: Option<String>,
    pub tol_eq: Option<f64>,
    pub tol_ineq: Option<f64>,
    pub seed: Option<u64>,
    pub format: Option<String>,
    pub out: Option<PathBuf>,
    pub vectors: Option<usize>,
    pub threads: Option<usize>,
}

/// Runs the configured sweep. Rows go to `--out` (summary on stdout) or
/// to stdout (summary on stderr). Returns whether every theorem passed.
pub fn run_suite_cmd(opts: &SuiteOptions) -> CliResult<bool> {
    let mut config: SuiteConfig = read_json(&opts.config_path)?;
    if let Some(trials) = opts.trials {
        config.trials = trials;
    }
    if let Some(names) = &opts.theorems {
        config.theorems = names
            .iter()
            .map(|name| name.parse::<Theorem>())
            .collect::<hsframe_core::Result<_>>()?;
    }
    if let Some(grid) = parse_lambda_grid(&opts.lambda_grid)? {
        config.lambda_grid = grid;
    }
    if let Some(text) = &opts.subset_mode {
        config.subset_mode = text.parse().map_err(CliError::Frame)?;
    }
    config.tolerances = apply_tolerances(config.tolerances, opts.tol_eq, opts.tol_ineq)?;
    if let Some(vectors) = opts.vectors {
        config.vectors = vectors;
    }
    if let Some(text) = &opts.format {
        config.format = text.parse().map_err(CliError::Frame)?;
    }
    let master_seed = resolve_seed(opts.seed, config.seed)?;
    config.validate()?;

    let rows = in_pool(opts.threads, || run_suite(&config, master_seed))??;
    let summaries = summarize(&rows);

    match &opts.out {
        Some(path) => {
            let mut buf = Vec::new();
            write_rows(&mut buf, &rows, config.format)?;
            write_file(path, &String::from_utf8(buf).expect("rows are utf-8"))?;
            let stdout = io::stdout().lock();
            let mut w = BufWriter::new(stdout);
            write_summary(&mut w, &summaries)?;
            w.flush()?;
        }
        None => {
            let stdout = io::stdout().lock();
            let mut w = BufWriter::new(stdout);
            write_rows(&mut w, &rows, config.format)?;
            w.flush()?;
            let stderr = io::stderr().lock();
            let mut w = BufWriter::new(stderr);
            write_summary(&mut w, &summaries)?;
            w.flush()?;
        }
    }
    Ok(summaries.iter().all(|s| s.pass))
}
