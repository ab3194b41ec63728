//! Command-line harness over `hsframe-core`: generate frames from JSON
//! recipes, sweep identity checks over index subsets, and aggregate the
//! results. The binary is `hsframe`; see the crate README for the file
//! formats.

pub mod commands;
pub mod config;
pub mod output;
pub mod runner;

pub use commands::{CheckOptions, CliError, CliResult, GenOptions, SuiteOptions};
pub use config::{resolve_seed, OutputFormat, SubsetMode, SuiteConfig, SEED_ENV};
pub use output::CSV_HEADER;
pub use runner::{run_suite, run_theorem, summarize, SweepPlan, SweepRow, TheoremSummary};
