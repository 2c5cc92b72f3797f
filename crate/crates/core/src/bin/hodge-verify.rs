//! Runs verification suites and writes a JSON report.
//!
//! Exit status: 0 when every asserting check passes, 1 when some check
//! fails, 2 for configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use hodge_core::runner::{run, RunConfig};
use hodge_core::Error;

#[derive(Debug, Parser)]
#[command(name = "hodge-verify", version, about = "Verify Chern/Segre form identities and symmetric-map theorems")]
struct Cli {
    /// JSON config file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Suite to run (repeatable).
    #[arg(long = "suite")]
    suites: Vec<String>,
    /// Genus to run at (repeatable).
    #[arg(long = "genus")]
    genus: Vec<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Monte Carlo sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Tolerance override, `name=value` (repeatable).
    #[arg(long = "tol", value_parser = parse_tol)]
    tols: Vec<(String, f64)>,
    /// Report path; stdout when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Run suites concurrently.
    #[arg(long)]
    parallel: bool,
    /// Index `i` for positivity-vanishing and symmap-thm25.
    #[arg(long)]
    index: Option<usize>,
    /// Trial count for every suite.
    #[arg(long)]
    trials: Option<usize>,
}

fn parse_tol(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected name=value, got `{s}`"))?;
    let value: f64 = value.parse().map_err(|e| format!("tolerance `{name}`: {e}"))?;
    Ok((name.to_string(), value))
}

fn resolve(cli: Cli) -> Result<RunConfig, Error> {
    let mut cfg = match &cli.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Error::ConfigInvalid {
                field: "config".into(),
                message: format!("{}: {e}", path.display()),
            })?;
            RunConfig::from_json_str(&text)?
        }
        None => RunConfig::default(),
    };
    if !cli.suites.is_empty() {
        cfg.suites = cli.suites;
    }
    if !cli.genus.is_empty() {
        cfg.genus_list = cli.genus;
    }
    if cli.seed.is_some() {
        cfg.seed = cli.seed;
    }
    if let Some(n) = cli.samples {
        cfg.n_samples = n;
    }
    for (name, value) in cli.tols {
        cfg.tolerances.insert(name, value);
    }
    if let Some(out) = cli.out {
        cfg.output_path = Some(out.display().to_string());
    }
    if cli.parallel {
        cfg.parallel = true;
    }
    if cli.index.is_some() {
        cfg.index = cli.index;
    }
    if cli.trials.is_some() {
        cfg.trials = cli.trials;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let cfg = match resolve(cli) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    let report = match run(&cfg) {
        Ok(r) => r,
        Err(e @ (Error::ConfigInvalid { .. } | Error::SuiteUnknown(_))) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    let json = report.to_json();
    match &cfg.output_path {
        Some(path) => {
            if let Err(e) = std::fs::write(path, json + "\n") {
                eprintln!("error: cannot write {path}: {e}");
                return ExitCode::from(2);
            }
        }
        None => println!("{json}"),
    }
    for suite in &report.suites {
        let failures = suite.failures().count();
        eprintln!(
            "{:<22} {:>4} checks  {:>3} failed  {:>7} ms",
            suite.suite,
            suite.checks.len(),
            failures,
            suite.wall_time_ms
        );
        for f in suite.failures() {
            eprintln!("    FAIL {}: measured {:e}, tolerance {:e}", f.name, f.measured, f.tolerance);
        }
    }
    if report.passed {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
