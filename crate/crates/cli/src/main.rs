use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use log::error;

use rmhd_cli::{converge, entropy_trace_report, run, RunConfig};

/// Entropy stable schemes for relativistic MHD. Set RUST_LOG for verbosity.
#[derive(Parser)]
#[command(name = "rmhd", version)]
struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// Overrides the output directory of the configuration.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solves the configured problem at every resolution.
    Run { config: PathBuf },
    /// Measures errors against the exact solution and observed orders.
    Converge { config: PathBuf },
    /// Entropy monotonicity verdict for a run directory.
    Report { run_dir: PathBuf },
}

fn load(path: &Path, output: Option<PathBuf>) -> Result<RunConfig> {
    let mut cfg = RunConfig::load(path)?;
    if let Some(dir) = output {
        cfg.output = dir;
    }
    Ok(cfg)
}

/// Run directories below `dir`, or `dir` itself if it holds a trace.
fn run_dirs(dir: &Path) -> Result<Vec<PathBuf>> {
    if dir.join(run::ENTROPY_TRACE).exists() {
        return Ok(vec![dir.to_path_buf()]);
    }
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.join(run::ENTROPY_TRACE).exists())
        .collect();
    dirs.sort();
    if dirs.is_empty() {
        anyhow::bail!("no entropy trace found in {}", dir.display());
    }
    Ok(dirs)
}

fn execute(cli: Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global().context("configuring threads")?;
    }
    match cli.command {
        Command::Run { config } => {
            let cfg = load(&config, cli.output)?;
            for m in run(&cfg)? {
                println!(
                    "{} {} {}x{}: t = {} in {} steps ({} halvings), {:.1} s",
                    m.config.problem, m.scheme, m.cells.0, m.cells.1, m.final_time, m.steps, m.halvings, m.wall_time_s
                );
            }
        }
        Command::Converge { config } => {
            let cfg = load(&config, cli.output)?;
            let report = converge::converge(&cfg)?;
            std::fs::create_dir_all(&cfg.output)?;
            let stem = format!("convergence_{}_{}", report.problem, report.scheme);
            std::fs::write(cfg.output.join(format!("{stem}.json")), serde_json::to_string_pretty(&report)?)?;
            std::fs::write(cfg.output.join(format!("{stem}.txt")), report.table())?;
            print!("{}", report.table());
        }
        Command::Report { run_dir } => {
            for dir in run_dirs(&run_dir)? {
                let r = entropy_trace_report(&dir)?;
                println!(
                    "{}: {} samples, drift {:.3e}, max step increase {:.3e} (relative {:.3e}), {}",
                    dir.display(),
                    r.samples,
                    r.relative_drift,
                    r.max_step_increase,
                    r.relative_max_step_increase,
                    if r.monotone { "monotone" } else { "NOT monotone" }
                );
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            error!("{e:#}");
            ExitCode::FAILURE
        }
    }
}
