//! `run`: solve a configured problem and write its artifacts.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use log::info;
use serde::{Deserialize, Serialize};

use rmhd_core::solver::{apply_boundary, divergence_norm, entropy_budget, total_entropy, Field};
use rmhd_core::SolverError;

use crate::config::{Resolution, RunConfig};
use crate::driver::advance_with_retries;
use crate::output::{write_snapshot, Trace};

pub const MANIFEST: &str = "manifest.json";
pub const ENTROPY_TRACE: &str = "entropy.txt";
pub const OUTFLOW_TRACE: &str = "entropy_outflow.txt";
pub const DIVERGENCE_TRACE: &str = "divergence.txt";
pub const BUDGET_TRACE: &str = "entropy_residual.txt";
pub const FAILURE: &str = "failure.json";

/// Record of one run, written as `manifest.json`. Its `config` re-executes
/// the run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub config: RunConfig,
    pub scheme: String,
    pub cells: (usize, usize),
    pub version: String,
    pub core_version: String,
    pub threads: usize,
    pub status: String,
    pub final_time: f64,
    pub steps: usize,
    pub halvings: u32,
    pub wall_time_s: f64,
    pub snapshots: Vec<String>,
}

/// Diagnostics written when a run aborts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub error: String,
    pub time: f64,
    pub steps: usize,
    pub last_snapshot: Vec<String>,
}

/// Directory name of a single-resolution run, e.g. `blast_ES5_100x100`.
pub fn run_dir_name(cfg: &RunConfig, resolution: Resolution) -> Result<String> {
    let (nx, ny) = resolution.cells();
    let label = cfg.scheme()?.label();
    Ok(if cfg.problem.spec().dim == 1 {
        format!("{}_{label}_{nx}", cfg.problem)
    } else {
        format!("{}_{label}_{nx}x{ny}", cfg.problem)
    })
}

/// Output times from the cadence and the problem, strictly inside `(0, t_end)`.
fn output_times(cfg: &RunConfig, t_end: f64) -> Vec<f64> {
    let mut times: Vec<f64> = cfg.problem_spec().snapshot_times.into_iter().filter(|t| *t < t_end).collect();
    if let Some(dt) = cfg.cadence.every_time {
        let mut k = 1;
        while (k as f64) * dt < t_end * (1.0 - 1e-12) {
            times.push(k as f64 * dt);
            k += 1;
        }
    }
    times.retain(|t| *t > 0.0);
    times.sort_by(f64::total_cmp);
    times.dedup();
    times
}

struct Outputs {
    dir: PathBuf,
    csv_slices: bool,
    written: Vec<String>,
    count: usize,
}

impl Outputs {
    fn snapshot(&mut self, field: &Field) -> Result<Vec<String>> {
        let stem = format!("field_{:05}", self.count);
        self.count += 1;
        let paths = write_snapshot(&self.dir, &stem, field, self.csv_slices)?;
        let names: Vec<String> =
            paths.iter().filter_map(|p| p.file_name()).map(|n| n.to_string_lossy().into_owned()).collect();
        self.written.extend(names.iter().cloned());
        Ok(names)
    }
}

/// Runs one resolution of `cfg` in `dir`. On a solver abort the failure
/// diagnostics and the last accepted state are written before the error is
/// returned.
pub fn run_single(cfg: &RunConfig, resolution: Resolution, dir: &Path) -> Result<Manifest> {
    let started = Instant::now();
    std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let resolved = cfg.resolved_for(resolution)?;
    let spec = resolved.problem_spec();
    let scheme = resolved.scheme()?;
    let eos = spec.eos();
    let (nx, ny) = resolution.cells();
    let mut field = spec.initial_field(spec.mesh(nx, ny, scheme.ghost_width())?)?;
    apply_boundary(&mut field, &scheme, &eos);
    info!("{}: {} on {nx}x{ny} to t = {}", spec.id, scheme.label(), spec.t_final);

    let diag = cfg.diagnostics;
    let two_d = spec.dim == 2;
    let mut entropy =
        if diag.entropy { Some(Trace::create(&dir.join(ENTROPY_TRACE), ["time", "entropy"])?) } else { None };
    let mut outflow =
        if diag.entropy { Some(Trace::create(&dir.join(OUTFLOW_TRACE), ["time", "outflow"])?) } else { None };
    let mut divergence = if diag.divergence && two_d {
        Some(Trace::create(&dir.join(DIVERGENCE_TRACE), ["time", "max_div_b"])?)
    } else {
        None
    };
    let mut budget = if diag.entropy_budget {
        Some(Trace::create(&dir.join(BUDGET_TRACE), ["time", "max_scaled_residual"])?)
    } else {
        None
    };
    let mut outputs = Outputs { dir: dir.to_path_buf(), csv_slices: cfg.csv_slices, written: Vec::new(), count: 0 };

    let mut cumulative_outflow = 0.0;
    let mut record = |field: &Field, outflow_now: f64| -> Result<()> {
        if let Some(t) = entropy.as_mut() {
            t.push(field.time, total_entropy(field, &eos))?;
        }
        if let Some(t) = outflow.as_mut() {
            t.push(field.time, outflow_now)?;
        }
        if let Some(t) = divergence.as_mut() {
            t.push(field.time, divergence_norm(field).max)?;
        }
        Ok(())
    };
    let mut budget_at = |field: &Field| -> Result<()> {
        if let Some(t) = budget.as_mut() {
            t.push(field.time, entropy_budget(field, &scheme, &eos)?.max_scaled_residual())?;
        }
        Ok(())
    };

    record(&field, 0.0)?;
    budget_at(&field)?;
    outputs.snapshot(&field)?;

    let every_steps = cfg.cadence.every_steps;
    let mut steps = 0;
    let mut halvings = 0;
    let mut error: Option<SolverError> = None;
    let mut io_error: Option<anyhow::Error> = None;
    let mut targets = output_times(&resolved, spec.t_final);
    targets.push(spec.t_final);
    for target in targets {
        let result = advance_with_retries(&mut field, target, &scheme, &eos, cfg.max_halvings, |f, rec| {
            if io_error.is_some() {
                return;
            }
            steps += 1;
            cumulative_outflow += rec.report.boundary_entropy_outflow;
            let mut step_io = || -> Result<()> {
                record(f, cumulative_outflow)?;
                if every_steps.is_some_and(|n| steps % n == 0) && f.time < target {
                    outputs.snapshot(f)?;
                }
                Ok(())
            };
            if let Err(e) = step_io() {
                io_error = Some(e);
            }
        });
        if let Some(e) = io_error.take() {
            return Err(e);
        }
        match result {
            Ok(stats) => halvings += stats.halvings,
            Err(e) => {
                // `field` still holds the last accepted state
                error = Some(e);
                break;
            }
        }
        budget_at(&field)?;
        outputs.snapshot(&field)?;
    }
    for t in [entropy, outflow, divergence, budget].into_iter().flatten() {
        t.finish()?;
    }

    if let Some(e) = error {
        let last_snapshot = outputs.snapshot(&field)?;
        let failure = Failure { error: e.to_string(), time: field.time, steps, last_snapshot };
        std::fs::write(dir.join(FAILURE), serde_json::to_string_pretty(&failure)?)?;
        return Err(anyhow::Error::new(e).context(format!(
            "{} aborted at t = {}; diagnostics in {}",
            spec.id,
            field.time,
            dir.display()
        )));
    }

    let manifest = Manifest {
        scheme: scheme.label(),
        config: resolved,
        cells: (nx, if two_d { ny } else { 1 }),
        version: env!("CARGO_PKG_VERSION").to_string(),
        core_version: rmhd_core::VERSION.to_string(),
        threads: rayon::current_num_threads(),
        status: "completed".into(),
        final_time: field.time,
        steps,
        halvings,
        wall_time_s: started.elapsed().as_secs_f64(),
        snapshots: outputs.written,
    };
    std::fs::write(dir.join(MANIFEST), serde_json::to_string_pretty(&manifest)?)?;
    info!("{}: {} steps, {} halvings, {:.1} s", spec.id, manifest.steps, manifest.halvings, manifest.wall_time_s);
    Ok(manifest)
}

/// Runs every configured resolution, each in its own directory under
/// `cfg.output`.
pub fn run(cfg: &RunConfig) -> Result<Vec<Manifest>> {
    cfg.resolutions.iter().map(|&r| run_single(cfg, r, &cfg.output.join(run_dir_name(cfg, r)?))).collect()
}
