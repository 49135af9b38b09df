//! Time stepping with step rejection: a step whose recovery or dissipation
//! fails is retried with half the time step, a bounded number of times.

use log::warn;

use rmhd_core::solver::{apply_boundary, cfl_dt, rk4_step, Field, SchemeConfig, StepReport};
use rmhd_core::{Eos, SolverError};

/// One accepted step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRecord {
    pub report: StepReport,
    /// Rejected attempts before this step was accepted.
    pub halvings: u32,
}

/// Counters over an [`advance_with_retries`] call.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepStats {
    pub steps: usize,
    pub halvings: u32,
}

/// Takes one step of size `dt`, halving it after each failure up to
/// `max_halvings` times. The last error is returned if every attempt fails.
pub fn step_with_retries(
    field: &Field,
    dt: f64,
    config: &SchemeConfig,
    eos: &Eos,
    max_halvings: u32,
) -> Result<(Field, StepRecord), SolverError> {
    let mut dt = dt;
    let mut halvings = 0;
    loop {
        match rk4_step(field, dt, config, eos) {
            Ok((next, report)) => return Ok((next, StepRecord { report, halvings })),
            Err(e) if halvings < max_halvings && !matches!(e, SolverError::InvalidTimeStep(_)) => {
                warn!("step at t = {} with dt = {dt:e} rejected: {e}; halving", field.time);
                dt *= 0.5;
                halvings += 1;
            }
            Err(e) => return Err(e),
        }
    }
}

/// Advances `field` to `t_end` like [`rmhd_core::solver::advance`], retrying
/// failed steps with [`step_with_retries`]. A shortened step is followed by
/// a regular CFL step.
pub fn advance_with_retries<F>(
    field: &mut Field,
    t_end: f64,
    config: &SchemeConfig,
    eos: &Eos,
    max_halvings: u32,
    mut observe: F,
) -> Result<StepStats, SolverError>
where
    F: FnMut(&Field, &StepRecord),
{
    config.validate()?;
    apply_boundary(field, config, eos);
    let mut stats = StepStats::default();
    let tol = 1e-12 * t_end.abs().max(1.0);
    while field.time < t_end - tol {
        let dt = cfl_dt(field, config, eos).min(t_end - field.time);
        let (next, record) = step_with_retries(field, dt, config, eos, max_halvings)?;
        *field = next;
        if (t_end - field.time).abs() <= tol {
            field.time = t_end;
        }
        stats.steps += 1;
        stats.halvings += record.halvings;
        observe(field, &record);
    }
    Ok(stats)
}
