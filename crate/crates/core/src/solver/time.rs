use rayon::prelude::*;

use crate::error::SolverError;
use crate::physics::{cons_to_prim_with_guess, max_signal_speed, ConsState, Direction, Eos, PrimState, Vec8};

use super::boundary::apply_boundary;
use super::config::{Boundary, SchemeConfig};
use super::field::Field;
use super::kernel::EntropyFluxes;
use super::rhs::assemble;

/// Stable time step: `CFL / (λ̂_x/Δx + λ̂_y/Δy)`, or the fixed law
/// `c Δx^q` (with `Δx` the smallest spacing) when one is configured.
pub fn cfl_dt(field: &Field, config: &SchemeConfig, eos: &Eos) -> f64 {
    let mesh = &field.mesh;
    if let Some(law) = config.fixed_dt {
        let h = if mesh.dim() == 1 { mesh.dx() } else { mesh.dx().min(mesh.dy()) };
        return law.c * h.powf(law.q);
    }
    let speed = |dir: Direction| {
        mesh.interior()
            .map(|(i, j)| max_signal_speed(field.prim_at(i, j), eos, dir, config.wave_speed))
            .fold(0.0, f64::max)
    };
    let mut rate = speed(Direction::X) / mesh.dx();
    if mesh.dim() == 2 {
        rate += speed(Direction::Y) / mesh.dy();
    }
    config.cfl / rate
}

/// Per-step information returned by [`rk4_step`].
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StepReport {
    pub dt: f64,
    /// Entropy carried out through the domain boundary during the step,
    /// `∫ ∮ Q̂·n dt` integrated with the Runge–Kutta weights.
    pub boundary_entropy_outflow: f64,
}

fn has_open_boundary(config: &SchemeConfig) -> bool {
    let b = &config.boundaries;
    [b.x_lo, b.x_hi, b.y_lo, b.y_hi].iter().any(|s| *s != Boundary::Periodic)
}

/// Recovers primitive states on the interior of `stage` from its conservative
/// data, seeding Newton's method with `guess`.
fn recover(stage: &mut Field, guess: &[PrimState], eos: &Eos) -> Result<(), SolverError> {
    let mesh = stage.mesh.clone();
    let stride = mesh.stride();
    let (g, nx) = (mesh.ghost(), mesh.nx());
    let row0 = mesh.row_offset();
    let time = stage.time;
    let cons = &stage.cons;
    stage.prim.par_chunks_mut(stride).enumerate().skip(row0).take(mesh.ny()).try_for_each(|(jy, row)| {
        for ix in g..g + nx {
            let idx = jy * stride + ix;
            let u = ConsState::from_vec8(&cons[idx]);
            let (p, _) = cons_to_prim_with_guess(&u, eos, Some(&guess[idx]))
                .map_err(|source| SolverError::Recovery { i: ix - g, j: jy - row0, time, source })?;
            row[ix] = p;
        }
        Ok(())
    })
}

fn axpy(base: &[Vec8], a: f64, k: &[Vec8], out: &mut [Vec8]) {
    out.par_iter_mut().zip(base.par_iter().zip(k.par_iter())).for_each(|(o, (b, d))| *o = b + d * a);
}

/// Classical four-stage Runge–Kutta step. `field` must have its ghosts filled;
/// the returned field has them filled as well.
pub fn rk4_step(field: &Field, dt: f64, config: &SchemeConfig, eos: &Eos) -> Result<(Field, StepReport), SolverError> {
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(SolverError::InvalidTimeStep(dt));
    }
    let track = if has_open_boundary(config) { EntropyFluxes::Ends } else { EntropyFluxes::None };
    let mut stage = field.clone();
    let mut accum = vec![Vec8::zeros(); field.cons.len()];
    let mut outflow = 0.0;
    let weights = [1.0, 2.0, 2.0, 1.0];
    let offsets = [0.5, 0.5, 1.0];
    for s in 0..4 {
        let current = if s == 0 { field } else { &stage };
        let asm = assemble(current, config, eos, track)?;
        if track != EntropyFluxes::None {
            outflow += weights[s] * asm.boundary_entropy_rate(current);
        }
        accum.par_iter_mut().zip(asm.du.par_iter()).for_each(|(a, d)| *a += d * weights[s]);
        if s < 3 {
            let mut next = Field {
                mesh: field.mesh.clone(),
                cons: std::mem::take(&mut stage.cons),
                prim: std::mem::take(&mut stage.prim),
                time: field.time + offsets[s] * dt,
            };
            axpy(&field.cons, offsets[s] * dt, &asm.du, &mut next.cons);
            recover(&mut next, &field.prim, eos)?;
            apply_boundary(&mut next, config, eos);
            stage = next;
        }
    }
    let mut out = stage;
    axpy(&field.cons, dt / 6.0, &accum, &mut out.cons);
    out.time = field.time + dt;
    recover(&mut out, &field.prim, eos)?;
    apply_boundary(&mut out, config, eos);
    Ok((out, StepReport { dt, boundary_entropy_outflow: outflow * dt / 6.0 }))
}

/// Advances `field` to `t_end` with [`cfl_dt`] steps, shortening the last step
/// to land on `t_end`. `observe` is called after every accepted step.
pub fn advance<F>(
    field: &mut Field,
    t_end: f64,
    config: &SchemeConfig,
    eos: &Eos,
    mut observe: F,
) -> Result<usize, SolverError>
where
    F: FnMut(&Field, &StepReport),
{
    config.validate()?;
    apply_boundary(field, config, eos);
    let mut steps = 0;
    let tol = 1e-12 * t_end.abs().max(1.0);
    while field.time < t_end - tol {
        let mut dt = cfl_dt(field, config, eos);
        if field.time + dt > t_end {
            dt = t_end - field.time;
        }
        let (next, report) = rk4_step(field, dt, config, eos)?;
        *field = next;
        if t_end - field.time <= tol {
            field.time = t_end;
        }
        steps += 1;
        observe(field, &report);
    }
    Ok(steps)
}
