use rayon::prelude::*;

use crate::ecflux::combination_coeffs;
use crate::error::SolverError;
use crate::physics::{source_vector, Direction, Eos, PrimState, Vec8};

use super::config::SchemeConfig;
use super::field::Field;
use super::kernel::{EntropyFluxes, LineFluxes, LineScheme, LineScratch};

/// Interface data of every grid line together with the assembled
/// time derivative.
pub(crate) struct Assembly {
    /// `dU/dt` over the full storage (ghost entries are zero).
    pub du: Vec<Vec8>,
    /// One entry per interior row: the `nx + 1` interfaces in `x`.
    pub x_lines: Vec<LineFluxes>,
    /// One entry per interior column: the `ny + 1` interfaces in `y`.
    pub y_lines: Vec<LineFluxes>,
}

impl Assembly {
    /// Net rate at which entropy leaves through the domain boundary,
    /// `∮ Q̂·n`. Only meaningful when the ends were requested.
    pub fn boundary_entropy_rate(&self, field: &Field) -> f64 {
        let mesh = &field.mesh;
        let x: f64 = self.x_lines.iter().map(|l| l.q[mesh.nx()] - l.q[0]).sum();
        if mesh.dim() == 1 {
            x
        } else {
            let y: f64 = self.y_lines.iter().map(|l| l.q[mesh.ny()] - l.q[0]).sum();
            x * mesh.dy() + y * mesh.dx()
        }
    }
}

fn line_error(field: &Field, dir: Direction, p: usize, line: usize, source: crate::error::PhysicsError) -> SolverError {
    // `p` is the storage position of the left point; report the interior index of
    // the cell to the right of the interface.
    let g = field.mesh.ghost();
    let cell = (p + 1).saturating_sub(g);
    let (i, j) = match dir {
        Direction::X => (cell, line),
        _ => (line, cell),
    };
    SolverError::Dissipation { i, j, axis: dir.axis(), source }
}

pub(crate) fn assemble(
    field: &Field,
    config: &SchemeConfig,
    eos: &Eos,
    entropy: EntropyFluxes,
) -> Result<Assembly, SolverError> {
    config.validate()?;
    let mesh = &field.mesh;
    if mesh.ghost() < config.stencil_half_width() {
        return Err(SolverError::Mesh(format!(
            "ghost width {} is too small for {} (needs {})",
            mesh.ghost(),
            config.label(),
            config.stencil_half_width()
        )));
    }
    let coeffs = combination_coeffs(config.k)?;
    let (g, nx, ny, stride) = (mesh.ghost(), mesh.nx(), mesh.ny(), mesh.stride());
    let row0 = mesh.row_offset();

    let scheme_x = LineScheme {
        eos,
        alpha: coeffs.alpha(),
        mode: config.dissipation,
        wave: config.wave_speed,
        matrix: config.interface_matrix,
        dir: Direction::X,
        entropy,
    };
    let x_lines: Vec<LineFluxes> = (0..ny)
        .into_par_iter()
        .map_init(LineScratch::default, |scratch, j| {
            let start = (row0 + j) * stride;
            let line = &field.prim[start..start + stride];
            let mut out = LineFluxes::default();
            scheme_x
                .run(line, g - 1, g + nx, scratch, &mut out)
                .map_err(|(p, e)| line_error(field, Direction::X, p, j, e))?;
            Ok(out)
        })
        .collect::<Result<_, SolverError>>()?;

    let y_lines: Vec<LineFluxes> = if mesh.dim() == 2 {
        let scheme_y = LineScheme { dir: Direction::Y, ..scheme_x };
        let rows = mesh.rows();
        (0..nx)
            .into_par_iter()
            .map_init(
                || (LineScratch::default(), Vec::<PrimState>::new()),
                |(scratch, col), i| {
                    col.clear();
                    col.extend((0..rows).map(|jy| field.prim[mesh.raw(i + g, jy)]));
                    let mut out = LineFluxes::default();
                    scheme_y
                        .run(col, g - 1, g + ny, scratch, &mut out)
                        .map_err(|(p, e)| line_error(field, Direction::Y, p, i, e))?;
                    Ok(out)
                },
            )
            .collect::<Result<_, SolverError>>()?
    } else {
        Vec::new()
    };

    let mut du = vec![Vec8::zeros(); mesh.len()];
    let (dx, dy) = (mesh.dx(), mesh.dy());
    for j in 0..ny {
        let fx = &x_lines[j];
        for i in 0..nx {
            let idx = mesh.idx(i, j);
            let mut d = -(fx.f[i + 1] - fx.f[i]) / dx;
            let mut coef = (fx.b[i + 1] - fx.b[i]) / dx;
            if mesh.dim() == 2 {
                let fy = &y_lines[i];
                d -= (fy.f[j + 1] - fy.f[j]) / dy;
                coef += (fy.b[j + 1] - fy.b[j]) / dy;
            }
            d -= source_vector(&field.prim[idx]) * coef;
            du[idx] = d;
        }
    }
    Ok(Assembly { du, x_lines, y_lines })
}

/// Semi-discrete time derivative on a one-dimensional field with filled
/// ghosts, over the full storage (ghost entries are zero).
pub fn rhs_1d(field: &Field, config: &SchemeConfig, eos: &Eos) -> Result<Vec<Vec8>, SolverError> {
    if field.mesh.dim() != 1 {
        return Err(SolverError::Mesh("rhs_1d needs a one-dimensional mesh".into()));
    }
    Ok(assemble(field, config, eos, EntropyFluxes::None)?.du)
}

/// Semi-discrete time derivative on a two-dimensional field with filled
/// ghosts, over the full storage (ghost entries are zero).
pub fn rhs_2d(field: &Field, config: &SchemeConfig, eos: &Eos) -> Result<Vec<Vec8>, SolverError> {
    if field.mesh.dim() != 2 {
        return Err(SolverError::Mesh("rhs_2d needs a two-dimensional mesh".into()));
    }
    Ok(assemble(field, config, eos, EntropyFluxes::None)?.du)
}

/// Dimension-dispatching form of [`rhs_1d`] / [`rhs_2d`].
pub fn rhs(field: &Field, config: &SchemeConfig, eos: &Eos) -> Result<Vec<Vec8>, SolverError> {
    Ok(assemble(field, config, eos, EntropyFluxes::None)?.du)
}
