use crate::physics::{prim_to_cons_unchecked, Eos, PrimState, Vec8};

use super::config::{Boundary, SchemeConfig};
use super::field::Field;

#[derive(Clone, Copy)]
enum Side {
    Lo,
    Hi,
}

/// Fills the ghost layers of `field` from its interior. Rows are filled in
/// `x` first, then every column (ghost columns included) in `y`, so corner
/// ghosts are defined as well.
pub fn apply_boundary(field: &mut Field, config: &SchemeConfig, eos: &Eos) {
    let mesh = field.mesh.clone();
    let (g, nx, stride) = (mesh.ghost(), mesh.nx(), mesh.stride());
    let bc = &config.boundaries;
    let row0 = mesh.row_offset();
    let interior_rows = row0..row0 + mesh.ny();
    for jy in interior_rows {
        let base = jy * stride;
        fill_line(field, eos, base, 1, g, nx, bc.x_lo, Side::Lo);
        fill_line(field, eos, base, 1, g, nx, bc.x_hi, Side::Hi);
    }
    if mesh.dim() == 2 {
        for ix in 0..stride {
            fill_line(field, eos, ix, stride, g, mesh.ny(), bc.y_lo, Side::Lo);
            fill_line(field, eos, ix, stride, g, mesh.ny(), bc.y_hi, Side::Hi);
        }
    }
}

/// Fills `g` ghosts on one side of the line `base + step * m`, `m = 0..n+2g`.
#[allow(clippy::too_many_arguments)]
fn fill_line(field: &mut Field, eos: &Eos, base: usize, step: usize, g: usize, n: usize, bc: Boundary, side: Side) {
    let at = |m: usize| base + step * m;
    let fixed: Option<(PrimState, Vec8)> = match bc {
        Boundary::Inflow { state } => Some((state, prim_to_cons_unchecked(&state, eos).to_vec8())),
        _ => None,
    };
    for m in 0..g {
        let (dst, src) = match side {
            // ghost g-1-m
            Side::Lo => (
                at(g - 1 - m),
                match bc {
                    Boundary::Periodic => at(g + n - 1 - m),
                    _ => at(g),
                },
            ),
            Side::Hi => (
                at(g + n + m),
                match bc {
                    Boundary::Periodic => at(g + m),
                    _ => at(g + n - 1),
                },
            ),
        };
        match fixed {
            Some((p, u)) => {
                field.prim[dst] = p;
                field.cons[dst] = u;
            }
            None => {
                field.prim[dst] = field.prim[src];
                field.cons[dst] = field.cons[src];
            }
        }
    }
}
