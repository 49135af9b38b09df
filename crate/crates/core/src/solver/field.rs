use crate::error::SolverError;
use crate::physics::{prim_to_cons, Eos, PrimState, Vec8};

use super::mesh::Mesh;

/// Conservative and primitive states over a mesh, ghosts included.
#[derive(Debug, Clone, PartialEq)]
pub struct Field {
    pub mesh: Mesh,
    pub cons: Vec<Vec8>,
    pub prim: Vec<PrimState>,
    pub time: f64,
}

impl Field {
    /// Samples `init(x, y)` at interior cell centres. Ghosts are left equal to
    /// the first interior state until boundaries are applied.
    pub fn from_fn<F>(mesh: Mesh, eos: &Eos, init: F) -> Result<Self, SolverError>
    where
        F: Fn(f64, f64) -> PrimState,
    {
        let n = mesh.len();
        let (x0, y0) = (mesh.xc(0), mesh.yc(0));
        let first = init(x0, y0);
        let fill =
            prim_to_cons(&first, eos).map_err(|source| SolverError::InitialState { x: x0, y: y0, source })?.to_vec8();
        let mut cons = vec![fill; n];
        let mut prim = vec![first; n];
        for (i, j) in mesh.interior() {
            let (x, y) = (mesh.xc(i as isize), mesh.yc(j as isize));
            let s = init(x, y);
            let u = prim_to_cons(&s, eos).map_err(|source| SolverError::InitialState { x, y, source })?;
            let idx = mesh.idx(i, j);
            prim[idx] = s;
            cons[idx] = u.to_vec8();
        }
        Ok(Self { mesh, cons, prim, time: 0.0 })
    }

    #[inline]
    pub fn prim_at(&self, i: usize, j: usize) -> &PrimState {
        &self.prim[self.mesh.idx(i, j)]
    }

    #[inline]
    pub fn cons_at(&self, i: usize, j: usize) -> &Vec8 {
        &self.cons[self.mesh.idx(i, j)]
    }

    /// Interior primitive states in row-major order.
    pub fn interior_prims(&self) -> Vec<PrimState> {
        self.mesh.interior().map(|(i, j)| *self.prim_at(i, j)).collect()
    }

    /// Interior conservative states in row-major order.
    pub fn interior_cons(&self) -> Vec<Vec8> {
        self.mesh.interior().map(|(i, j)| *self.cons_at(i, j)).collect()
    }
}
