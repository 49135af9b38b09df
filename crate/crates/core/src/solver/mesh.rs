use serde::{Deserialize, Serialize};

use crate::error::SolverError;

/// Uniform cell-centred Cartesian mesh with a ghost layer of width `ghost`
/// in every resolved direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mesh {
    dim: usize,
    nx: usize,
    ny: usize,
    x: (f64, f64),
    y: (f64, f64),
    dx: f64,
    dy: f64,
    ghost: usize,
}

impl Mesh {
    pub fn new_1d(nx: usize, x: (f64, f64), ghost: usize) -> Result<Self, SolverError> {
        check_axis(nx, x, "x")?;
        Ok(Self { dim: 1, nx, ny: 1, x, y: (0.0, 1.0), dx: (x.1 - x.0) / nx as f64, dy: 1.0, ghost })
    }

    pub fn new_2d(nx: usize, ny: usize, x: (f64, f64), y: (f64, f64), ghost: usize) -> Result<Self, SolverError> {
        check_axis(nx, x, "x")?;
        check_axis(ny, y, "y")?;
        Ok(Self { dim: 2, nx, ny, x, y, dx: (x.1 - x.0) / nx as f64, dy: (y.1 - y.0) / ny as f64, ghost })
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }
    #[inline]
    pub fn nx(&self) -> usize {
        self.nx
    }
    #[inline]
    pub fn ny(&self) -> usize {
        self.ny
    }
    #[inline]
    pub fn dx(&self) -> f64 {
        self.dx
    }
    /// Cell height; 1 for one-dimensional meshes.
    #[inline]
    pub fn dy(&self) -> f64 {
        self.dy
    }
    #[inline]
    pub fn ghost(&self) -> usize {
        self.ghost
    }
    pub fn x_bounds(&self) -> (f64, f64) {
        self.x
    }
    pub fn y_bounds(&self) -> (f64, f64) {
        self.y
    }

    /// Cell volume `Δx` or `Δx Δy`.
    #[inline]
    pub fn cell_volume(&self) -> f64 {
        if self.dim == 1 {
            self.dx
        } else {
            self.dx * self.dy
        }
    }

    /// Storage width of one row, ghosts included.
    #[inline]
    pub fn stride(&self) -> usize {
        self.nx + 2 * self.ghost
    }

    /// Number of stored rows, ghosts included.
    #[inline]
    pub fn rows(&self) -> usize {
        if self.dim == 1 {
            1
        } else {
            self.ny + 2 * self.ghost
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.stride() * self.rows()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Offset of the first interior row in storage.
    #[inline]
    pub fn row_offset(&self) -> usize {
        if self.dim == 1 {
            0
        } else {
            self.ghost
        }
    }

    /// Storage index of raw (ghost-inclusive) coordinates.
    #[inline]
    pub fn raw(&self, ix: usize, jy: usize) -> usize {
        jy * self.stride() + ix
    }

    /// Storage index of interior cell `(i, j)`, zero-based.
    #[inline]
    pub fn idx(&self, i: usize, j: usize) -> usize {
        self.raw(i + self.ghost, j + self.row_offset())
    }

    /// Centre of interior cell `i` (may be negative for ghosts).
    #[inline]
    pub fn xc(&self, i: isize) -> f64 {
        self.x.0 + (i as f64 + 0.5) * self.dx
    }

    #[inline]
    pub fn yc(&self, j: isize) -> f64 {
        if self.dim == 1 {
            0.0
        } else {
            self.y.0 + (j as f64 + 0.5) * self.dy
        }
    }

    /// Interior cell coordinates in storage order (row-major, `x` fastest).
    pub fn interior(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.ny).flat_map(move |j| (0..self.nx).map(move |i| (i, j)))
    }

    pub fn interior_len(&self) -> usize {
        self.nx * self.ny
    }
}

fn check_axis(n: usize, bounds: (f64, f64), name: &str) -> Result<(), SolverError> {
    if n == 0 {
        return Err(SolverError::Mesh(format!("{name}: cell count must be positive")));
    }
    if !(bounds.1 > bounds.0) || !bounds.0.is_finite() || !bounds.1.is_finite() {
        return Err(SolverError::Mesh(format!(
            "{name}: bounds ({}, {}) are not an increasing finite interval",
            bounds.0, bounds.1
        )));
    }
    Ok(())
}
