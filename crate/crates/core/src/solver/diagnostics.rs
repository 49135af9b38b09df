use crate::error::SolverError;
use crate::physics::{entropy_density, entropy_vars_unchecked, source_vector, Eos};

use super::config::SchemeConfig;
use super::field::Field;
use super::kernel::EntropyFluxes;
use super::rhs::assemble;

/// Discrete total entropy `Σ ℰ(U_i) Δx (Δy)`.
pub fn total_entropy(field: &Field, eos: &Eos) -> f64 {
    let vol = field.mesh.cell_volume();
    field.mesh.interior().map(|(i, j)| entropy_density(field.prim_at(i, j), eos)).sum::<f64>() * vol
}

/// Semi-discrete entropy balance of one right-hand side evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyBudget {
    pub total_entropy: f64,
    /// `r_i = W_i·dU_i/dt + (Q̂_{i+½} - Q̂_{i-½})/Δx (+ y terms)`, interior
    /// cells in row-major order.
    pub residual: Vec<f64>,
    /// Roundoff scale of each residual: the sum of magnitudes of the terms
    /// entering it.
    pub scale: Vec<f64>,
    /// `Σ r_i Δx (Δy)`: entropy production rate.
    pub production: f64,
    /// `∮ Q̂·n`: net entropy flux out of the domain.
    pub boundary_flux: f64,
}

impl EntropyBudget {
    pub fn max_residual(&self) -> f64 {
        self.residual.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn max_abs_residual(&self) -> f64 {
        self.residual.iter().map(|r| r.abs()).fold(0.0, f64::max)
    }

    /// `max_i r_i / scale_i`
    pub fn max_scaled_residual(&self) -> f64 {
        self.residual
            .iter()
            .zip(&self.scale)
            .map(|(r, s)| if *s > 0.0 { r / s } else { *r })
            .fold(f64::NEG_INFINITY, f64::max)
    }

    /// `max_i |r_i| / scale_i`
    pub fn max_abs_scaled_residual(&self) -> f64 {
        self.residual
            .iter()
            .zip(&self.scale)
            .map(|(r, s)| if *s > 0.0 { r.abs() / s } else { r.abs() })
            .fold(0.0, f64::max)
    }
}

/// Evaluates the right-hand side together with the numerical entropy fluxes
/// of `config` and forms the per-cell entropy residual. `field` must have its
/// ghosts filled.
pub fn entropy_budget(field: &Field, config: &SchemeConfig, eos: &Eos) -> Result<EntropyBudget, SolverError> {
    let asm = assemble(field, config, eos, EntropyFluxes::All)?;
    let mesh = &field.mesh;
    let (dx, dy) = (mesh.dx(), mesh.dy());
    let mut residual = Vec::with_capacity(mesh.interior_len());
    let mut scale = Vec::with_capacity(mesh.interior_len());
    for (i, j) in mesh.interior() {
        let idx = mesh.idx(i, j);
        let w = entropy_vars_unchecked(&field.prim[idx], eos).w;
        let s = source_vector(&field.prim[idx]);
        let fx = &asm.x_lines[j];
        let mut r = w.dot(&asm.du[idx]) + (fx.q[i + 1] - fx.q[i]) / dx;
        let mut sc = 0.0;
        for c in 0..8 {
            sc += w[c].abs()
                * ((fx.f[i + 1][c].abs() + fx.f[i][c].abs()) + s[c].abs() * (fx.b[i + 1].abs() + fx.b[i].abs()))
                / dx;
        }
        sc += (fx.q_scale[i + 1] + fx.q_scale[i]) / dx;
        if mesh.dim() == 2 {
            let fy = &asm.y_lines[i];
            r += (fy.q[j + 1] - fy.q[j]) / dy;
            for c in 0..8 {
                sc += w[c].abs()
                    * ((fy.f[j + 1][c].abs() + fy.f[j][c].abs()) + s[c].abs() * (fy.b[j + 1].abs() + fy.b[j].abs()))
                    / dy;
            }
            sc += (fy.q_scale[j + 1] + fy.q_scale[j]) / dy;
        }
        residual.push(r);
        scale.push(sc);
    }
    let production = residual.iter().sum::<f64>() * mesh.cell_volume();
    Ok(EntropyBudget {
        total_entropy: total_entropy(field, eos),
        residual,
        scale,
        production,
        boundary_flux: asm.boundary_entropy_rate(field),
    })
}

/// Central-difference divergence of `B` over the interior.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceNorm {
    pub max: f64,
    /// `Σ |∇·B| Δx Δy`
    pub l1: f64,
}

/// Discrete `∇·B` with second-order central differences; `field` must have
/// its ghosts filled.
pub fn divergence_norm(field: &Field) -> DivergenceNorm {
    let mesh = &field.mesh;
    let (dx, dy) = (mesh.dx(), mesh.dy());
    let stride = mesh.stride() as isize;
    let mut max: f64 = 0.0;
    let mut l1 = 0.0;
    for (i, j) in mesh.interior() {
        let idx = mesh.idx(i, j) as isize;
        let bx = |o: isize| field.prim[(idx + o) as usize].b[0];
        let by = |o: isize| field.prim[(idx + o) as usize].b[1];
        let mut div = (bx(1) - bx(-1)) / (2.0 * dx);
        if mesh.dim() == 2 {
            div += (by(stride) - by(-stride)) / (2.0 * dy);
        }
        max = max.max(div.abs());
        l1 += div.abs();
    }
    DivergenceNorm { max, l1: l1 * mesh.cell_volume() }
}
