//! `converge`: errors against the exact solution on a sequence of meshes.

use anyhow::{bail, Result};
use log::info;
use serde::{Deserialize, Serialize};

use rmhd_core::problems::ProblemSpec;
use rmhd_core::solver::{Field, SchemeConfig};

use crate::config::{RunConfig, Variable};
use crate::driver::advance_with_retries;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub l1: f64,
    pub l2: f64,
    /// Observed orders against the previous row.
    pub l1_order: Option<f64>,
    pub l2_order: Option<f64>,
    pub steps: usize,
    pub halvings: u32,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub problem: String,
    pub scheme: String,
    pub variable: Variable,
    pub time: f64,
    pub rows: Vec<ConvergenceRow>,
}

/// `ln(e_a / e_b) / ln(n_b / n_a)`, which is `log₂(e_N / e_{2N})` for doubling.
pub fn observed_order(n_a: usize, e_a: f64, n_b: usize, e_b: f64) -> f64 {
    (e_a / e_b).ln() / (n_b as f64 / n_a as f64).ln()
}

/// Domain-averaged `l¹` and `l²` norms of the pointwise error of `variable`
/// at cell centres.
pub fn field_errors(field: &Field, spec: &ProblemSpec, variable: Variable) -> Result<(f64, f64)> {
    let mesh = &field.mesh;
    let (mut l1, mut l2) = (0.0, 0.0);
    for (i, j) in mesh.interior() {
        let (x, y) = (mesh.xc(i as isize), mesh.yc(j as isize));
        let Some(exact) = spec.exact(x, y, field.time) else {
            bail!("{} has no exact solution", spec.id);
        };
        let e = variable.of(field.prim_at(i, j)) - variable.of(&exact);
        l1 += e.abs();
        l2 += e * e;
    }
    let n = mesh.interior_len() as f64;
    Ok((l1 / n, (l2 / n).sqrt()))
}

/// Solves `spec` to its final time with `scheme` on `N` (or `N × N`) cells
/// for each `N` in `resolutions`.
pub fn convergence_study(
    spec: &ProblemSpec,
    scheme: &SchemeConfig,
    resolutions: &[usize],
    variable: Variable,
    max_halvings: u32,
) -> Result<ConvergenceReport> {
    if !spec.has_exact() {
        bail!("{} has no exact solution", spec.id);
    }
    let scheme = scheme.clone().with_boundaries(spec.boundaries);
    let eos = spec.eos();
    let mut rows: Vec<ConvergenceRow> = Vec::new();
    for &n in resolutions {
        let mut field = spec.initial_field(spec.mesh(n, n, scheme.ghost_width())?)?;
        let stats = advance_with_retries(&mut field, spec.t_final, &scheme, &eos, max_halvings, |_, _| {})?;
        let (l1, l2) = field_errors(&field, spec, variable)?;
        let (l1_order, l2_order) = match rows.last() {
            Some(prev) => (Some(observed_order(prev.n, prev.l1, n, l1)), Some(observed_order(prev.n, prev.l2, n, l2))),
            None => (None, None),
        };
        info!("{} N = {n}: l1 {l1:.3e} l2 {l2:.3e}", scheme.label());
        rows.push(ConvergenceRow { n, l1, l2, l1_order, l2_order, steps: stats.steps, halvings: stats.halvings });
    }
    Ok(ConvergenceReport { problem: spec.id.to_string(), scheme: scheme.label(), variable, time: spec.t_final, rows })
}

/// Study over the configured resolutions; `[nx, ny]` entries use `nx`.
pub fn converge(cfg: &RunConfig) -> Result<ConvergenceReport> {
    let ns: Vec<usize> = cfg.resolutions.iter().map(|r| r.cells().0).collect();
    convergence_study(&cfg.problem_spec(), &cfg.scheme()?, &ns, cfg.error_variable, cfg.max_halvings)
}

impl ConvergenceReport {
    /// Plain-text table with one row per resolution.
    pub fn table(&self) -> String {
        let fmt_order = |o: Option<f64>| o.map_or_else(|| "-".to_string(), |o| format!("{o:.2}"));
        let mut s = format!(
            "# {} {} error in {} at t = {}\n# N l1 l1_order l2 l2_order\n",
            self.problem, self.scheme, self.variable, self.time
        );
        for r in &self.rows {
            s += &format!("{} {:.3e} {} {:.3e} {}\n", r.n, r.l1, fmt_order(r.l1_order), r.l2, fmt_order(r.l2_order));
        }
        s
    }
}
