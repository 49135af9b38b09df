//! Declarative run configuration. The JSON schema lives in
//! `schema/run_config.schema.json`.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use rmhd_core::problems::{ProblemId, ProblemSpec};
use rmhd_core::solver::{Boundaries, SchemeConfig};
use rmhd_core::PrimState;

/// Largest number of times a failed step is retried with half the time step.
pub const DEFAULT_MAX_HALVINGS: u32 = 5;

/// A scheme given either by preset name (`"es5"`) or in full.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
#[allow(clippy::large_enum_variant)]
pub enum SchemeSpec {
    Preset(String),
    Full(SchemeConfig),
}

impl SchemeSpec {
    pub fn resolve(&self) -> Result<SchemeConfig> {
        let cfg = match self {
            SchemeSpec::Preset(name) => SchemeConfig::preset(name)?,
            SchemeSpec::Full(cfg) => cfg.clone(),
        };
        Ok(cfg)
    }
}

/// Mesh size: a single number for `N` (or `N × N` in 2D), or `[nx, ny]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Resolution {
    Square(usize),
    Grid([usize; 2]),
}

impl Resolution {
    pub fn cells(self) -> (usize, usize) {
        match self {
            Resolution::Square(n) => (n, n),
            Resolution::Grid([nx, ny]) => (nx, ny),
        }
    }
}

/// When field snapshots are written, in addition to the initial state, the
/// problem's snapshot times and the final state.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cadence {
    #[serde(default)]
    pub every_steps: Option<usize>,
    #[serde(default)]
    pub every_time: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Diagnostics {
    /// Total entropy after every step.
    #[serde(default = "yes")]
    pub entropy: bool,
    /// Maximum of the discrete `∇·B` after every step (2D only).
    #[serde(default = "yes")]
    pub divergence: bool,
    /// Per-cell entropy residual at every snapshot.
    #[serde(default)]
    pub entropy_budget: bool,
}

fn yes() -> bool {
    true
}

impl Default for Diagnostics {
    fn default() -> Self {
        Self { entropy: true, divergence: true, entropy_budget: false }
    }
}

/// Variable whose error is measured in convergence studies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Variable {
    Rho,
    V1,
    V2,
    V3,
    B1,
    B2,
    B3,
    P,
}

impl Variable {
    pub const ALL: [Variable; 8] = [
        Variable::Rho,
        Variable::V1,
        Variable::V2,
        Variable::V3,
        Variable::B1,
        Variable::B2,
        Variable::B3,
        Variable::P,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variable::Rho => "rho",
            Variable::V1 => "v1",
            Variable::V2 => "v2",
            Variable::V3 => "v3",
            Variable::B1 => "b1",
            Variable::B2 => "b2",
            Variable::B3 => "b3",
            Variable::P => "p",
        }
    }

    pub fn of(self, s: &PrimState) -> f64 {
        match self {
            Variable::Rho => s.rho,
            Variable::V1 => s.v[0],
            Variable::V2 => s.v[1],
            Variable::V3 => s.v[2],
            Variable::B1 => s.b[0],
            Variable::B2 => s.b[1],
            Variable::B3 => s.b[2],
            Variable::P => s.p,
        }
    }
}

impl fmt::Display for Variable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variable {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Variable::ALL.iter().copied().find(|v| v.name() == s).ok_or_else(|| format!("unknown variable '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub problem: ProblemId,
    pub resolutions: Vec<Resolution>,
    pub scheme: SchemeSpec,
    /// Overrides the problem's final time.
    #[serde(default)]
    pub t_final: Option<f64>,
    /// Overrides the problem's adiabatic index.
    #[serde(default)]
    pub gamma: Option<f64>,
    /// Overrides the problem's boundary conditions.
    #[serde(default)]
    pub boundaries: Option<Boundaries>,
    #[serde(default = "default_output")]
    pub output: PathBuf,
    #[serde(default)]
    pub cadence: Cadence,
    #[serde(default)]
    pub diagnostics: Diagnostics,
    /// Also write the row through the middle of 2D snapshots as CSV.
    #[serde(default)]
    pub csv_slices: bool,
    #[serde(default = "default_max_halvings")]
    pub max_halvings: u32,
    /// Error variable for `converge`.
    #[serde(default = "default_variable")]
    pub error_variable: Variable,
}

fn default_output() -> PathBuf {
    PathBuf::from("runs")
}

fn default_max_halvings() -> u32 {
    DEFAULT_MAX_HALVINGS
}

fn default_variable() -> Variable {
    Variable::V2
}

impl RunConfig {
    pub fn new(problem: ProblemId, resolutions: Vec<Resolution>, scheme: SchemeSpec) -> Self {
        Self {
            problem,
            resolutions,
            scheme,
            t_final: None,
            gamma: None,
            boundaries: None,
            output: default_output(),
            cadence: Cadence::default(),
            diagnostics: Diagnostics::default(),
            csv_slices: false,
            max_halvings: DEFAULT_MAX_HALVINGS,
            error_variable: default_variable(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: RunConfig = serde_json::from_str(text).context("parsing run configuration")?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.resolutions.is_empty() {
            bail!("at least one resolution is required");
        }
        if self.resolutions.iter().any(|r| {
            let (nx, ny) = r.cells();
            nx == 0 || ny == 0
        }) {
            bail!("resolutions must be positive");
        }
        if let Some(t) = self.t_final {
            if !(t > 0.0 && t.is_finite()) {
                bail!("t_final must be positive, got {t}");
            }
        }
        if let Some(g) = self.gamma {
            if !(g > 1.0 && g.is_finite()) {
                bail!("gamma must exceed 1, got {g}");
            }
        }
        if self.cadence.every_steps == Some(0) {
            bail!("cadence.every_steps must be positive");
        }
        if let Some(dt) = self.cadence.every_time {
            if !(dt > 0.0 && dt.is_finite()) {
                bail!("cadence.every_time must be positive, got {dt}");
            }
        }
        self.scheme()?;
        Ok(())
    }

    /// Problem with the configured overrides applied.
    pub fn problem_spec(&self) -> ProblemSpec {
        let mut spec = self.problem.spec();
        if let Some(t) = self.t_final {
            spec.t_final = t;
        }
        if let Some(g) = self.gamma {
            spec.gamma = g;
        }
        if let Some(b) = self.boundaries {
            spec.boundaries = b;
        }
        spec
    }

    /// Scheme with the problem's boundary conditions.
    pub fn scheme(&self) -> Result<SchemeConfig> {
        let cfg = self.scheme.resolve()?.with_boundaries(self.problem_spec().boundaries);
        cfg.validate().context("invalid scheme")?;
        Ok(cfg)
    }

    /// The configuration of a single-resolution run with everything resolved,
    /// as echoed into run manifests.
    pub fn resolved_for(&self, resolution: Resolution) -> Result<Self> {
        let spec = self.problem_spec();
        Ok(Self {
            resolutions: vec![resolution],
            scheme: SchemeSpec::Full(self.scheme()?),
            t_final: Some(spec.t_final),
            gamma: Some(spec.gamma),
            boundaries: Some(spec.boundaries),
            ..self.clone()
        })
    }
}
