//! Benchmark initial data: a smooth Alfvén wave with exact solution, three
//! Riemann problems, a cylindrical blast wave, the relativistic Orszag–Tang
//! vortex and a shock–cloud interaction.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{SchemeError, SolverError};
use crate::physics::{Eos, PrimState, Vec3};
use crate::solver::{Boundaries, Boundary, Field, Mesh};

type InitFn = Arc<dyn Fn(f64, f64) -> PrimState + Send + Sync>;
type ExactFn = Arc<dyn Fn(f64, f64, f64) -> PrimState + Send + Sync>;

/// Identifier used by run configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProblemId {
    Alfven,
    Riemann1,
    Riemann2,
    Riemann3,
    Blast,
    OrszagTang,
    ShockCloud,
}

impl ProblemId {
    pub const ALL: [ProblemId; 7] = [
        ProblemId::Alfven,
        ProblemId::Riemann1,
        ProblemId::Riemann2,
        ProblemId::Riemann3,
        ProblemId::Blast,
        ProblemId::OrszagTang,
        ProblemId::ShockCloud,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ProblemId::Alfven => "alfven",
            ProblemId::Riemann1 => "riemann1",
            ProblemId::Riemann2 => "riemann2",
            ProblemId::Riemann3 => "riemann3",
            ProblemId::Blast => "blast",
            ProblemId::OrszagTang => "orszag_tang",
            ProblemId::ShockCloud => "shock_cloud",
        }
    }

    pub fn spec(self) -> ProblemSpec {
        match self {
            ProblemId::Alfven => alfven_wave(),
            ProblemId::Riemann1 => riemann_problem(1).expect("valid index"),
            ProblemId::Riemann2 => riemann_problem(2).expect("valid index"),
            ProblemId::Riemann3 => riemann_problem(3).expect("valid index"),
            ProblemId::Blast => blast(),
            ProblemId::OrszagTang => orszag_tang(),
            ProblemId::ShockCloud => shock_cloud(),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ProblemId {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        ProblemId::ALL.iter().copied().find(|p| p.name() == s).ok_or_else(|| format!("unknown problem '{s}'"))
    }
}

/// A benchmark problem: domain, final time, equation of state, boundary
/// conditions and initial (and possibly exact) data.
#[derive(Clone)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub dim: usize,
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub t_final: f64,
    /// Additional output times of interest.
    pub snapshot_times: Vec<f64>,
    pub gamma: f64,
    pub boundaries: Boundaries,
    initial: InitFn,
    exact: Option<ExactFn>,
}

impl fmt::Debug for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemSpec")
            .field("id", &self.id)
            .field("dim", &self.dim)
            .field("x", &self.x)
            .field("y", &self.y)
            .field("t_final", &self.t_final)
            .field("gamma", &self.gamma)
            .field("has_exact", &self.exact.is_some())
            .finish()
    }
}

impl ProblemSpec {
    pub fn eos(&self) -> Eos {
        Eos::new(self.gamma).expect("problem adiabatic index exceeds 1")
    }

    pub fn initial(&self, x: f64, y: f64) -> PrimState {
        (self.initial)(x, y)
    }

    pub fn has_exact(&self) -> bool {
        self.exact.is_some()
    }

    pub fn exact(&self, x: f64, y: f64, t: f64) -> Option<PrimState> {
        self.exact.as_ref().map(|f| f(x, y, t))
    }

    /// Mesh over the problem domain; `ny` is ignored in 1D.
    pub fn mesh(&self, nx: usize, ny: usize, ghost: usize) -> Result<Mesh, SolverError> {
        if self.dim == 1 {
            Mesh::new_1d(nx, self.x, ghost)
        } else {
            Mesh::new_2d(nx, ny, self.x, self.y, ghost)
        }
    }

    /// Field sampled from the initial data at cell centres.
    pub fn initial_field(&self, mesh: Mesh) -> Result<Field, SolverError> {
        Field::from_fn(mesh, &self.eos(), |x, y| self.initial(x, y))
    }
}

fn state(a: [f64; 8]) -> PrimState {
    PrimState { rho: a[0], v: Vec3::new(a[1], a[2], a[3]), b: Vec3::new(a[4], a[5], a[6]), p: a[7] }
}

/// Phase speed factor `σ = sqrt(1 + ρhγ²)` of the Alfvén wave.
pub fn alfven_sigma(gamma_adiabatic: f64) -> f64 {
    let (rho, p, amp2) = (1.0, 0.01, 0.04);
    let h = 1.0 + gamma_adiabatic / (gamma_adiabatic - 1.0) * p / rho;
    (1.0 + rho * h / (1.0 - amp2)).sqrt()
}

/// Circularly polarized Alfvén wave travelling in `-x` on the periodic unit
/// interval.
pub fn alfven_wave() -> ProblemSpec {
    let gamma = 5.0 / 3.0;
    let sigma = alfven_sigma(gamma);
    let exact = move |x: f64, _y: f64, t: f64| {
        let phase = 2.0 * PI * (x + t / sigma);
        let (v2, v3) = (0.2 * phase.sin(), 0.2 * phase.cos());
        state([1.0, 0.0, v2, v3, 1.0, sigma * v2, sigma * v3, 0.01])
    };
    ProblemSpec {
        id: ProblemId::Alfven,
        dim: 1,
        x: (0.0, 1.0),
        y: (0.0, 1.0),
        t_final: 0.5,
        snapshot_times: Vec::new(),
        gamma,
        boundaries: Boundaries::periodic(),
        initial: Arc::new(move |x, y| exact(x, y, 0.0)),
        exact: Some(Arc::new(exact)),
    }
}

/// Left and right states of the one-dimensional Riemann problems.
pub fn riemann_states(index: usize) -> Option<(PrimState, PrimState)> {
    match index {
        1 => Some((
            state([1.08, 0.4, 0.3, 0.2, 2.0, 0.3, 0.3, 0.95]),
            state([1.0, -0.45, -0.2, 0.2, 2.0, -0.7, 0.5, 1.0]),
        )),
        2 => Some((state([1.0, 0.0, 0.0, 0.0, 5.0, 6.0, 6.0, 30.0]), state([1.0, 0.0, 0.0, 0.0, 5.0, 0.7, 0.7, 1.0]))),
        3 => Some((state([1.0, 0.0, 0.3, 0.4, 1.0, 6.0, 2.0, 5.0]), state([0.9, 0.0, 0.0, 0.0, 1.0, 5.0, 2.0, 5.3]))),
        _ => None,
    }
}

/// Riemann problem `index` in `{1, 2, 3}` with the discontinuity at `x = 0`.
pub fn riemann_problem(index: usize) -> Result<ProblemSpec, SchemeError> {
    let (l, r) = riemann_states(index)
        .ok_or_else(|| SchemeError::Config(format!("Riemann problem index must be 1, 2 or 3, got {index}")))?;
    let (id, x, t_final) = match index {
        1 => (ProblemId::Riemann1, (-0.5, 0.5), 0.55),
        2 => (ProblemId::Riemann2, (-0.5, 0.5), 0.4),
        _ => (ProblemId::Riemann3, (-2.0, 2.0), 1.5),
    };
    Ok(ProblemSpec {
        id,
        dim: 1,
        x,
        y: (0.0, 1.0),
        t_final,
        snapshot_times: Vec::new(),
        gamma: 5.0 / 3.0,
        boundaries: Boundaries::outflow(),
        initial: Arc::new(move |x, _| if x < 0.0 { l } else { r }),
        exact: None,
    })
}

/// Cylindrical blast wave in a weakly magnetized medium.
pub fn blast() -> ProblemSpec {
    let (r_in, r_out) = (0.8, 1.0);
    let (rho_in, p_in) = (1e-2, 1.0);
    let (rho_out, p_out) = (1e-4, 5e-4);
    let init = move |x: f64, y: f64| {
        let r = (x * x + y * y).sqrt();
        let (rho, p) = if r <= r_in {
            (rho_in, p_in)
        } else if r >= r_out {
            (rho_out, p_out)
        } else {
            let s = (r - r_in) / (r_out - r_in);
            (rho_in + s * (rho_out - rho_in), p_in + s * (p_out - p_in))
        };
        state([rho, 0.0, 0.0, 0.0, 0.1, 0.0, 0.0, p])
    };
    ProblemSpec {
        id: ProblemId::Blast,
        dim: 2,
        x: (-6.0, 6.0),
        y: (-6.0, 6.0),
        t_final: 4.0,
        snapshot_times: Vec::new(),
        gamma: 4.0 / 3.0,
        boundaries: Boundaries::outflow(),
        initial: Arc::new(init),
        exact: None,
    }
}

/// Velocity amplitude of the Orszag–Tang vortex.
pub const ORSZAG_TANG_AMPLITUDE: f64 = 0.99 / std::f64::consts::SQRT_2;

/// Relativistic Orszag–Tang vortex on the periodic square `[0, 2π]²`.
pub fn orszag_tang() -> ProblemSpec {
    let a = ORSZAG_TANG_AMPLITUDE;
    let init = move |x: f64, y: f64| state([1.0, -a * y.sin(), a * x.sin(), 0.0, -y.sin(), (2.0 * x).sin(), 0.0, 10.0]);
    ProblemSpec {
        id: ProblemId::OrszagTang,
        dim: 2,
        x: (0.0, 2.0 * PI),
        y: (0.0, 2.0 * PI),
        t_final: 6.8558,
        snapshot_times: vec![2.818127, 6.8558],
        gamma: 4.0 / 3.0,
        boundaries: Boundaries::periodic(),
        initial: Arc::new(init),
        exact: None,
    }
}

/// Post-shock and pre-shock states of the shock–cloud problem.
pub fn shock_cloud_states() -> (PrimState, PrimState) {
    (
        state([3.86859, 0.68, 0.0, 0.0, 0.0, 0.84981, -0.84981, 1.25115]),
        state([1.0, 0.0, 0.0, 0.0, 0.0, 0.16106, 0.16106, 0.05]),
    )
}

/// A shock moving into a medium containing a dense circular cloud.
pub fn shock_cloud() -> ProblemSpec {
    let (left, right) = shock_cloud_states();
    let init = move |x: f64, y: f64| {
        if x < 0.05 {
            left
        } else {
            let (dx, dy) = (x - 0.25, y - 0.5);
            if dx * dx + dy * dy < 0.15 * 0.15 {
                PrimState { rho: 30.0, ..right }
            } else {
                right
            }
        }
    };
    ProblemSpec {
        id: ProblemId::ShockCloud,
        dim: 2,
        x: (-0.2, 1.2),
        y: (0.0, 1.0),
        t_final: 1.2,
        snapshot_times: Vec::new(),
        gamma: 5.0 / 3.0,
        boundaries: Boundaries { x_lo: Boundary::Inflow { state: left }, ..Boundaries::outflow() },
        initial: Arc::new(init),
        exact: None,
    }
}
