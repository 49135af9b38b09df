//! Method-of-lines finite difference solver on uniform 1D and 2D meshes.

mod boundary;
mod config;
mod diagnostics;
mod field;
mod kernel;
mod mesh;
mod rhs;
mod time;

pub use boundary::apply_boundary;
pub use config::{Boundaries, Boundary, FixedDt, SchemeConfig};
pub use diagnostics::{divergence_norm, entropy_budget, total_entropy, DivergenceNorm, EntropyBudget};
pub use field::Field;
pub use mesh::Mesh;
pub use rhs::{rhs, rhs_1d, rhs_2d};
pub use time::{advance, cfl_dt, rk4_step, StepReport};
