//! Entropy conservative and entropy stable finite difference schemes for the
//! symmetrizable form of special relativistic magnetohydrodynamics.

// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod dissipation;
pub mod ecflux;
pub mod error;
pub mod physics;
pub mod problems;
pub mod solver;

pub use error::{PhysicsError, SchemeError, SolverError};

/// Crate version recorded in run manifests.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub use physics::{ConsState, Direction, Eos, PrimState, Vec3, Vec8};
