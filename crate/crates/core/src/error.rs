use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum PhysicsError {
    #[error("adiabatic index must exceed 1, got {0}")]
    InvalidAdiabaticIndex(f64),
    #[error("state contains non-finite components")]
    NonFinite,
    #[error("non-positive density {0}")]
    NonPositiveDensity(f64),
    #[error("non-positive pressure {0}")]
    NonPositivePressure(f64),
    #[error("superluminal velocity, |v|^2 = {v2}")]
    Superluminal { v2: f64 },
    #[error("primitive recovery failed after {iterations} iterations (residual {residual:e}): {reason}")]
    Recovery { iterations: usize, residual: f64, reason: &'static str },
    #[error("magnetic field must vanish for the hydrodynamic flux, got |B| = {0}")]
    NonzeroField(f64),
    #[error("logarithmic mean needs positive arguments, got ({0}, {1})")]
    LogMeanDomain(f64, f64),
    #[error("entropy Hessian is not positive definite at this state")]
    NotPositiveDefinite,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchemeError {
    #[error("unsupported order index k = {0}")]
    UnsupportedOrder(usize),
    #[error("invalid CFL number {0}, expected a value in (0, 1]")]
    InvalidCfl(f64),
    #[error("invalid scheme configuration: {0}")]
    Config(String),
    #[error("stencil has {got} points, expected {expected}")]
    StencilLength { expected: usize, got: usize },
    #[error(transparent)]
    Physics(#[from] PhysicsError),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolverError {
    #[error("recovery failed at cell ({i}, {j}), t = {time}: {source}")]
    Recovery {
        i: usize,
        j: usize,
        time: f64,
        #[source]
        source: PhysicsError,
    },
    #[error("dissipation operator failed at interface ({i}, {j}) along {axis}: {source}")]
    Dissipation {
        i: usize,
        j: usize,
        axis: usize,
        #[source]
        source: PhysicsError,
    },
    #[error("invalid initial state at ({x}, {y}): {source}")]
    InitialState {
        x: f64,
        y: f64,
        #[source]
        source: PhysicsError,
    },
    #[error("time step must be positive and finite, got {0}")]
    InvalidTimeStep(f64),
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error("invalid mesh: {0}")]
    Mesh(String),
}
