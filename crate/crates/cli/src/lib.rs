//! Batch front end for the rmhd-core schemes: declarative run
//! configuration, runs with structured output, convergence studies and
//! entropy trace reports.

pub mod config;
pub mod converge;
pub mod driver;
pub mod output;
pub mod report;
pub mod run;

pub use config::{Cadence, Diagnostics, Resolution, RunConfig, SchemeSpec, Variable};
pub use converge::{convergence_study, ConvergenceReport, ConvergenceRow};
pub use driver::{advance_with_retries, step_with_retries, StepRecord, StepStats};
pub use report::{entropy_trace_report, EntropyReport};
pub use run::{run, run_single, Manifest};
