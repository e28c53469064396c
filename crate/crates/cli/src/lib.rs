//! Experiment harness for the `gercp` LU library.
//!
//! Commands generate matrices, factor and solve, sweep growth factors,
//! time strategies and run numeric checks, writing versioned CSV.

pub mod cli;
pub mod error;
pub mod runners;
pub mod spec;
pub mod table;
pub mod theory;

pub use cli::{execute, run, Cli};
pub use error::CliError;
pub use spec::{Command, ExperimentSpec};
