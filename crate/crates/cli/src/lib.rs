//! Library side of the `gnls` command-line tool: experiment configuration,
//! execution, and artifact writers. The binary in `main.rs` only parses
//! arguments into an [`config::ExperimentConfig`] and calls [`run::run`].

pub mod config;
pub mod output;
pub mod run;

pub use config::{
    expand_masses, parse_potential_expression, CommandKind, ExperimentConfig, LatticeDims,
    MassSpec, PotentialSpec, SolverSettings, SourceSpec,
};
pub use run::{run, run_exit_code, RunError};
