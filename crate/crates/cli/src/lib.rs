//! Library side of the `sgsweep` command: configuration, run driver, field
//! dumps and timing records.

pub mod config;
pub mod dump;
pub mod run;

pub use config::{Args, CustomProblem, FileConfig, Mode, ProblemChoice, RunConfig};
pub use dump::{dump_field, load_field, write_field, write_timings};
pub use run::{run_config, PhaseReport, RunReport, RunRow};

use sgsweep_core::Error as CoreError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Config(String),
    Convergence(String),
    Io(String),
    Solver(String),
}

impl CliError {
    /// Process exit status for this failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Solver(_) => 1,
            CliError::Config(_) => 2,
            CliError::Convergence(_) => 3,
            CliError::Io(_) => 4,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "invalid configuration: {m}"),
            CliError::Convergence(m) => write!(f, "solver did not converge: {m}"),
            CliError::Io(m) => write!(f, "i/o error: {m}"),
            CliError::Solver(m) => write!(f, "{m}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        if e.is_convergence_failure() {
            return CliError::Convergence(e.to_string());
        }
        match e {
            CoreError::InvalidGrid(_)
            | CoreError::UnsupportedDimension(_)
            | CoreError::InvalidConfig(_)
            | CoreError::UnknownBenchmark(_)
            | CoreError::EmptyBand(_) => CliError::Config(e.to_string()),
            CoreError::Io(_) => CliError::Io(e.to_string()),
            other => CliError::Solver(other.to_string()),
        }
    }
}
