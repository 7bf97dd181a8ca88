//! Experiment harness: configuration files, XOR and iris training runs,
//! genome evaluation, the brute-force oracle, traces and result audits.

pub mod audit;
pub mod cli;
pub mod config;
pub mod error;
pub mod eval;
pub mod oracle;
pub mod reference;
pub mod report;
pub mod runner;
pub mod trace;

pub use config::{Experiment, ExperimentConfig, TaskKind};
pub use error::{HarnessError, Result};
pub use report::ResultsReport;
pub use runner::{run_experiment, run_iris, run_xor};
