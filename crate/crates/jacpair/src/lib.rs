//! Experiment orchestration, reports and the command-line front end for
//! [`jacpair_core`].

pub mod cli;
pub mod config;
pub mod harness;
pub mod report;
pub mod stats;

pub use config::{ConfigError, ExperimentConfig, ExperimentKind, Format};
pub use harness::{run, HarnessError};
pub use report::{ComparisonRow, Report};
