//! Building, compiling, benchmarking and diagnosing from the command line.
//!
//! The binary is a thin layer over [`commands`]; the same functions back the
//! acceptance tests.

pub mod commands;
pub mod config;
pub mod error;
pub mod targets;

pub use config::{GateSetSource, RunConfig};
pub use error::{CliError, CliResult};
