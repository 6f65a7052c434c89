//! Plumbing behind the `lancom` binary: run configuration, JSON/CSV
//! histories and solver comparison reports.

pub mod compare;
pub mod config;
pub mod error;
pub mod history;

pub use error::{CliError, CliResult};
