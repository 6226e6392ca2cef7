//! Command-line tools and the local HTTP service built on `tcurve-core`.

pub mod commands;
pub mod error;
pub mod service;

pub use error::{CliError, CliResult};
