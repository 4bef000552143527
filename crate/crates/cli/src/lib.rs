//! File formats, reports and the command-line front end for `eqcenter-core`.

pub mod cli;
pub mod commands;
mod error;
pub mod format;
pub mod report;

pub use error::{CliError, ExitStatus};
