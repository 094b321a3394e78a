//! File formats, subcommands and report rendering for the `christol` tool.

pub mod commands;
pub mod error;
pub mod formats;
pub mod table;

pub use error::{CliError, ErrorKind};
