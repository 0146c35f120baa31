//! Command-line front end: chain files, bundled tables and the subcommands.

pub mod chainfile;
pub mod commands;
pub mod tables;

pub use commands::{exit_code, run, CliError};
