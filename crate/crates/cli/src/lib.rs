//! Command implementations behind the `capclass` binary.
//!
//! Each command returns the text for stdout and an exit code; `main` only
//! parses arguments and prints.

pub mod capfile;
pub mod commands;

pub use commands::{CliError, Output};
