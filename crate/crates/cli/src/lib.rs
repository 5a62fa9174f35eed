//! Batch runner behind the `netheal` binary.

pub mod cli;
pub mod commands;
pub mod error;
pub mod output;
pub mod summary;

pub use error::{CliError, Result};
