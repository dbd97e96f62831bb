//! Command-line front end for the UIML toolkit, plus a local server that
//! exposes the same pipeline to the browser workbench.

pub mod args;
pub mod commands;
pub mod serve;

pub use commands::{run, CliError, EXIT_DOMAIN, EXIT_ENV, EXIT_OK};
