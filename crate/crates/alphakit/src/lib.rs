//! File formats, a parallel executor and the `alphakit` command line on top
//! of [`alphakit_core`].

pub mod cli;
pub mod config;
pub mod error;
pub mod exec;
pub mod formats;
pub mod suites;

pub use config::{GridSpec, RunConfig};
pub use error::{exit, CliError, Result};
pub use exec::Parallel;
