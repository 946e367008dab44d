//! Command-line front end for [`qalg_core`]: text file formats, report
//! rendering and the `qalg` subcommands.

pub mod cli;
pub mod format;
pub mod output;

pub use cli::{run, Invocation, RunConfig};
