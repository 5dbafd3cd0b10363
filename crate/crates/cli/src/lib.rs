//! Command-line front end for `finitetrap-core`: flag parsing, CSV/JSON
//! output and parallel grid evaluation.

pub mod args;
pub mod output;
pub mod run;

pub use args::{Cli, Command, CommonArgs, Format};
pub use run::{evaluate_grid, execute, run, CliError, Report};
