//! Verification driver for the `hallcluster` library: quiver files,
//! check campaigns and report rendering.

pub mod commands;
pub mod example;
pub mod quiverfile;
pub mod report;

pub use commands::{run_command, Command, Grid, LambdaChoice, Options, Outcome};
pub use quiverfile::{parse_quiver_file, render_quiver_file, ParseError, QuiverFile};
pub use report::{emit_report, exit_code, Format, Report, Status};

#[cfg(doctest)]
#[doc = include_str!("../../../book/src/cli.md")]
mod book_cli {}
