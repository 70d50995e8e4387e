//! Document formats and subcommands of the `arbor` command-line tool.

pub mod commands;
pub mod formats;

pub use commands::{execute, load, run, Invocation};
pub use formats::{parse_document, print_document, Document, Kind};
