//! Command-line surface for `liectrl-core`: the JSON system-file format,
//! report rendering and the subcommand implementations.

pub mod commands;
pub mod error;
pub mod report;
pub mod system_file;

pub use commands::{run, Cli};
pub use error::CliError;
pub use report::{render_report, Format};
pub use system_file::{parse_system, parse_system_str, render_system, SystemFile};
