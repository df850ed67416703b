//! JSON instance formats, seeded corpora, report rendering and the command
//! dispatcher behind the `ussp` binary.

pub mod commands;
pub mod corpus;
pub mod error;
pub mod format;
pub mod instance;
pub mod report;

pub use commands::{execute, Command};
pub use error::{CliError, InputError};
pub use instance::{parse_instance, parse_reader, parse_str, Instance, Kind, Options};
pub use report::{render_report, Format, Report};
