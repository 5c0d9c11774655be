//! Command-line front end: scenario files, run manifests and CSV output.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod manifest;

pub use commands::{execute, CommandOutput};
pub use config::{load_config, parse_config, LoadedConfig};
pub use error::CliError;
pub use manifest::{CommandArgs, RunDefaults, RunManifest};
