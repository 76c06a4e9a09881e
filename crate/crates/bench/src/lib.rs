//! The `nlq` command line: error tables for the test integrands and utilities
//! around the `nlquad` rules.

pub mod cli;
pub mod commands;
pub mod error;
pub mod format;
pub mod presets;
pub mod rules;

pub use cli::{run, Cli};
pub use error::{CliError, CliResult};
pub use presets::{IntegrandPreset, PresetId};
