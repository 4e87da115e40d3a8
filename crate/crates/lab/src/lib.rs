//! Configuration, reports and subcommands of the `rigidlab` command-line tool.

pub mod commands;
pub mod config;
pub mod csvio;
pub mod report;

pub use commands::{Rejected, ROUNDING_FLOOR};
pub use config::{ConfigError, ScenarioConfig};
