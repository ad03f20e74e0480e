//! Config parsing and subcommands behind the `deadwater` binary.

pub mod commands;
pub mod config;
mod output;

pub use config::{load_config, parse_config, ConfigError, EpsilonChoice, ScenarioConfig};
