//! Config-driven batch front end: `check-identity`, `eval`, `sweep`,
//! `sharpness` and `selftest`.

mod config;
mod run;
mod selftest;

pub use config::{parse_config, Config, ConfigError};
pub use run::{run_cli, run_cli_with, EXIT_ERROR, EXIT_OK, EXIT_VIOLATION, TOL_ENV};
pub use selftest::run_selftest;
