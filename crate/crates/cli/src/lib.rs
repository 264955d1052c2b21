//! Command-line harness: scenario runs, parameter sweeps, sensitivity
//! scans and reproducible CSV/JSON-lines export.

pub mod app;
pub mod config_file;
pub mod error;
pub mod export;
pub mod sweep;

pub use app::{run_cli, Cli, Command};
pub use error::CliError;
pub use export::Format;
