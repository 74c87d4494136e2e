//! Batch front end for `walker-ruled`: scene files, grid evaluation,
//! oracle verification and golden files.

pub mod commands;
pub mod config;
pub mod error;
pub mod format;
pub mod invariants;
pub mod sampling;

pub use commands::{run, Cli, Command, Format};
pub use config::SceneConfig;
pub use error::CliError;
