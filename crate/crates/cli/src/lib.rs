//! Command-line front end: experiment manifests, report rendering and the
//! bound-envelope suite.

pub mod app;
pub mod certify;
pub mod commands;
pub mod error;
pub mod manifest;
pub mod report;

pub use app::run_cli;
pub use error::CliError;
pub use manifest::ExperimentManifest;
