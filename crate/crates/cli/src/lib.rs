//! Scenario-driven command-line front end: parse, compute, write atomically.

pub mod app;
pub mod error;
pub mod output;
pub mod plot;
pub mod run;
pub mod scenario;

pub use error::{CliError, CliResult};
pub use run::{execute, Overrides, RunOutput};
pub use scenario::{preset, Mode, Scenario, PRESETS};
