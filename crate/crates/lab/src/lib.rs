//! Experiment harness for `llp-core`: configs, file formats, tabular
//! ingestion, repeated runs, construction verifiers and the `llp` binary.

pub mod config;
pub mod convert;
pub mod error;
pub mod experiment;
pub mod format;
pub mod gen;
pub mod tabular;
pub mod verify;

pub use config::{Experiment, ExperimentConfig, Overrides};
pub use error::{LabError, Result};
pub use experiment::{cmd_run, ExperimentReport};
