//! Configuration-driven front end: loads an experiment file, runs one
//! command and writes CSV tables, metadata and optional SVG plots.

// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod commands;
pub mod config;
pub mod error;
pub mod output;
pub mod plot;

pub use commands::{run, Command, Overrides};
pub use config::{load_config, ExperimentConfig};
pub use error::CliError;
