//! Experiment-file parsing and the CSV-writing runner behind the `urn`
//! binary, exposed as a library so tests can drive them directly.

pub mod config;
pub mod experiment;
