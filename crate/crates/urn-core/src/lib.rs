//! A two-restaurant queue game driven by reinforcement.
//!
//! Each day starts with one seed agent in each restaurant; `n_agents` more
//! arrive one at a time and pick a side according to a [`Strategy`]. The
//! day's outcome is summarized by its queue lengths and its *fixed point*
//! `p_a = q_a / n_agents`, the fraction of arrivals that chose A. Running
//! many days produces a distribution of fixed points whose shape — flat,
//! peaked, bimodal, or winner-take-all — depends on the strategy, and whose
//! consecutive-day queue-length ratios develop a power-law tail.
//!
//! The crate is organized as:
//!
//! - [`strategy`]: the six choice rules and their single-arrival probability;
//! - [`simulate`]: day and ensemble drivers with reproducible parallel RNG;
//! - [`stats`]: histograms, tail fits, uniformity tests, ratio series;
//! - [`oracle`]: exact small-instance distributions for validating the
//!   stochastic code paths.

pub mod error;
pub mod oracle;
pub mod rng;
pub mod simulate;
pub mod state;
pub mod stats;
pub mod strategy;

pub use error::{Error, Result};
pub use simulate::{
    history_aggregate, run_day, run_ensemble, EnsembleResult, HistoryLedger, SimulationConfig,
};
pub use state::{DayResult, UrnState};
pub use strategy::{choice_probability, validate_strategy, Sign, Strategy};
