//! Day and ensemble drivers.
//!
//! A day processes `n_agents` arrivals against a fresh pair of seed agents.
//! An ensemble repeats that for `n_days`. Days are statistically independent
//! for every rule except [`Strategy::HistoryWeighted`], where each day reads
//! an aggregate of the previous days' fixed points, so the ensemble becomes
//! one coupled sequence.
//!
//! Reproducibility: day `i` always draws from `make_rng_stream(seed, i)`.
//! Independent days can therefore run on any number of threads (rayon) and
//! still produce bit-identical results; history-weighted ensembles run
//! sequentially because of their day-to-day data dependence, but use the
//! same per-day streams.

use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::rng::make_rng_stream;
use crate::state::{DayResult, UrnState};
use crate::strategy::{choice_probability, validate_strategy, Sign, Strategy};

/// Full description of an ensemble run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimulationConfig {
    pub strategy: Strategy,
    /// Arrivals per day (the two seed agents are extra).
    pub n_agents: u64,
    pub n_days: u64,
    pub seed: u64,
}

/// An ensemble's day-by-day outcomes, in day order.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleResult {
    pub config: SimulationConfig,
    pub days: Vec<DayResult>,
    pub elapsed: Duration,
}

impl EnsembleResult {
    /// The per-day fixed points, in day order.
    pub fn fixed_points(&self) -> Vec<f64> {
        self.days.iter().map(|d| d.p_a).collect()
    }
}

/// Discounted record of past days' fixed points.
///
/// After `m` appends the aggregate is `sum_k delta^k * h_k / Z`, where `h_1`
/// is the most recent fixed point, `h_m` the oldest, and `Z` normalizes the
/// weights. Small `delta` forgets quickly (`delta = 0` keeps only the last
/// day); `delta = 1` weighs all days equally; `delta > 1` tilts toward the
/// oldest days.
///
/// The aggregate is maintained incrementally. Appending `p` updates
/// `A <- r*p + (1 - r)*A` where `r = delta / Z` is the weight the newest
/// entry receives, and then `r <- r / (r + delta)`. No power of `delta` is
/// ever materialized, so nothing overflows or vanishes no matter how long
/// the history grows; for `delta > 1`, `r` underflowing to zero is the
/// correct limit (new days stop mattering).
#[derive(Debug, Clone, PartialEq)]
pub struct HistoryLedger {
    fixed_points: Vec<f64>,
    delta: f64,
    aggregate: f64,
    next_weight: f64,
}

impl HistoryLedger {
    /// An empty ledger with discount `delta >= 0`.
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta >= 0.0 && delta.is_finite()) {
            return Err(Error::InvalidParameter {
                field: "delta",
                bound: "0 <= delta < inf",
                value: delta,
            });
        }
        Ok(HistoryLedger {
            fixed_points: Vec::new(),
            delta,
            aggregate: 0.0,
            next_weight: 1.0,
        })
    }

    pub fn len(&self) -> usize {
        self.fixed_points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fixed_points.is_empty()
    }

    pub fn delta(&self) -> f64 {
        self.delta
    }

    /// All recorded fixed points, oldest first.
    pub fn fixed_points(&self) -> &[f64] {
        &self.fixed_points
    }

    /// The discounted aggregate, or `None` while no day has been recorded.
    pub fn aggregate(&self) -> Option<f64> {
        if self.fixed_points.is_empty() {
            None
        } else {
            Some(self.aggregate)
        }
    }

    /// Record a day's fixed point as the new most-recent history entry.
    pub fn append(&mut self, p_a: f64) {
        debug_assert!((0.0..=1.0).contains(&p_a), "fixed points lie in [0, 1]");
        let r = self.next_weight;
        self.aggregate = (r * p_a + (1.0 - r) * self.aggregate).clamp(0.0, 1.0);
        // r/(r + delta) maps 1 -> 1/(1+delta) -> ... -> delta/Z_m. With
        // delta = 0, r stays 1 (only the newest entry counts).
        self.next_weight = r / (r + self.delta);
        self.fixed_points.push(p_a);
    }
}

/// Discounted aggregate of a full history in one pass, oldest first.
///
/// This is the from-scratch counterpart of [`HistoryLedger`], computed in
/// log space (weight of the entry aged `k` is `exp(k * ln delta - max)`,
/// normalized), so it is finite for any `delta >= 0` and any length. The two
/// must agree to ~1e-12; the ledger is what the simulation uses.
pub fn history_aggregate(fixed_points: &[f64], delta: f64) -> Result<f64> {
    if fixed_points.is_empty() {
        return Err(Error::Contract("history aggregate needs at least one day"));
    }
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::InvalidParameter {
            field: "delta",
            bound: "0 <= delta < inf",
            value: delta,
        });
    }
    let m = fixed_points.len();
    if delta == 0.0 {
        // 0^1 dominates 0^k for k > 1: only the most recent day survives.
        return Ok(fixed_points[m - 1]);
    }
    let log_delta = delta.ln();
    // Largest exponent wins: age 1 (most recent) for delta < 1, age m for
    // delta > 1. Subtracting it keeps every weight in (0, 1].
    let max_log = if log_delta >= 0.0 {
        m as f64 * log_delta
    } else {
        log_delta
    };
    let mut weight_sum = 0.0;
    let mut value_sum = 0.0;
    for (i, &p) in fixed_points.iter().enumerate() {
        let age = (m - i) as f64;
        let w = (age * log_delta - max_log).exp();
        weight_sum += w;
        value_sum += w * p;
    }
    Ok((value_sum / weight_sum).clamp(0.0, 1.0))
}

/// Run one day: seed both sides, process `n_agents` arrivals, report queue
/// lengths (seeds excluded) and the day's fixed point.
///
/// Under [`Strategy::RandomPreference`] each arrival draws its sign first
/// and its placement variate second. `history_value` is required for
/// [`Strategy::HistoryWeighted`] and ignored otherwise.
pub fn run_day<R: Rng>(
    strategy: Strategy,
    n_agents: u64,
    history_value: Option<f64>,
    rng: &mut R,
) -> Result<DayResult> {
    validate_strategy(strategy)?;
    if n_agents == 0 {
        return Err(Error::Contract("a day needs at least one arrival"));
    }
    let needs_sign = matches!(strategy, Strategy::RandomPreference { .. });
    let mut state = UrnState::day_start();
    for _ in 0..n_agents {
        let sign = if needs_sign {
            Some(if rng.random::<f64>() < 0.5 {
                Sign::Plus
            } else {
                Sign::Minus
            })
        } else {
            None
        };
        let p = choice_probability(strategy, state, history_value, sign)?;
        if rng.random::<f64>() < p {
            state.n_a += 1;
        } else {
            state.n_b += 1;
        }
    }
    let q_a = state.n_a - 1;
    let q_b = state.n_b - 1;
    Ok(DayResult {
        q_a,
        q_b,
        p_a: q_a as f64 / n_agents as f64,
    })
}

/// Run a full ensemble.
///
/// Independent-day strategies fan out over the available rayon threads;
/// the result is identical for every thread count because day `i` owns RNG
/// stream `i`. A history-weighted ensemble is a single coupled sequence:
/// day 0 has no history yet and falls back to plain proportional crowd
/// following, and each later day reads the ledger aggregate of all earlier
/// fixed points.
pub fn run_ensemble(config: &SimulationConfig) -> Result<EnsembleResult> {
    validate_strategy(config.strategy)?;
    if config.n_agents == 0 {
        return Err(Error::Contract("n_agents must be at least 1"));
    }
    if config.n_days == 0 {
        return Err(Error::Contract("n_days must be at least 1"));
    }
    let start = Instant::now();
    let days = match config.strategy {
        Strategy::HistoryWeighted { delta, .. } => coupled_days(config, delta)?,
        _ => independent_days(config)?,
    };
    Ok(EnsembleResult {
        config: *config,
        days,
        elapsed: start.elapsed(),
    })
}

fn independent_days(config: &SimulationConfig) -> Result<Vec<DayResult>> {
    (0..config.n_days)
        .into_par_iter()
        .map(|day| {
            let mut rng = make_rng_stream(config.seed, day);
            run_day(config.strategy, config.n_agents, None, &mut rng)
        })
        .collect()
}

fn coupled_days(config: &SimulationConfig, delta: f64) -> Result<Vec<DayResult>> {
    let first_day_rule = Strategy::FollowCrowd { epsilon: 1.0 };
    let mut ledger = HistoryLedger::new(delta)?;
    let mut days = Vec::with_capacity(config.n_days as usize);
    for day in 0..config.n_days {
        let mut rng = make_rng_stream(config.seed, day);
        let result = match ledger.aggregate() {
            None => run_day(first_day_rule, config.n_agents, None, &mut rng)?,
            Some(h) => run_day(config.strategy, config.n_agents, Some(h), &mut rng)?,
        };
        ledger.append(result.p_a);
        days.push(result);
    }
    Ok(days)
}
