//! Exact small-instance results for validating the stochastic code paths.
//!
//! [`exact_distribution`] computes the end-of-day law of `q_a` by dynamic
//! programming over arrivals — feasible because the choice rules only read
//! the current counts, so all paths with the same `(arrivals, q_a)` share
//! one transition probability. [`ratio_of_uniforms_density`] is the known
//! closed form that the proportional-rule queue ratios must reproduce:
//! consecutive-day fixed points are independent uniforms, and the density
//! of a ratio of two independent U(0,1) variables is 1/2 on [0, 1] and
//! 1/(2 z^2) beyond — hence the inverse-square tail.

use crate::error::{Error, Result};
use crate::state::UrnState;
use crate::strategy::{choice_probability, validate_strategy, Sign, Strategy};

/// Exact probability mass function of `q_a` after a day of `n_agents`
/// arrivals; entry `k` is `P(q_a = k)`, `k = 0 ..= n_agents`.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactPmf {
    pub n_agents: u64,
    pub probabilities: Vec<f64>,
}

impl ExactPmf {
    /// Mean of `q_a`.
    pub fn mean(&self) -> f64 {
        self.probabilities
            .iter()
            .enumerate()
            .map(|(k, &p)| k as f64 * p)
            .sum()
    }
}

/// Largest `n_agents` accepted by [`exact_distribution`]; the table has
/// O(n^2) cells, so this caps the run at a few milliseconds.
pub const MAX_EXACT_AGENTS: u64 = 2000;

/// Exact end-of-day distribution of `q_a` by forward dynamic programming.
///
/// For [`Strategy::RandomPreference`] the per-arrival sign is integrated
/// out: the transition probability is the equal-weight average of the two
/// signed (clamped) probabilities, which is exactly how a fair sign draw
/// behaves. [`Strategy::HistoryWeighted`] needs a fixed `history_value`,
/// as within a single day.
pub fn exact_distribution(
    strategy: Strategy,
    n_agents: u64,
    history_value: Option<f64>,
) -> Result<ExactPmf> {
    validate_strategy(strategy)?;
    if n_agents == 0 {
        return Err(Error::Contract("a day needs at least one arrival"));
    }
    if n_agents > MAX_EXACT_AGENTS {
        return Err(Error::BudgetExceeded {
            what: "n_agents",
            requested: n_agents as usize,
            limit: MAX_EXACT_AGENTS as usize,
        });
    }
    let n = n_agents as usize;
    // current[k] = P(q_a = k after `arrivals` arrivals); one rolling row.
    let mut current = vec![0.0; n + 1];
    let mut next = vec![0.0; n + 1];
    current[0] = 1.0;
    for arrivals in 0..n {
        for slot in &mut next[..=arrivals + 1] {
            *slot = 0.0;
        }
        for k in 0..=arrivals {
            let mass = current[k];
            if mass == 0.0 {
                continue;
            }
            let state = UrnState {
                n_a: k as u64 + 1,
                n_b: (arrivals - k) as u64 + 1,
            };
            let pi = transition_probability(strategy, state, history_value)?;
            next[k + 1] += mass * pi;
            next[k] += mass * (1.0 - pi);
        }
        std::mem::swap(&mut current, &mut next);
    }
    Ok(ExactPmf {
        n_agents,
        probabilities: current,
    })
}

/// Single-arrival probability of choosing A with any per-agent randomness
/// integrated out.
fn transition_probability(
    strategy: Strategy,
    state: UrnState,
    history_value: Option<f64>,
) -> Result<f64> {
    match strategy {
        Strategy::RandomPreference { .. } => {
            let plus = choice_probability(strategy, state, history_value, Some(Sign::Plus))?;
            let minus = choice_probability(strategy, state, history_value, Some(Sign::Minus))?;
            Ok(0.5 * (plus + minus))
        }
        _ => choice_probability(strategy, state, history_value, None),
    }
}

/// Density of `Z = X/Y` for independent `X, Y ~ U(0, 1)`: `1/2` on `[0, 1]`,
/// `1/(2 z^2)` for `z > 1`.
pub fn ratio_of_uniforms_density(z: f64) -> Result<f64> {
    if !(z >= 0.0) {
        return Err(Error::Contract("the ratio of two uniforms is nonnegative"));
    }
    Ok(if z <= 1.0 { 0.5 } else { 0.5 / (z * z) })
}
