//! The six choice rules and their single-arrival probability of picking A.

use crate::error::{Error, Result};
use crate::state::UrnState;

/// Direction of an agent's personal bias under [`Strategy::RandomPreference`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// How an arriving agent decides between the two restaurants.
///
/// Writing `n_a`, `n_b` for the current occupation counts (seeds included)
/// and `s = n_a + n_b`, the probability of choosing A is:
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Strategy {
    /// Head for the emptier side: `p = n_b / s`.
    AvoidCrowd,
    /// Ignore the crowd entirely: `p = 1/2`.
    Random,
    /// Follow the crowd with tunable intensity:
    /// `p = n_a^epsilon / (n_a^epsilon + n_b^epsilon)`, `epsilon >= 0`.
    /// `epsilon = 1` is plain proportional reinforcement; `epsilon = 0`
    /// degenerates to a fair coin; `epsilon > 1` amplifies the majority.
    FollowCrowd { epsilon: f64 },
    /// Crowd share plus a bias toward A shared by every agent:
    /// `p = (n_a + alpha) / s`, `0 <= alpha <= 1`.
    FixedPreference { alpha: f64 },
    /// Crowd share plus a per-agent bias of random direction:
    /// `p = (n_a ± alpha_abs) / s` clamped into `[0, 1]`, `alpha_abs >= 0`.
    /// Each agent draws its own fair sign.
    RandomPreference { alpha_abs: f64 },
    /// Blend the crowd share with an aggregate of past days' fixed points:
    /// `p = gamma * n_a / s + (1 - gamma) * h`, `0 <= gamma <= 1`,
    /// where `h` is the discounted history (see `simulate::HistoryLedger`,
    /// discount `delta >= 0`).
    HistoryWeighted { gamma: f64, delta: f64 },
}

/// Check that a strategy's parameters are inside their documented ranges.
/// NaN and infinite values are rejected.
pub fn validate_strategy(strategy: Strategy) -> Result<()> {
    match strategy {
        Strategy::AvoidCrowd | Strategy::Random => Ok(()),
        Strategy::FollowCrowd { epsilon } => {
            check("epsilon", "0 <= epsilon < inf", epsilon, 0.0, f64::INFINITY)
        }
        Strategy::FixedPreference { alpha } => check("alpha", "0 <= alpha <= 1", alpha, 0.0, 1.0),
        Strategy::RandomPreference { alpha_abs } => check(
            "alpha_abs",
            "0 <= alpha_abs < inf",
            alpha_abs,
            0.0,
            f64::INFINITY,
        ),
        Strategy::HistoryWeighted { gamma, delta } => {
            check("gamma", "0 <= gamma <= 1", gamma, 0.0, 1.0)?;
            check("delta", "0 <= delta < inf", delta, 0.0, f64::INFINITY)
        }
    }
}

fn check(field: &'static str, bound: &'static str, value: f64, lo: f64, hi: f64) -> Result<()> {
    // `value >= lo` is false for NaN; infinity is excluded even when hi is
    // infinite because the rules below cannot evaluate it.
    if value >= lo && value <= hi && value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter { field, bound, value })
    }
}

/// Probability that the next arrival picks restaurant A.
///
/// `history_value` must be supplied (in `[0, 1]`) for
/// [`Strategy::HistoryWeighted`] and `preference_sign` for
/// [`Strategy::RandomPreference`]; both are ignored by the other rules.
/// The result is always a valid probability: rules whose raw formula can
/// leave `[0, 1]` (a large `alpha_abs`, say) are clamped.
pub fn choice_probability(
    strategy: Strategy,
    state: UrnState,
    history_value: Option<f64>,
    preference_sign: Option<Sign>,
) -> Result<f64> {
    validate_strategy(strategy)?;
    debug_assert!(state.n_a >= 1 && state.n_b >= 1, "urn sides must stay seeded");
    let n_a = state.n_a as f64;
    let n_b = state.n_b as f64;
    let s = n_a + n_b;
    let p = match strategy {
        Strategy::AvoidCrowd => n_b / s,
        Strategy::Random => 0.5,
        Strategy::FollowCrowd { epsilon } => follow_crowd(n_a, n_b, epsilon),
        Strategy::FixedPreference { alpha } => (n_a + alpha) / s,
        Strategy::RandomPreference { alpha_abs } => {
            let sign = preference_sign.ok_or(Error::Contract(
                "random_preference needs a preference sign",
            ))?;
            (n_a + sign.factor() * alpha_abs) / s
        }
        Strategy::HistoryWeighted { gamma, .. } => {
            let h = history_value.ok_or(Error::Contract(
                "history_weighted needs a history value",
            ))?;
            if !(0.0..=1.0).contains(&h) {
                return Err(Error::Contract("history value must lie in [0, 1]"));
            }
            gamma * (n_a / s) + (1.0 - gamma) * h
        }
    };
    Ok(p.clamp(0.0, 1.0))
}

/// Crowd-following probability. The exponent-1 case is computed as the plain
/// share `n_a / s` (bit-identical to `FixedPreference { alpha: 0.0 }` and to
/// the crowd term of `HistoryWeighted`); the general case uses
/// `1 / (1 + (n_b/n_a)^epsilon)`, whose intermediate cannot overflow for any
/// count sizes, unlike `n_a^epsilon` itself.
fn follow_crowd(n_a: f64, n_b: f64, epsilon: f64) -> f64 {
    if epsilon == 1.0 {
        n_a / (n_a + n_b)
    } else {
        1.0 / (1.0 + (n_b / n_a).powf(epsilon))
    }
}
