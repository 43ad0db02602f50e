//! The exact oracle against brute force, and the simulator against the
//! exact oracle.

use urn_core::oracle::exact_distribution;
use urn_core::simulate::run_day;
use urn_core::state::UrnState;
use urn_core::strategy::{choice_probability, Sign, Strategy};

/// End-of-day law of q_a by explicit enumeration of all 2^n (or 4^n with
/// per-agent signs) arrival paths. Exponential, so only for tiny n — this is
/// the independent check that the dynamic program collapses paths correctly.
fn brute_force_pmf(strategy: Strategy, n_agents: u64, history_value: Option<f64>) -> Vec<f64> {
    let n = n_agents as usize;
    let needs_sign = matches!(strategy, Strategy::RandomPreference { .. });
    let mut pmf = vec![0.0; n + 1];
    // One path per bitmask; bit i set means arrival i chose A. Signed paths
    // integrate the two sign values per arrival inside the product.
    for mask in 0u64..(1 << n) {
        let mut state = UrnState::day_start();
        let mut weight = 1.0;
        for arrival in 0..n {
            let chose_a = mask >> arrival & 1 == 1;
            let p = if needs_sign {
                0.5 * choice_probability(strategy, state, history_value, Some(Sign::Plus)).unwrap()
                    + 0.5
                        * choice_probability(strategy, state, history_value, Some(Sign::Minus))
                            .unwrap()
            } else {
                choice_probability(strategy, state, history_value, None).unwrap()
            };
            weight *= if chose_a { p } else { 1.0 - p };
            if chose_a {
                state.n_a += 1;
            } else {
                state.n_b += 1;
            }
        }
        pmf[state.n_a as usize - 1] += weight;
    }
    pmf
}

fn rule_zoo() -> Vec<(Strategy, Option<f64>)> {
    vec![
        (Strategy::AvoidCrowd, None),
        (Strategy::Random, None),
        (Strategy::FollowCrowd { epsilon: 0.5 }, None),
        (Strategy::FollowCrowd { epsilon: 1.0 }, None),
        (Strategy::FollowCrowd { epsilon: 2.0 }, None),
        (Strategy::FixedPreference { alpha: 0.3 }, None),
        (Strategy::FixedPreference { alpha: 0.9 }, None),
        (Strategy::FixedPreference { alpha: 1.0 }, None),
        (Strategy::RandomPreference { alpha_abs: 0.5 }, None),
        (Strategy::RandomPreference { alpha_abs: 10.0 }, None),
        (
            Strategy::HistoryWeighted { gamma: 0.7, delta: 1.1 },
            Some(0.3),
        ),
    ]
}

#[test]
fn dynamic_program_matches_brute_force() {
    for (strategy, h) in rule_zoo() {
        for n in [1u64, 4, 9, 12] {
            let exact = exact_distribution(strategy, n, h).unwrap();
            let brute = brute_force_pmf(strategy, n, h);
            for (k, (a, b)) in exact.probabilities.iter().zip(&brute).enumerate() {
                assert!(
                    (a - b).abs() < 1e-12,
                    "{strategy:?} n={n} k={k}: dp {a} vs brute {b}"
                );
            }
        }
    }
}

/// A million simulated days against the exact law, in total variation.
/// The bound treats every outcome as if it were off by its own 4-sigma
/// multinomial error at once — comfortably above any honest fluctuation,
/// far below any systematic bias.
#[test]
fn simulated_days_converge_to_the_exact_law() {
    let n_agents = 10u64;
    let n_days = 1_000_000u64;
    let cases = [
        (Strategy::FollowCrowd { epsilon: 1.0 }, None),
        (Strategy::RandomPreference { alpha_abs: 0.5 }, None),
        (
            Strategy::HistoryWeighted { gamma: 0.6, delta: 1.0 },
            Some(0.25),
        ),
    ];
    for (strategy, h) in cases {
        let exact = exact_distribution(strategy, n_agents, h).unwrap();
        let mut counts = vec![0u64; n_agents as usize + 1];
        for day in 0..n_days {
            let mut rng = urn_core::rng::make_rng_stream(99, day);
            let result = run_day(strategy, n_agents, h, &mut rng).unwrap();
            counts[result.q_a as usize] += 1;
        }
        let m = n_days as f64;
        let mut tv = 0.0;
        let mut bound = 0.0;
        for (k, &c) in counts.iter().enumerate() {
            let p = exact.probabilities[k];
            tv += 0.5 * (c as f64 / m - p).abs();
            bound += 0.5 * 4.0 * (p * (1.0 - p) / m).sqrt();
        }
        assert!(
            tv < bound,
            "{strategy:?}: total variation {tv} above the sampling bound {bound}"
        );
    }
}
