//! Experiment file format.
//!
//! An experiment is described by a plain-text file of `key = value` lines.
//! `#` starts a full-line comment; blank lines are ignored. Global keys come
//! first, then one `[histogram]` section per requested output:
//!
//! ```text
//! name     = fig4
//! strategy = fixed_preference
//! alpha    = 0
//! n_agents = 5000
//! n_days   = 10000
//! seed     = 1
//!
//! [histogram]
//! target  = ratios_a
//! binning = log
//! lo      = 1
//! hi      = 100
//! bins    = 40
//! fit_min = 1
//! fit_max = 30
//! ```
//!
//! Global keys: `name` (output file prefix), `strategy` (one of
//! `avoid_crowd`, `random`, `follow_crowd`, `fixed_preference`,
//! `random_preference`, `history_weighted`), the strategy's own parameters
//! (`epsilon`; `alpha`; `alpha_abs`; `gamma` and `delta`), `n_agents`,
//! `n_days`, `seed`, and optional `out_dir`. Parameters belonging to a
//! different strategy, unknown keys, and duplicate keys are errors.
//!
//! Histogram keys: `target` (`fixed_points`, `ratios_a`, `ratios_b`),
//! `binning` (`linear` or `log`), `lo`, `hi`, `bins`, and an optional fit
//! window `fit_min`/`fit_max` (log binning only, `fit_min >= 1`).

use std::collections::HashMap;
use std::path::PathBuf;

use thiserror::Error;
use urn_core::simulate::SimulationConfig;
use urn_core::stats::Binning;
use urn_core::strategy::{validate_strategy, Strategy};
use urn_core::Error as CoreError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("{key}: {message}")]
    Semantic { key: String, message: String },
}

impl ConfigError {
    fn semantic(key: &str, message: impl Into<String>) -> Self {
        ConfigError::Semantic {
            key: key.to_string(),
            message: message.into(),
        }
    }
}

/// Which sample series a histogram bins.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HistogramTarget {
    /// Per-day fixed points p_a.
    FixedPoints,
    /// Consecutive-day queue ratios for side A.
    RatiosA,
    /// Consecutive-day queue ratios for side B.
    RatiosB,
}

impl HistogramTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            HistogramTarget::FixedPoints => "fixed_points",
            HistogramTarget::RatiosA => "ratios_a",
            HistogramTarget::RatiosB => "ratios_b",
        }
    }

    pub fn is_ratio(self) -> bool {
        matches!(self, HistogramTarget::RatiosA | HistogramTarget::RatiosB)
    }
}

/// One requested histogram output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HistogramRequest {
    pub target: HistogramTarget,
    pub binning: Binning,
    /// Tail-fit window `(z_min, z_max)`, when a power-law fit was asked for.
    pub fit_range: Option<(f64, f64)>,
}

/// A parsed, validated experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Prefix for every output file of this experiment.
    pub name: String,
    pub config: SimulationConfig,
    pub histograms: Vec<HistogramRequest>,
    pub output_dir: PathBuf,
}

const GLOBAL_KEYS: &[&str] = &[
    "name", "strategy", "epsilon", "alpha", "alpha_abs", "gamma", "delta", "n_agents", "n_days",
    "seed", "out_dir",
];
const STRATEGY_PARAM_KEYS: &[&str] = &["epsilon", "alpha", "alpha_abs", "gamma", "delta"];
const HISTOGRAM_KEYS: &[&str] = &["target", "binning", "lo", "hi", "bins", "fit_min", "fit_max"];

/// Raw `key -> (value, line)` map with duplicate and unknown-key detection.
struct Section {
    label: &'static str,
    entries: HashMap<String, (String, usize)>,
}

impl Section {
    fn new(label: &'static str) -> Self {
        Section {
            label,
            entries: HashMap::new(),
        }
    }

    fn insert(&mut self, key: String, value: String, line: usize, allowed: &[&str]) -> Result<(), ConfigError> {
        if !allowed.contains(&key.as_str()) {
            return Err(ConfigError::semantic(
                &key,
                format!("unknown key in {} (line {line})", self.label),
            ));
        }
        if self.entries.insert(key.clone(), (value, line)).is_some() {
            return Err(ConfigError::Syntax {
                line,
                message: format!("duplicate key '{key}'"),
            });
        }
        Ok(())
    }

    fn take(&mut self, key: &str) -> Option<(String, usize)> {
        self.entries.remove(key)
    }

    fn require(&mut self, key: &str) -> Result<(String, usize), ConfigError> {
        self.take(key)
            .ok_or_else(|| ConfigError::semantic(key, format!("required in {}", self.label)))
    }
}

fn parse_f64(key: &str, value: &str, line: usize) -> Result<f64, ConfigError> {
    value.parse().map_err(|_| ConfigError::Syntax {
        line,
        message: format!("invalid number for '{key}': '{value}'"),
    })
}

fn parse_u64(key: &str, value: &str, line: usize) -> Result<u64, ConfigError> {
    value.parse().map_err(|_| ConfigError::Syntax {
        line,
        message: format!("invalid integer for '{key}': '{value}'"),
    })
}

/// Parse and validate an experiment file.
pub fn parse_config(text: &str) -> Result<ExperimentSpec, ConfigError> {
    // Pass 1: split lines into the global section and [histogram] sections.
    let mut global = Section::new("the global section");
    let mut hist_sections: Vec<Section> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        if trimmed.starts_with('[') {
            if trimmed == "[histogram]" {
                hist_sections.push(Section::new("a [histogram] section"));
                continue;
            }
            return Err(ConfigError::Syntax {
                line,
                message: format!("unknown section '{trimmed}', expected [histogram]"),
            });
        }
        let Some((key, value)) = trimmed.split_once('=') else {
            return Err(ConfigError::Syntax {
                line,
                message: format!("expected 'key = value', got '{trimmed}'"),
            });
        };
        let key = key.trim().to_string();
        let value = value.trim().to_string();
        if key.is_empty() || value.is_empty() {
            return Err(ConfigError::Syntax {
                line,
                message: "empty key or value".to_string(),
            });
        }
        match hist_sections.last_mut() {
            None => global.insert(key, value, line, GLOBAL_KEYS)?,
            Some(section) => section.insert(key, value, line, HISTOGRAM_KEYS)?,
        }
    }

    // Pass 2: typed assembly and cross-checks.
    let (name, _) = global.require("name")?;
    let strategy = build_strategy(&mut global)?;
    let (n_agents_raw, n_agents_line) = global.require("n_agents")?;
    let n_agents = parse_u64("n_agents", &n_agents_raw, n_agents_line)?;
    if n_agents == 0 {
        return Err(ConfigError::semantic("n_agents", "must be >= 1"));
    }
    let (n_days_raw, n_days_line) = global.require("n_days")?;
    let n_days = parse_u64("n_days", &n_days_raw, n_days_line)?;
    if n_days == 0 {
        return Err(ConfigError::semantic("n_days", "must be >= 1"));
    }
    let (seed_raw, seed_line) = global.require("seed")?;
    let seed = parse_u64("seed", &seed_raw, seed_line)?;
    let output_dir = global
        .take("out_dir")
        .map(|(dir, _)| PathBuf::from(dir))
        .unwrap_or_else(|| PathBuf::from("."));

    if hist_sections.is_empty() {
        return Err(ConfigError::semantic(
            "histogram",
            "at least one [histogram] section is required",
        ));
    }
    let mut histograms = Vec::with_capacity(hist_sections.len());
    for mut section in hist_sections {
        histograms.push(build_histogram_request(&mut section, n_days)?);
    }
    for (i, a) in histograms.iter().enumerate() {
        for b in &histograms[i + 1..] {
            if a.target == b.target {
                return Err(ConfigError::semantic(
                    "target",
                    format!(
                        "duplicate histogram target '{}' would overwrite its own output",
                        a.target.as_str()
                    ),
                ));
            }
        }
    }

    Ok(ExperimentSpec {
        name,
        config: SimulationConfig {
            strategy,
            n_agents,
            n_days,
            seed,
        },
        histograms,
        output_dir,
    })
}

fn build_strategy(global: &mut Section) -> Result<Strategy, ConfigError> {
    let (kind, _) = global.require("strategy")?;
    let mut param = |key: &str| -> Result<f64, ConfigError> {
        let (raw, line) = global.require(key)?;
        parse_f64(key, &raw, line)
    };
    let strategy = match kind.as_str() {
        "avoid_crowd" => Strategy::AvoidCrowd,
        "random" => Strategy::Random,
        "follow_crowd" => Strategy::FollowCrowd { epsilon: param("epsilon")? },
        "fixed_preference" => Strategy::FixedPreference { alpha: param("alpha")? },
        "random_preference" => Strategy::RandomPreference { alpha_abs: param("alpha_abs")? },
        "history_weighted" => Strategy::HistoryWeighted {
            gamma: param("gamma")?,
            delta: param("delta")?,
        },
        other => {
            return Err(ConfigError::semantic(
                "strategy",
                format!("unknown strategy '{other}'"),
            ))
        }
    };
    // A parameter belonging to a different strategy is a config mistake, not
    // something to silently ignore.
    for &key in STRATEGY_PARAM_KEYS {
        if global.take(key).is_some() {
            return Err(ConfigError::semantic(
                key,
                format!("not a parameter of strategy '{kind}'"),
            ));
        }
    }
    validate_strategy(strategy).map_err(|e| match e {
        CoreError::InvalidParameter { field, .. } => ConfigError::semantic(field, e.to_string()),
        other => ConfigError::semantic("strategy", other.to_string()),
    })?;
    Ok(strategy)
}

fn build_histogram_request(
    section: &mut Section,
    n_days: u64,
) -> Result<HistogramRequest, ConfigError> {
    let (target_raw, _) = section.require("target")?;
    let target = match target_raw.as_str() {
        "fixed_points" => HistogramTarget::FixedPoints,
        "ratios_a" => HistogramTarget::RatiosA,
        "ratios_b" => HistogramTarget::RatiosB,
        other => {
            return Err(ConfigError::semantic(
                "target",
                format!("unknown target '{other}'"),
            ))
        }
    };
    if target.is_ratio() && n_days < 2 {
        return Err(ConfigError::semantic("target", "ratios require n_days >= 2"));
    }

    let (binning_raw, _) = section.require("binning")?;
    let (lo_raw, lo_line) = section.require("lo")?;
    let lo = parse_f64("lo", &lo_raw, lo_line)?;
    let (hi_raw, hi_line) = section.require("hi")?;
    let hi = parse_f64("hi", &hi_raw, hi_line)?;
    let (bins_raw, bins_line) = section.require("bins")?;
    let n_bins = parse_u64("bins", &bins_raw, bins_line)? as usize;
    let binning = match binning_raw.as_str() {
        "linear" => Binning::Linear { lo, hi, n_bins },
        "log" => Binning::Logarithmic { lo, hi, n_bins },
        other => {
            return Err(ConfigError::semantic(
                "binning",
                format!("unknown binning '{other}', expected 'linear' or 'log'"),
            ))
        }
    };
    binning.validate().map_err(|e| match e {
        CoreError::InvalidParameter { field, .. } => {
            let key = if field == "n_bins" { "bins" } else { field };
            ConfigError::semantic(key, e.to_string())
        }
        other => ConfigError::semantic("binning", other.to_string()),
    })?;

    let fit_min = section.take("fit_min");
    let fit_max = section.take("fit_max");
    let fit_range = match (fit_min, fit_max) {
        (None, None) => None,
        (Some((min_raw, min_line)), Some((max_raw, max_line))) => {
            if !matches!(binning, Binning::Logarithmic { .. }) {
                return Err(ConfigError::semantic(
                    "fit_min",
                    "power-law fits need binning = log",
                ));
            }
            let z_min = parse_f64("fit_min", &min_raw, min_line)?;
            let z_max = parse_f64("fit_max", &max_raw, max_line)?;
            if !(z_min >= 1.0) {
                return Err(ConfigError::semantic("fit_min", "must be >= 1"));
            }
            if !(z_max > z_min) {
                return Err(ConfigError::semantic("fit_max", "must be > fit_min"));
            }
            Some((z_min, z_max))
        }
        _ => {
            return Err(ConfigError::semantic(
                "fit_min",
                "fit_min and fit_max must be given together",
            ))
        }
    };

    Ok(HistogramRequest {
        target,
        binning,
        fit_range,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1_REFERENCE: &str = "\
# Flat fixed-point reference line.
name = fig1-ref
strategy = follow_crowd
epsilon = 1
n_agents = 5000
n_days = 40000
seed = 1

[histogram]
target = fixed_points
binning = linear
lo = 0
hi = 1
bins = 50
";

    #[test]
    fn parses_a_full_experiment() {
        let spec = parse_config(FIG1_REFERENCE).unwrap();
        assert_eq!(spec.name, "fig1-ref");
        assert_eq!(spec.config.strategy, Strategy::FollowCrowd { epsilon: 1.0 });
        assert_eq!(spec.config.n_agents, 5000);
        assert_eq!(spec.config.n_days, 40_000);
        assert_eq!(spec.config.seed, 1);
        assert_eq!(spec.output_dir, PathBuf::from("."));
        assert_eq!(spec.histograms.len(), 1);
        assert_eq!(spec.histograms[0].target, HistogramTarget::FixedPoints);
        assert_eq!(
            spec.histograms[0].binning,
            Binning::Linear { lo: 0.0, hi: 1.0, n_bins: 50 }
        );
        assert_eq!(spec.histograms[0].fit_range, None);
    }

    #[test]
    fn parses_fit_window_and_out_dir() {
        let text = "\
name = tail
strategy = fixed_preference
alpha = 0
n_agents = 100
n_days = 1000
seed = 7
out_dir = results

[histogram]
target = ratios_a
binning = log
lo = 1
hi = 100
bins = 40
fit_min = 1
fit_max = 30
";
        let spec = parse_config(text).unwrap();
        assert_eq!(spec.output_dir, PathBuf::from("results"));
        assert_eq!(spec.histograms[0].fit_range, Some((1.0, 30.0)));
        assert!(matches!(
            spec.histograms[0].binning,
            Binning::Logarithmic { .. }
        ));
    }

    #[test]
    fn missing_strategy_parameter_is_reported_by_name() {
        let text = "\
name = x
strategy = fixed_preference
n_agents = 10
n_days = 10
seed = 1

[histogram]
target = fixed_points
binning = linear
lo = 0
hi = 1
bins = 10
";
        let err = parse_config(text).unwrap_err();
        assert_eq!(
            err,
            ConfigError::semantic("alpha", "required in the global section")
        );
    }

    #[test]
    fn foreign_strategy_parameter_is_rejected() {
        let text = "\
name = x
strategy = follow_crowd
epsilon = 1
alpha = 0.3
n_agents = 10
n_days = 10
seed = 1

[histogram]
target = fixed_points
binning = linear
lo = 0
hi = 1
bins = 10
";
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "alpha"));
    }

    #[test]
    fn out_of_range_parameter_names_the_key() {
        let text = "\
name = x
strategy = fixed_preference
alpha = 1.5
n_agents = 10
n_days = 10
seed = 1

[histogram]
target = fixed_points
binning = linear
lo = 0
hi = 1
bins = 10
";
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "alpha"));
        assert!(err.to_string().contains("alpha"));
    }

    #[test]
    fn history_weighted_roundtrip() {
        let text = "\
name = x
strategy = history_weighted
gamma = 0.7
delta = 1.1
n_agents = 10
n_days = 10
seed = 1

[histogram]
target = fixed_points
binning = linear
lo = 0
hi = 1
bins = 10
";
        let spec = parse_config(text).unwrap();
        assert_eq!(
            spec.config.strategy,
            Strategy::HistoryWeighted { gamma: 0.7, delta: 1.1 }
        );
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let err = parse_config("name = x\nstrategy follow_crowd\n").unwrap_err();
        assert_eq!(
            err,
            ConfigError::Syntax {
                line: 2,
                message: "expected 'key = value', got 'strategy follow_crowd'".to_string()
            }
        );

        let text = "\
name = x
strategy = random
n_agents = 10
n_days = 10
seed = twelve
";
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 5, .. }));

        let err = parse_config("name = x\n[histgram]\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 2, .. }));

        let err = parse_config("name = x\nname = y\n").unwrap_err();
        assert!(matches!(err, ConfigError::Syntax { line: 2, .. }));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let err = parse_config("name = x\ncolor = blue\n").unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "color"));
    }

    #[test]
    fn ratios_need_at_least_two_days() {
        let text = "\
name = x
strategy = random
n_agents = 10
n_days = 1
seed = 1

[histogram]
target = ratios_a
binning = log
lo = 1
hi = 100
bins = 10
";
        let err = parse_config(text).unwrap_err();
        assert_eq!(
            err,
            ConfigError::semantic("target", "ratios require n_days >= 2")
        );
    }

    #[test]
    fn duplicate_targets_are_rejected() {
        let text = "\
name = x
strategy = random
n_agents = 10
n_days = 10
seed = 1

[histogram]
target = fixed_points
binning = linear
lo = 0
hi = 1
bins = 10

[histogram]
target = fixed_points
binning = linear
lo = 0
hi = 1
bins = 20
";
        let err = parse_config(text).unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "target"));
    }

    #[test]
    fn fit_window_constraints() {
        let base = "\
name = x
strategy = random
n_agents = 10
n_days = 10
seed = 1

[histogram]
target = fixed_points
binning = linear
lo = 0
hi = 1
bins = 10
";
        let with_fit = format!("{base}fit_min = 1\nfit_max = 5\n");
        let err = parse_config(&with_fit).unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "fit_min"));

        let log_base = base.replace(
            "binning = linear\nlo = 0\nhi = 1",
            "binning = log\nlo = 1\nhi = 100",
        );
        let only_min = format!("{log_base}fit_min = 1\n");
        let err = parse_config(&only_min).unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "fit_min"));

        let bad_min = format!("{log_base}fit_min = 0.5\nfit_max = 5\n");
        let err = parse_config(&bad_min).unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "fit_min"));

        let bad_max = format!("{log_base}fit_min = 2\nfit_max = 2\n");
        let err = parse_config(&bad_max).unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "fit_max"));
    }

    #[test]
    fn missing_histogram_section_is_rejected() {
        let err = parse_config("name = x\nstrategy = random\nn_agents = 1\nn_days = 1\nseed = 0\n")
            .unwrap_err();
        assert!(matches!(err, ConfigError::Semantic { ref key, .. } if key == "histogram"));
    }
}
