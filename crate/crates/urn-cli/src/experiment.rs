//! Run a parsed experiment and write its outputs.
//!
//! Every experiment writes `<name>.meta.csv` (the config echo) plus one
//! `<name>.<target>.csv` per histogram and `<name>.<target>.fit.csv` per
//! requested tail fit, all into the experiment's output directory. Floats
//! are rendered with 12 significant digits in scientific notation, so a
//! given run produces byte-identical files on every platform and thread
//! count.

use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use urn_core::simulate::{run_ensemble, EnsembleResult};
use urn_core::stats::{
    build_histogram, fit_powerlaw_tail, queue_ratio_series, Histogram, Side, SlopeFit,
};
use urn_core::strategy::Strategy;

use crate::config::{ExperimentSpec, HistogramTarget};

/// What a run produced, for reporting and tests.
#[derive(Debug)]
pub struct RunReport {
    pub files: Vec<PathBuf>,
    pub ensemble: EnsembleResult,
}

pub fn run_experiment(spec: &ExperimentSpec) -> Result<RunReport> {
    fs::create_dir_all(&spec.output_dir).with_context(|| {
        format!("cannot create output directory {}", spec.output_dir.display())
    })?;
    let ensemble = run_ensemble(&spec.config).context("simulation failed")?;

    let mut files = Vec::new();
    let meta_path = spec.output_dir.join(format!("{}.meta.csv", spec.name));
    fs::write(&meta_path, render_meta(spec))
        .with_context(|| format!("cannot write {}", meta_path.display()))?;
    files.push(meta_path);

    for request in &spec.histograms {
        let (samples, skipped) = collect_samples(&ensemble, request.target)?;
        let hist = build_histogram(&samples, request.binning)
            .with_context(|| format!("histogram for {}", request.target.as_str()))?;
        let path = spec
            .output_dir
            .join(format!("{}.{}.csv", spec.name, request.target.as_str()));
        fs::write(&path, render_histogram(&hist))
            .with_context(|| format!("cannot write {}", path.display()))?;
        println!(
            "wrote {} ({} samples, {} out of range, {} zero-denominator pairs skipped)",
            path.display(),
            hist.n_samples,
            hist.out_of_range,
            skipped
        );
        files.push(path);

        if let Some(fit_range) = request.fit_range {
            let fit = fit_powerlaw_tail(&hist, fit_range)
                .with_context(|| format!("tail fit for {}", request.target.as_str()))?;
            let fit_path = spec
                .output_dir
                .join(format!("{}.{}.fit.csv", spec.name, request.target.as_str()));
            fs::write(&fit_path, render_fit(&fit))
                .with_context(|| format!("cannot write {}", fit_path.display()))?;
            println!(
                "wrote {} (slope {:.4} +/- {:.4} over {} bins)",
                fit_path.display(),
                fit.slope,
                fit.stderr,
                fit.n_points
            );
            files.push(fit_path);
        }
    }

    Ok(RunReport { files, ensemble })
}

fn collect_samples(
    ensemble: &EnsembleResult,
    target: HistogramTarget,
) -> Result<(Vec<f64>, usize)> {
    match target {
        HistogramTarget::FixedPoints => Ok((ensemble.fixed_points(), 0)),
        HistogramTarget::RatiosA | HistogramTarget::RatiosB => {
            let side = if target == HistogramTarget::RatiosA {
                Side::A
            } else {
                Side::B
            };
            let series = queue_ratio_series(&ensemble.days, side).context("ratio series")?;
            Ok((series.ratios, series.skipped_zero_denominators))
        }
    }
}

/// Render a float with 12 significant digits, locale- and platform-stable.
fn fmt_float(x: f64) -> String {
    format!("{x:.11e}")
}

fn render_meta(spec: &ExperimentSpec) -> String {
    let mut out = String::from("key,value\n");
    let _ = writeln!(out, "name,{}", spec.name);
    let (kind, params): (&str, Vec<(&str, f64)>) = match spec.config.strategy {
        Strategy::AvoidCrowd => ("avoid_crowd", vec![]),
        Strategy::Random => ("random", vec![]),
        Strategy::FollowCrowd { epsilon } => ("follow_crowd", vec![("epsilon", epsilon)]),
        Strategy::FixedPreference { alpha } => ("fixed_preference", vec![("alpha", alpha)]),
        Strategy::RandomPreference { alpha_abs } => {
            ("random_preference", vec![("alpha_abs", alpha_abs)])
        }
        Strategy::HistoryWeighted { gamma, delta } => {
            ("history_weighted", vec![("gamma", gamma), ("delta", delta)])
        }
    };
    let _ = writeln!(out, "strategy,{kind}");
    for (key, value) in params {
        let _ = writeln!(out, "{key},{}", fmt_float(value));
    }
    let _ = writeln!(out, "n_agents,{}", spec.config.n_agents);
    let _ = writeln!(out, "n_days,{}", spec.config.n_days);
    let _ = writeln!(out, "seed,{}", spec.config.seed);
    out
}

fn render_histogram(hist: &Histogram) -> String {
    let mut out = String::from("bin_lo,bin_hi,count,density\n");
    for k in 0..hist.counts.len() {
        let _ = writeln!(
            out,
            "{},{},{},{}",
            fmt_float(hist.edges[k]),
            fmt_float(hist.edges[k + 1]),
            hist.counts[k],
            fmt_float(hist.density[k])
        );
    }
    out
}

fn render_fit(fit: &SlopeFit) -> String {
    let mut out = String::from("slope,stderr,intercept,n_points,z_min,z_max\n");
    let _ = writeln!(
        out,
        "{},{},{},{},{},{}",
        fmt_float(fit.slope),
        fmt_float(fit.stderr),
        fmt_float(fit.intercept),
        fit.n_points,
        fmt_float(fit.fit_range.0),
        fmt_float(fit.fit_range.1)
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_is_twelve_significant_digits() {
        assert_eq!(fmt_float(0.5), "5.00000000000e-1");
        assert_eq!(fmt_float(1.0), "1.00000000000e0");
        assert_eq!(fmt_float(-2.0), "-2.00000000000e0");
        assert_eq!(fmt_float(0.0163), "1.63000000000e-2");
        assert_eq!(fmt_float(123456.789), "1.23456789000e5");
    }

    #[test]
    fn float_format_round_trips_through_parse() {
        for &x in &[0.5, 1.0 / 3.0, 2.0f64.sqrt(), 1e-9, 123456.789, 0.99999] {
            let rendered = fmt_float(x);
            let parsed: f64 = rendered.parse().unwrap();
            assert_eq!(fmt_float(parsed), rendered);
        }
    }
}
