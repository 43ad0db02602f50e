//! Histograms, tail fits, and summary statistics for ensemble output.

use crate::error::{Error, Result};
use crate::state::DayResult;

/// Which restaurant's queue a ratio series tracks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    A,
    B,
}

/// Consecutive-day queue-length ratios `q_i / q_{i+1}` for one side.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSeries {
    pub ratios: Vec<f64>,
    /// Pairs dropped because the denominator day had an empty queue; a zero
    /// numerator over a nonzero denominator contributes an ordinary 0.0.
    pub skipped_zero_denominators: usize,
}

/// Ratios of consecutive days' queue lengths, in day order.
pub fn queue_ratio_series(days: &[DayResult], side: Side) -> Result<RatioSeries> {
    if days.len() < 2 {
        return Err(Error::Contract("ratio series needs at least two days"));
    }
    let mut ratios = Vec::with_capacity(days.len() - 1);
    let mut skipped = 0usize;
    for pair in days.windows(2) {
        let (num, den) = match side {
            Side::A => (pair[0].q_a, pair[1].q_a),
            Side::B => (pair[0].q_b, pair[1].q_b),
        };
        if den == 0 {
            skipped += 1;
        } else {
            ratios.push(num as f64 / den as f64);
        }
    }
    Ok(RatioSeries {
        ratios,
        skipped_zero_denominators: skipped,
    })
}

/// Bin layout over `[lo, hi]`. Bins are half-open `[b_k, b_{k+1})`, except
/// the last, which closes at `hi`; anything outside `[lo, hi]` (NaN
/// included) lands in the histogram's out-of-range tally.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Binning {
    /// Equal-width bins.
    Linear { lo: f64, hi: f64, n_bins: usize },
    /// Equal-log-width bins; requires `lo > 0`.
    Logarithmic { lo: f64, hi: f64, n_bins: usize },
}

impl Binning {
    pub fn n_bins(self) -> usize {
        match self {
            Binning::Linear { n_bins, .. } | Binning::Logarithmic { n_bins, .. } => n_bins,
        }
    }

    pub fn bounds(self) -> (f64, f64) {
        match self {
            Binning::Linear { lo, hi, .. } | Binning::Logarithmic { lo, hi, .. } => (lo, hi),
        }
    }

    pub fn validate(self) -> Result<()> {
        let (lo, hi) = self.bounds();
        if self.n_bins() == 0 {
            return Err(Error::InvalidParameter {
                field: "n_bins",
                bound: "n_bins >= 1",
                value: 0.0,
            });
        }
        if !lo.is_finite() || !hi.is_finite() || !(hi > lo) {
            return Err(Error::InvalidParameter {
                field: "hi",
                bound: "lo < hi, both finite",
                value: hi,
            });
        }
        if matches!(self, Binning::Logarithmic { .. }) && !(lo > 0.0) {
            return Err(Error::InvalidParameter {
                field: "lo",
                bound: "lo > 0 for logarithmic bins",
                value: lo,
            });
        }
        Ok(())
    }

    /// The `n_bins + 1` edges; the first is exactly `lo`, the last exactly
    /// `hi`, and interior edges are interpolated (in log space for
    /// logarithmic bins) so that binning never depends on accumulated
    /// rounding.
    pub fn edges(self) -> Vec<f64> {
        let n = self.n_bins();
        let (lo, hi) = self.bounds();
        (0..=n)
            .map(|i| {
                if i == 0 {
                    lo
                } else if i == n {
                    hi
                } else {
                    let t = i as f64 / n as f64;
                    match self {
                        Binning::Linear { .. } => lo + (hi - lo) * t,
                        Binning::Logarithmic { .. } => {
                            (lo.ln() + (hi.ln() - lo.ln()) * t).exp()
                        }
                    }
                }
            })
            .collect()
    }
}

/// A binned sample with densities.
#[derive(Debug, Clone, PartialEq)]
pub struct Histogram {
    pub binning: Binning,
    /// `n_bins + 1` edges, ascending.
    pub edges: Vec<f64>,
    pub counts: Vec<u64>,
    /// `count / (n_samples * bin_width)`, where `n_samples` counts every
    /// sample offered, in range or not; densities then integrate to the
    /// in-range fraction of the sample.
    pub density: Vec<f64>,
    pub out_of_range: u64,
    pub n_samples: u64,
}

impl Histogram {
    pub fn in_range_count(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Geometric center of bin `k`, the natural abscissa on a log axis.
    pub fn geometric_center(&self, k: usize) -> f64 {
        (self.edges[k] * self.edges[k + 1]).sqrt()
    }
}

/// Bin `samples` according to `binning`.
pub fn build_histogram(samples: &[f64], binning: Binning) -> Result<Histogram> {
    binning.validate()?;
    let edges = binning.edges();
    let n = binning.n_bins();
    let mut counts = vec![0u64; n];
    let mut out_of_range = 0u64;
    for &x in samples {
        match bin_index(&edges, x) {
            Some(k) => counts[k] += 1,
            None => out_of_range += 1,
        }
    }
    let total = samples.len() as f64;
    let density = counts
        .iter()
        .zip(edges.windows(2))
        .map(|(&c, e)| {
            if c == 0 {
                0.0
            } else {
                c as f64 / (total * (e[1] - e[0]))
            }
        })
        .collect();
    Ok(Histogram {
        binning,
        edges,
        counts,
        density,
        out_of_range,
        n_samples: samples.len() as u64,
    })
}

/// Index of the bin holding `x`, or `None` when out of range. The last edge
/// belongs to the last bin.
fn bin_index(edges: &[f64], x: f64) -> Option<usize> {
    let last = edges.len() - 1;
    if x.is_nan() || x < edges[0] || x > edges[last] {
        return None;
    }
    if x == edges[last] {
        return Some(last - 1);
    }
    // Number of edges <= x is k+1 exactly when x lies in [edge_k, edge_{k+1}).
    Some(edges.partition_point(|&e| e <= x) - 1)
}

/// Least-squares power-law fit of a histogram tail.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeFit {
    /// Slope of `ln density` against `ln z` — the power-law exponent.
    pub slope: f64,
    pub intercept: f64,
    /// Standard error of the slope.
    pub stderr: f64,
    pub n_points: usize,
    pub fit_range: (f64, f64),
}

/// Fit `ln density = intercept + slope * ln z` over the nonzero bins of a
/// logarithmic histogram whose geometric centers fall inside `fit_range`
/// (given as `(z_min, z_max)` with `z_min >= 1`, the tail side of a ratio
/// distribution).
pub fn fit_powerlaw_tail(hist: &Histogram, fit_range: (f64, f64)) -> Result<SlopeFit> {
    if !matches!(hist.binning, Binning::Logarithmic { .. }) {
        return Err(Error::Contract("power-law fits need logarithmic bins"));
    }
    let (z_min, z_max) = fit_range;
    if !(z_min >= 1.0) {
        return Err(Error::InvalidParameter {
            field: "z_min",
            bound: "z_min >= 1",
            value: z_min,
        });
    }
    if !(z_max > z_min) {
        return Err(Error::InvalidParameter {
            field: "z_max",
            bound: "z_max > z_min",
            value: z_max,
        });
    }
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for k in 0..hist.counts.len() {
        if hist.counts[k] == 0 {
            continue;
        }
        let center = hist.geometric_center(k);
        if center < z_min || center > z_max {
            continue;
        }
        xs.push(center.ln());
        ys.push(hist.density[k].ln());
    }
    let n_points = xs.len();
    if n_points < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: n_points,
        });
    }
    let n = n_points as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - mean_x) * (x - mean_x);
        sxy += (x - mean_x) * (y - mean_y);
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let sse: f64 = xs
        .iter()
        .zip(&ys)
        .map(|(x, y)| {
            let r = y - (intercept + slope * x);
            r * r
        })
        .sum();
    let stderr = (sse / (n - 2.0) / sxx).sqrt();
    Ok(SlopeFit {
        slope,
        intercept,
        stderr,
        n_points,
        fit_range,
    })
}

/// Kolmogorov–Smirnov statistic of `samples` against U(0, 1):
/// `sup_x |F_empirical(x) - x|`. Samples must lie in `[0, 1]`.
pub fn uniformity_ks(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Contract("KS statistic needs at least one sample"));
    }
    let mut sorted = samples.to_vec();
    sorted.sort_by(|a, b| a.partial_cmp(b).expect("KS samples must not be NaN"));
    let n = sorted.len() as f64;
    let mut sup = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let below = (x - i as f64 / n).abs();
        let above = ((i + 1) as f64 / n - x).abs();
        sup = sup.max(below).max(above);
    }
    Ok(sup)
}

/// Basic moments of a sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Summary {
    pub mean: f64,
    /// Population standard deviation (divides by `n`).
    pub std: f64,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

pub fn summary(samples: &[f64]) -> Result<Summary> {
    if samples.is_empty() {
        return Err(Error::Contract("summary needs at least one sample"));
    }
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let mut min = f64::INFINITY;
    let mut max = f64::NEG_INFINITY;
    for &x in samples {
        min = min.min(x);
        max = max.max(x);
    }
    Ok(Summary {
        mean,
        std: var.sqrt(),
        min,
        max,
        count: samples.len(),
    })
}

/// Fraction of samples strictly above `threshold`.
pub fn fraction_above(samples: &[f64], threshold: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Contract("fraction needs at least one sample"));
    }
    let hits = samples.iter().filter(|&&x| x > threshold).count();
    Ok(hits as f64 / samples.len() as f64)
}

/// Fraction of samples strictly below `threshold`.
pub fn fraction_below(samples: &[f64], threshold: f64) -> Result<f64> {
    if samples.is_empty() {
        return Err(Error::Contract("fraction needs at least one sample"));
    }
    let hits = samples.iter().filter(|&&x| x < threshold).count();
    Ok(hits as f64 / samples.len() as f64)
}
