//! Log-normal shadow fading: moment estimates of dB-domain received power,
//! histogram/density series, and a Kolmogorov-Smirnov check of the fitted
//! Gaussian.
//!
//! Samples are treated as independent draws from a stationary local area; no
//! distance-dependent trend is removed.

use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::error::{domain, Result};
use crate::stats::{ks_statistic, normal_cdf};

/// Default bin width, matching the 1 dB RSRP reporting resolution.
pub const DEFAULT_BIN_WIDTH_DB: f64 = 1.0;
/// Below this count `fit_shadowing` refuses to fit.
pub const MIN_FIT_SAMPLES: usize = 30;
/// Below this count a fit succeeds but is flagged as under-sampled.
pub const RECOMMENDED_SAMPLES: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowFit {
    pub mu_dbm: f64,
    pub sigma_db: f64,
    pub n: usize,
}

/// Binned samples. Bin `i` covers `[bin_edges[i], bin_edges[i + 1])`.
#[derive(Debug, Clone, PartialEq)]
pub struct HistogramSeries {
    pub bin_edges: Vec<f64>,
    pub counts: Vec<u64>,
    pub densities: Vec<f64>,
}

impl HistogramSeries {
    pub fn bin_count(&self) -> usize {
        self.counts.len()
    }

    pub fn bin_width(&self, i: usize) -> f64 {
        self.bin_edges[i + 1] - self.bin_edges[i]
    }

    pub fn bin_center(&self, i: usize) -> f64 {
        0.5 * (self.bin_edges[i] + self.bin_edges[i + 1])
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }
}

fn check_finite(samples: &[f64]) -> Result<()> {
    match samples.iter().position(|x| !x.is_finite()) {
        Some(i) => domain(format!("sample {i} is not finite")),
        None => Ok(()),
    }
}

pub fn estimate_mean(samples: &[f64]) -> Result<f64> {
    if samples.is_empty() {
        return domain("mean of an empty sample set");
    }
    check_finite(samples)?;
    Ok(samples.iter().sum::<f64>() / samples.len() as f64)
}

/// Unbiased sample variance (divisor `N - 1`).
pub fn estimate_variance(samples: &[f64]) -> Result<f64> {
    if samples.len() < 2 {
        return domain(format!("variance needs at least 2 samples, got {}", samples.len()));
    }
    let mu = estimate_mean(samples)?;
    let ss: f64 = samples.iter().map(|x| (x - mu) * (x - mu)).sum();
    Ok(ss / (samples.len() - 1) as f64)
}

pub fn gaussian_pdf(x: f64, mu: f64, sigma: f64) -> Result<f64> {
    if !(sigma > 0.0) {
        return domain(format!("standard deviation {sigma} must be > 0"));
    }
    let z = (x - mu) / sigma;
    Ok((-0.5 * z * z).exp() / (sigma * (2.0 * PI).sqrt()))
}

/// Bins `samples` into left-closed, right-open bins whose edges are integer
/// multiples of `bin_width`. Empty interior bins are kept so the series is
/// contiguous.
pub fn build_histogram(samples: &[f64], bin_width: f64) -> Result<HistogramSeries> {
    if samples.is_empty() {
        return domain("histogram of an empty sample set");
    }
    if !(bin_width > 0.0 && bin_width.is_finite()) {
        return domain(format!("bin width {bin_width} must be > 0"));
    }
    check_finite(samples)?;

    let edge = |k: i64| k as f64 * bin_width;
    let index = |x: f64| {
        let mut k = (x / bin_width).floor() as i64;
        // floor(x / w) can land one bin off when x sits on an edge
        if x < edge(k) {
            k -= 1;
        } else if x >= edge(k + 1) {
            k += 1;
        }
        k
    };

    let indices: Vec<i64> = samples.iter().map(|&x| index(x)).collect();
    let lo = *indices.iter().min().expect("non-empty");
    let hi = *indices.iter().max().expect("non-empty");
    let bins = (hi - lo + 1) as usize;

    let mut counts = vec![0u64; bins];
    for k in indices {
        counts[(k - lo) as usize] += 1;
    }
    let bin_edges: Vec<f64> = (lo..=hi + 1).map(edge).collect();
    let n = samples.len() as f64;
    let densities = counts
        .iter()
        .zip(bin_edges.windows(2))
        .map(|(&c, e)| c as f64 / (n * (e[1] - e[0])))
        .collect();
    Ok(HistogramSeries { bin_edges, counts, densities })
}

pub fn ks_statistic_gaussian(samples: &[f64], mu: f64, sigma: f64) -> Result<f64> {
    if samples.len() < 2 {
        return domain(format!("KS statistic needs at least 2 samples, got {}", samples.len()));
    }
    if !(sigma > 0.0) {
        return domain(format!("standard deviation {sigma} must be > 0"));
    }
    check_finite(samples)?;
    Ok(ks_statistic(samples, |x| normal_cdf(x, mu, sigma)))
}

/// Result of a full shadow-fading fit.
#[derive(Debug, Clone, PartialEq)]
pub struct ShadowReport {
    pub fit: ShadowFit,
    pub histogram: HistogramSeries,
    pub ks: f64,
}

impl ShadowReport {
    /// True when the sample count is below the recommended 500.
    pub fn undersampled(&self) -> bool {
        self.fit.n < RECOMMENDED_SAMPLES
    }

    /// Flat `key=value` lines.
    pub fn to_report_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={}", self.fit.n);
        let _ = writeln!(out, "mu_dbm={}", self.fit.mu_dbm);
        let _ = writeln!(out, "sigma_db={}", self.fit.sigma_db);
        let _ = writeln!(out, "variance_db2={}", self.fit.sigma_db * self.fit.sigma_db);
        let _ = writeln!(out, "ks={}", self.ks);
        let _ = writeln!(out, "ks_critical_99={}", crate::stats::ks_critical_99(self.fit.n));
        let _ = writeln!(out, "bin_width_db={}", self.histogram.bin_width(0));
        let _ = writeln!(out, "undersampled={}", self.undersampled());
        out
    }

    /// `bin_center,count,density,model_density` rows for plotting.
    pub fn to_series_csv(&self) -> String {
        let mut out = String::from("bin_center,count,density,model_density\n");
        let h = &self.histogram;
        for i in 0..h.bin_count() {
            let c = h.bin_center(i);
            let model = gaussian_pdf(c, self.fit.mu_dbm, self.fit.sigma_db).unwrap_or(0.0);
            let _ = writeln!(out, "{},{},{},{}", c, h.counts[i], h.densities[i], model);
        }
        out
    }
}

/// Moment-matched Gaussian fit with histogram and KS statistic.
///
/// Requires at least 30 samples; a zero spread is rejected because no
/// density overlay can be built from it.
pub fn fit_shadowing(samples: &[f64], bin_width_db: f64) -> Result<ShadowReport> {
    if samples.len() < MIN_FIT_SAMPLES {
        return domain(format!(
            "shadow fit needs at least {MIN_FIT_SAMPLES} samples, got {}",
            samples.len()
        ));
    }
    let mu = estimate_mean(samples)?;
    let sigma = estimate_variance(samples)?.sqrt();
    // fails for sigma = 0
    gaussian_pdf(mu, mu, sigma)?;
    let histogram = build_histogram(samples, bin_width_db)?;
    let ks = ks_statistic_gaussian(samples, mu, sigma)?;
    Ok(ShadowReport {
        fit: ShadowFit { mu_dbm: mu, sigma_db: sigma, n: samples.len() },
        histogram,
        ks,
    })
}
