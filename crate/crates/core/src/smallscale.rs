//! Small-scale fading.
//!
//! The synthesizer sums `N` equal-power plane waves with uniformly random
//! arrival angles and path delays, probed by a continuous wave (`s(t) = 1`).
//! Path `n` contributes `a_n exp(-j phi_n(t))` with
//! `phi_n(t) = 2 pi [(f_c + f_D,n) tau_n - f_D,n t]` and `f_D,n = f_m cos(theta_n)`.
//!
//! Two Rayleigh conventions meet here. The envelope density is written in
//! terms of the mean envelope power `omega = E|r|^2`:
//! `p(x) = (2x / omega) exp(-x^2 / omega)`. The fitted scale is the usual
//! Rayleigh `sigma_R` with `omega = 2 sigma_R^2`. [`RayleighFit`] carries both.

use std::f64::consts::TAU;
use std::fmt::Write as _;

use num_complex::{Complex32, Complex64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{domain, Error, Result};
use crate::stats::{ks_statistic, median};
use crate::SPEED_OF_LIGHT;

/// Default slot-detection threshold as a fraction of the median envelope.
pub const DEFAULT_NULL_THRESHOLD: f64 = 0.1;
/// Default path-delay bound. Keeps the channel flat for narrowband probes.
pub const DEFAULT_MAX_DELAY_S: f64 = 1e-6;
/// GSM TDMA slot, 15/26 ms.
pub const GSM_SLOT_S: f64 = 15.0 / 26.0 * 1e-3;

/// Complex baseband capture.
#[derive(Debug, Clone, PartialEq)]
pub struct IqStream {
    samples: Vec<Complex32>,
    sample_rate_hz: f64,
}

impl IqStream {
    pub fn new(samples: Vec<Complex32>, sample_rate_hz: f64) -> Result<Self> {
        if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
            return domain(format!("sample rate {sample_rate_hz} Hz must be > 0"));
        }
        if let Some(i) = samples.iter().position(|s| !s.re.is_finite() || !s.im.is_finite()) {
            return domain(format!("sample {i} is not finite"));
        }
        Ok(Self { samples, sample_rate_hz })
    }

    pub fn samples(&self) -> &[Complex32] {
        &self.samples
    }

    pub fn sample_rate_hz(&self) -> f64 {
        self.sample_rate_hz
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn duration_s(&self) -> f64 {
        self.samples.len() as f64 / self.sample_rate_hz
    }
}

/// Parameters of the sum-of-paths synthesizer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MultipathConfig {
    pub n_paths: usize,
    pub velocity_mps: f64,
    pub fc_hz: f64,
    /// Total envelope power, the sum of squared path amplitudes.
    pub omega: f64,
    pub max_delay_s: f64,
    pub seed: u64,
}

impl MultipathConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_paths < 1 {
            return domain("at least one path is required");
        }
        if !(self.velocity_mps >= 0.0 && self.velocity_mps.is_finite()) {
            return domain(format!("velocity {} m/s must be >= 0", self.velocity_mps));
        }
        if !(self.fc_hz > 0.0 && self.fc_hz.is_finite()) {
            return domain(format!("carrier {} Hz must be > 0", self.fc_hz));
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return domain(format!("envelope power {} must be > 0", self.omega));
        }
        if !(self.max_delay_s >= 0.0 && self.max_delay_s.is_finite()) {
            return domain(format!("delay bound {} s must be >= 0", self.max_delay_s));
        }
        Ok(())
    }

    pub fn max_doppler_hz(&self) -> f64 {
        max_doppler(self.velocity_mps, self.fc_hz)
    }
}

/// Doppler shift of a wave arriving at `theta_rad` from the direction of
/// motion. Positive when moving toward the arrival direction.
pub fn doppler_shift(velocity_mps: f64, fc_hz: f64, theta_rad: f64) -> f64 {
    max_doppler(velocity_mps, fc_hz) * theta_rad.cos()
}

pub fn max_doppler(velocity_mps: f64, fc_hz: f64) -> f64 {
    velocity_mps * fc_hz / SPEED_OF_LIGHT
}

#[derive(Debug, Clone, Copy)]
struct Path {
    amplitude: f64,
    doppler_hz: f64,
    /// `(f_c + f_D) tau` reduced to one cycle.
    phase_cycles: f64,
}

fn draw_paths(cfg: &MultipathConfig) -> Vec<Path> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let amplitude = (cfg.omega / cfg.n_paths as f64).sqrt();
    (0..cfg.n_paths)
        .map(|_| {
            let theta = rng.random_range(0.0..TAU);
            let tau = if cfg.max_delay_s > 0.0 { rng.random_range(0.0..=cfg.max_delay_s) } else { 0.0 };
            let doppler_hz = doppler_shift(cfg.velocity_mps, cfg.fc_hz, theta);
            Path { amplitude, doppler_hz, phase_cycles: ((cfg.fc_hz + doppler_hz) * tau).fract() }
        })
        .collect()
}

/// Samples the received complex envelope for `duration_s` at `sample_rate_hz`.
/// The same config (seed included) always yields the same stream.
pub fn simulate_envelope(cfg: &MultipathConfig, duration_s: f64, sample_rate_hz: f64) -> Result<IqStream> {
    cfg.validate()?;
    if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
        return domain(format!("sample rate {sample_rate_hz} Hz must be > 0"));
    }
    if !(duration_s > 0.0 && duration_s.is_finite()) {
        return domain(format!("duration {duration_s} s must be > 0"));
    }
    let n = (duration_s * sample_rate_hz).round();
    if n < 1.0 {
        return domain("duration * sample rate must be at least one sample");
    }
    let n = n as usize;
    let paths = draw_paths(cfg);

    let samples = (0..n)
        .map(|k| {
            let t = k as f64 / sample_rate_hz;
            let sum: Complex64 = paths
                .iter()
                .map(|p| {
                    // reduce to one cycle before scaling so long runs keep precision
                    let cycles = (p.phase_cycles - (p.doppler_hz * t).fract()).fract();
                    Complex64::from_polar(p.amplitude, -TAU * cycles)
                })
                .sum();
            Complex32::new(sum.re as f32, sum.im as f32)
        })
        .collect();
    IqStream::new(samples, sample_rate_hz)
}

/// Pointwise magnitude `sqrt(I^2 + Q^2)`.
pub fn envelope(stream: &IqStream) -> Vec<f64> {
    stream.samples.iter().map(|s| f64::from(s.re).hypot(f64::from(s.im))).collect()
}

/// Rayleigh density with mean power `omega_power`.
pub fn rayleigh_pdf(x: f64, omega_power: f64) -> Result<f64> {
    if !(omega_power > 0.0) {
        return domain(format!("envelope power {omega_power} must be > 0"));
    }
    if x < 0.0 || x.is_nan() {
        return domain(format!("envelope value {x} must be >= 0"));
    }
    Ok(2.0 * x / omega_power * (-x * x / omega_power).exp())
}

pub fn rayleigh_cdf(x: f64, omega_power: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        -(-x * x / omega_power).exp_m1()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayleighFit {
    pub sigma_scale: f64,
    pub omega_power: f64,
    pub n: usize,
    pub ks: f64,
}

impl RayleighFit {
    pub fn to_report_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "n={}", self.n);
        let _ = writeln!(out, "sigma_scale={}", self.sigma_scale);
        let _ = writeln!(out, "omega_power={}", self.omega_power);
        let _ = writeln!(out, "ks={}", self.ks);
        let _ = writeln!(out, "ks_critical_99={}", crate::stats::ks_critical_99(self.n));
        out
    }
}

/// Rayleigh scale from the mean squared envelope, `sqrt(sum r^2 / 2N)`, plus
/// the KS distance to the fitted CDF.
pub fn estimate_rayleigh_scale(env: &[f64]) -> Result<RayleighFit> {
    if env.len() < 2 {
        return domain(format!("Rayleigh fit needs at least 2 samples, got {}", env.len()));
    }
    if let Some(i) = env.iter().position(|r| !(r.is_finite() && *r >= 0.0)) {
        return domain(format!("envelope sample {i} is negative or not finite"));
    }
    let n = env.len();
    let mean_power = env.iter().map(|r| r * r).sum::<f64>() / n as f64;
    if mean_power <= 0.0 {
        return domain("envelope is identically zero");
    }
    let sigma_scale = (mean_power / 2.0).sqrt();
    let omega_power = 2.0 * sigma_scale * sigma_scale;
    let ks = ks_statistic(env, |x| rayleigh_cdf(x, omega_power));
    Ok(RayleighFit { sigma_scale, omega_power, n, ks })
}

/// Decodes interleaved little-endian `f32` I/Q pairs.
pub fn parse_iq_dat(bytes: &[u8], sample_rate_hz: f64) -> Result<IqStream> {
    if !bytes.len().is_multiple_of(8) {
        return Err(Error::Format {
            offset: bytes.len() - bytes.len() % 8,
            message: format!("truncated sample: {} trailing bytes", bytes.len() % 8),
        });
    }
    let mut samples = Vec::with_capacity(bytes.len() / 8);
    for (i, chunk) in bytes.chunks_exact(8).enumerate() {
        let re = f32::from_le_bytes(chunk[..4].try_into().expect("4 bytes"));
        let im = f32::from_le_bytes(chunk[4..].try_into().expect("4 bytes"));
        if !re.is_finite() || !im.is_finite() {
            return Err(Error::Format {
                offset: i * 8,
                message: format!("sample {i} is not finite"),
            });
        }
        samples.push(Complex32::new(re, im));
    }
    IqStream::new(samples, sample_rate_hz)
}

pub fn write_iq_dat(stream: &IqStream) -> Vec<u8> {
    let mut out = Vec::with_capacity(stream.len() * 8);
    for s in &stream.samples {
        out.extend_from_slice(&s.re.to_le_bytes());
        out.extend_from_slice(&s.im.to_le_bytes());
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlotEstimate {
    pub slot_duration_s: f64,
    /// Null midpoints in samples; may fall halfway between two samples.
    pub null_positions: Vec<f64>,
}

impl SlotEstimate {
    pub fn to_report_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "slot_duration_s={}", self.slot_duration_s);
        let _ = writeln!(out, "slot_duration_us={}", self.slot_duration_s * 1e6);
        let _ = writeln!(out, "nulls={}", self.null_positions.len());
        out
    }
}

/// Finds burst gaps as maximal runs below `threshold_fraction * median` and
/// returns the median spacing between consecutive run midpoints.
///
/// Runs touching either end of the capture are ignored: their true extent is
/// unknown, so their midpoint is biased.
pub fn detect_slots(env: &[f64], sample_rate_hz: f64, threshold_fraction: f64) -> Result<SlotEstimate> {
    if !(sample_rate_hz > 0.0 && sample_rate_hz.is_finite()) {
        return domain(format!("sample rate {sample_rate_hz} Hz must be > 0"));
    }
    if !(threshold_fraction > 0.0 && threshold_fraction < 1.0) {
        return domain(format!("threshold fraction {threshold_fraction} must be in (0, 1)"));
    }
    let Some(med) = median(env) else {
        return Err(Error::Detection("empty envelope".into()));
    };
    let threshold = threshold_fraction * med;

    let mut nulls = Vec::new();
    let mut start = None;
    for (i, &r) in env.iter().enumerate() {
        match (r < threshold, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if s > 0 {
                    nulls.push(0.5 * (s + i - 1) as f64);
                }
                start = None;
            }
            _ => {}
        }
    }

    if nulls.len() < 2 {
        return Err(Error::Detection(format!(
            "found {} interior null region(s), need at least 2",
            nulls.len()
        )));
    }
    let spacings: Vec<f64> = nulls.windows(2).map(|w| w[1] - w[0]).collect();
    let spacing = median(&spacings).expect("at least one spacing");
    Ok(SlotEstimate { slot_duration_s: spacing / sample_rate_hz, null_positions: nulls })
}

/// `x,empirical_density,model_density` rows comparing the envelope histogram
/// with the fitted Rayleigh density.
pub fn pdf_comparison_csv(env: &[f64], fit: &RayleighFit, bins: usize) -> Result<String> {
    let max = env.iter().copied().fold(0.0, f64::max);
    if bins == 0 || max <= 0.0 {
        return domain("need a positive envelope and at least one bin");
    }
    let hist = crate::shadowing::build_histogram(env, max / bins as f64)?;
    let mut out = String::from("x,empirical_density,model_density\n");
    for i in 0..hist.bin_count() {
        let x = hist.bin_center(i);
        let model = rayleigh_pdf(x.max(0.0), fit.omega_power)?;
        let _ = writeln!(out, "{},{},{}", x, hist.densities[i], model);
    }
    Ok(out)
}

/// `t_s,magnitude` rows.
pub fn envelope_csv(env: &[f64], sample_rate_hz: f64) -> String {
    let mut out = String::with_capacity(16 + env.len() * 24);
    out.push_str("t_s,magnitude\n");
    for (k, r) in env.iter().enumerate() {
        let _ = writeln!(out, "{},{}", k as f64 / sample_rate_hz, r);
    }
    out
}

/// Normalized autocovariance of `x` at integer `lag`.
pub fn autocorrelation(x: &[f64], lag: usize) -> f64 {
    let n = x.len();
    if lag >= n {
        return 0.0;
    }
    let mean = x.iter().sum::<f64>() / n as f64;
    let var: f64 = x.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n as f64;
    let cov: f64 = x[..n - lag]
        .iter()
        .zip(&x[lag..])
        .map(|(a, b)| (a - mean) * (b - mean))
        .sum::<f64>()
        / (n - lag) as f64;
    cov / var
}

/// Unit-period waveform helper for tests and examples: `1` during a burst and
/// `floor` inside gaps of `gap_s` centered on multiples of `period_s`.
pub fn synthetic_bursts(n: usize, sample_rate_hz: f64, period_s: f64, gap_s: f64, floor: f64) -> Vec<f64> {
    (0..n)
        .map(|k| {
            let t = k as f64 / sample_rate_hz;
            let phase = t - (t / period_s).round() * period_s;
            if phase.abs() < gap_s / 2.0 {
                floor
            } else {
                1.0
            }
        })
        .collect()
}
