//! Multipath envelope synthesis and Rayleigh verification.
//!
//! A pedestrian-to-vehicle speed at a GSM900 carrier, sampled well above the
//! Doppler bandwidth, fitted with the mean-square scale estimator.

use propkit::smallscale::{
    envelope, estimate_rayleigh_scale, max_doppler, rayleigh_pdf, simulate_envelope, MultipathConfig,
};
use propkit::shadowing::build_histogram;

fn main() -> propkit::Result<()> {
    let cfg = MultipathConfig {
        n_paths: 64,
        velocity_mps: 14.0,
        fc_hz: 938.8e6,
        omega: 1.0,
        max_delay_s: 1e-6,
        seed: 7,
    };
    let sample_rate_hz = 100.0;
    let stream = simulate_envelope(&cfg, 1000.0, sample_rate_hz)?;
    let env = envelope(&stream);
    let fit = estimate_rayleigh_scale(&env)?;

    println!("f_m = {:.2} Hz, {} samples", max_doppler(cfg.velocity_mps, cfg.fc_hz), env.len());
    println!("sigma_R = {:.4}, omega = {:.4}, KS = {:.5}", fit.sigma_scale, fit.omega_power, fit.ks);
    println!();
    println!("{:>6} {:>10} {:>10}", "x", "measured", "Rayleigh");
    let hist = build_histogram(&env, 0.1)?;
    for i in 0..hist.bin_count() {
        let x = hist.bin_center(i);
        println!("{x:>6.2} {:>10.4} {:>10.4}", hist.densities[i], rayleigh_pdf(x, fit.omega_power)?);
    }
    Ok(())
}
