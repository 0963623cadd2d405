//! Shadow-fading fit on a synthetic walk around a fixed transmitter distance.
//!
//! Received power is the log-distance mean plus a zero-mean Gaussian term in dB,
//! quantized to the 1 dB RSRP grid the way a handset would report it.

use propkit::measurements::{dequantize_rsrp, quantize_rsrp};
use propkit::pathloss::{log_distance_pl, received_power, LinkBudget, LogDistanceModel};
use propkit::shadowing::{fit_shadowing, DEFAULT_BIN_WIDTH_DB};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

fn main() -> propkit::Result<()> {
    let model = LogDistanceModel::new(3.5, 1.0, 40.0)?;
    let lb = LinkBudget::new(41.0)?;
    let mean_dbm = received_power(&lb, log_distance_pl(&model, 150.0)?);
    let sigma_db = 6.0;

    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let xi = Normal::new(0.0, sigma_db).expect("valid sigma");
    let samples: Vec<f64> = (0..800)
        .map(|_| {
            let raw = mean_dbm + xi.sample(&mut rng);
            let code = quantize_rsrp(raw).expect("finite");
            // report the lower edge of the 1 dB bin, as the handset does
            dequantize_rsrp(code).lower.unwrap_or(-141.0)
        })
        .collect();

    let report = fit_shadowing(&samples, DEFAULT_BIN_WIDTH_DB)?;
    println!("true mean {mean_dbm:.2} dBm, true sigma {sigma_db} dB");
    print!("{}", report.to_report_text());
    println!();
    for (i, &count) in report.histogram.counts.iter().enumerate() {
        println!("{:>7.1} {}", report.histogram.bin_center(i), "#".repeat((count as usize).div_ceil(4)));
    }
    Ok(())
}
