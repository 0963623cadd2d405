//! Recover TDMA slot timing from the nulls of a bursty capture.
//!
//! Builds a synthetic 1 MS/s capture whose bursts are separated by short
//! guard gaps every GSM slot, writes it as an interleaved f32 `.dat`, reads
//! it back and measures the null spacing.

use num_complex::Complex32;
use propkit::smallscale::{
    detect_slots, envelope, parse_iq_dat, synthetic_bursts, write_iq_dat, IqStream, DEFAULT_NULL_THRESHOLD,
    GSM_SLOT_S,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let fs = 1e6;
    let gate = synthetic_bursts(5_000, fs, GSM_SLOT_S, 25e-6, 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let samples: Vec<Complex32> = gate
        .iter()
        .map(|&g| {
            let noise = Complex32::new(rng.random_range(-0.01..0.01), rng.random_range(-0.01..0.01));
            Complex32::from_polar(g as f32, rng.random_range(0.0..std::f32::consts::TAU)) + noise
        })
        .collect();

    let path = std::env::temp_dir().join("propkit_gsm_example.dat");
    std::fs::write(&path, write_iq_dat(&IqStream::new(samples, fs)?))?;
    let stream = parse_iq_dat(&std::fs::read(&path)?, fs)?;

    let slots = detect_slots(&envelope(&stream), fs, DEFAULT_NULL_THRESHOLD)?;
    println!("capture {} samples ({:.2} ms) from {}", stream.len(), stream.duration_s() * 1e3, path.display());
    println!("nulls at samples {:?}", slots.null_positions);
    println!("slot duration {:.1} us (nominal {:.3} us)", slots.slot_duration_s * 1e6, GSM_SLOT_S * 1e6);
    Ok(())
}
