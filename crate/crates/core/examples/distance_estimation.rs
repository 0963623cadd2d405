//! Transmitter distance from RSRP with the urban-micro NLoS model.
//!
//! `cargo run --example distance_estimation [path/to/samples.csv] [pt_dbm] [fc_ghz]`

use propkit::measurements::{parse_measurement_csv, ValueKind};
use propkit::pathloss::{estimate_distances, LinkBudget, UmiNlosModel};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let path = args.next().unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/data/scenario2.csv").into());
    let pt_dbm: f64 = args.next().map_or(Ok(41.0), |s| s.parse())?;
    let fc_ghz: f64 = args.next().map_or(Ok(2.32), |s| s.parse())?;

    let samples = parse_measurement_csv(std::fs::File::open(&path)?, ValueKind::Rsrp)?;
    let rows = estimate_distances(&samples, &LinkBudget::new(pt_dbm)?, &UmiNlosModel::new(fc_ghz)?)?;

    println!("Pt = {pt_dbm} dBm, fc = {fc_ghz} GHz, {} samples", rows.len());
    println!("{:>12} {:>12} {:>6} {:>6} {:>7}", "lat", "lon", "RSRP", "PL", "d_hat");
    for r in &rows {
        println!(
            "{:>12} {:>12} {:>6} {:>6} {:>7}",
            r.sample.point.lat(),
            r.sample.point.lon(),
            r.sample.val,
            r.pl_db,
            r.d_hat_m.round()
        );
    }
    if let (Some(near), Some(far)) = (
        rows.iter().min_by(|a, b| a.d_hat_m.total_cmp(&b.d_hat_m)),
        rows.iter().max_by(|a, b| a.d_hat_m.total_cmp(&b.d_hat_m)),
    ) {
        println!("closest {:.0} m, farthest {:.0} m", near.d_hat_m, far.d_hat_m);
    }
    Ok(())
}
