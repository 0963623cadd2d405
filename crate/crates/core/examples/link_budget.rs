//! Pathloss model comparison, far-field distance and Doppler at a glance.

use propkit::pathloss::{
    fraunhofer_distance, log_distance_pl, received_power, umi_nlos_pl, AntennaGeometry, LinkBudget,
    LogDistanceModel, UmiNlosModel,
};
use propkit::smallscale::{doppler_shift, max_doppler};

fn main() -> propkit::Result<()> {
    let fc_ghz = 2.32;
    let umi = UmiNlosModel::new(fc_ghz)?;
    let free_ish = LogDistanceModel::new(2.0, 1.0, 39.8)?;
    let cluttered = LogDistanceModel::new(3.67, 1.0, 32.2)?;
    let lb = LinkBudget::new(41.0)?;

    println!("{:>7} {:>9} {:>9} {:>9} {:>9}", "d (m)", "alpha=2", "alpha=3.67", "UMi NLoS", "Pr (dBm)");
    for d in [10.0, 50.0, 100.0, 250.0, 500.0, 1000.0, 2000.0] {
        let pl = umi_nlos_pl(&umi, d)?;
        println!(
            "{d:>7} {:>9.1} {:>9.1} {:>9.1} {:>9.1}",
            log_distance_pl(&free_ish, d)?,
            log_distance_pl(&cluttered, d)?,
            pl,
            received_power(&lb, pl)
        );
    }

    for (dim, fc) in [(0.1, 938.8e6), (1.0, 2.32e9)] {
        let g = AntennaGeometry::new(dim, fc)?;
        println!("D = {dim} m at {:.1} MHz: far field beyond {:.3} m", fc / 1e6, fraunhofer_distance(&g));
    }

    let (v, fc) = (30.0, 2e9);
    println!("v = {v} m/s at {} GHz: f_m = {:.2} Hz", fc / 1e9, max_doppler(v, fc));
    for deg in [0.0f64, 60.0, 90.0, 120.0, 180.0] {
        println!("  theta {deg:>5} deg -> {:>8.2} Hz", doppler_shift(v, fc, deg.to_radians()));
    }
    Ok(())
}
