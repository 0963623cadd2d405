//! Export a drive test as GeoJSON and check model distances against a tower.
//!
//! `cargo run --example heatmap_export [tower_lat tower_lon]`
//! Tower coordinates are yours to supply; the default is only a placeholder
//! near the measurement area.

use propkit::geoheat::{export_heatmap, verify_distances, HeatmapFormat, HeatmapLayer};
use propkit::measurements::{parse_measurement_csv, GeoPoint, ValueKind};
use propkit::pathloss::{estimate_distances, LinkBudget, UmiNlosModel};

const SAMPLES: &str = include_str!("../data/scenario1.csv");

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let tower = match args.as_slice() {
        [lat, lon] => GeoPoint::new(*lat, *lon)?,
        _ => GeoPoint::new(13.0790, 80.2290)?,
    };

    let samples = parse_measurement_csv(SAMPLES.as_bytes(), ValueKind::Rsrp)?;
    let layer = HeatmapLayer::from_samples(&samples)?;
    let out = std::env::temp_dir().join("propkit_heatmap.geojson");
    std::fs::write(&out, export_heatmap(&layer, HeatmapFormat::GeoJson))?;
    let bbox = layer.bounding_box();
    println!("{} points -> {}", layer.points().len(), out.display());
    println!("lat [{}, {}], lon [{}, {}]", bbox.min_lat, bbox.max_lat, bbox.min_lon, bbox.max_lon);

    let est = estimate_distances(&samples, &LinkBudget::new(41.0)?, &UmiNlosModel::new(2.32)?)?;
    let rows: Vec<(GeoPoint, f64)> = est.iter().map(|r| (r.sample.point, r.d_hat_m)).collect();
    println!("{:>8} {:>8} {:>6}", "d_hat", "d_geo", "ratio");
    for c in verify_distances(&rows, &tower)? {
        let ratio = if c.is_degenerate() { "n/a".to_string() } else { format!("{:.2}", c.ratio) };
        println!("{:>8.0} {:>8.0} {:>6}", c.d_hat_m, c.d_geo_m, ratio);
    }
    Ok(())
}
