//! Great-circle distances and point-layer heatmap export (CSV or GeoJSON).
//!
//! Earth is a sphere of radius 6 371 km. At sub-kilometer drive-test scales
//! the error against an ellipsoid stays well under half a percent.

use serde_json::{json, Value};

use crate::error::{domain, Result};
use crate::measurements::{write_measurement_csv, GeoPoint, MeasurementSample, ValueKind};

pub const EARTH_RADIUS_M: f64 = 6_371_000.0;
/// Geodesic distances below this are treated as co-located.
pub const MIN_VERIFY_DISTANCE_M: f64 = 1.0;

pub fn haversine_m(a: &GeoPoint, b: &GeoPoint) -> f64 {
    let (lat1, lat2) = (a.lat().to_radians(), b.lat().to_radians());
    let dlat = lat2 - lat1;
    let dlon = (b.lon() - a.lon()).to_radians();
    let h = (dlat / 2.0).sin().powi(2) + lat1.cos() * lat2.cos() * (dlon / 2.0).sin().powi(2);
    2.0 * EARTH_RADIUS_M * h.sqrt().min(1.0).asin()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceCheck {
    pub d_hat_m: f64,
    pub d_geo_m: f64,
    /// `d_hat / d_geo`; infinite when the sample sits on the tower.
    pub ratio: f64,
}

impl DistanceCheck {
    pub fn is_degenerate(&self) -> bool {
        self.d_geo_m < MIN_VERIFY_DISTANCE_M
    }
}

/// Compares model distances with the geodesic distance to a known tower.
pub fn verify_distances(rows: &[(GeoPoint, f64)], tower: &GeoPoint) -> Result<Vec<DistanceCheck>> {
    if rows.is_empty() {
        return domain("no rows to verify");
    }
    Ok(rows
        .iter()
        .map(|(p, d_hat_m)| {
            let d_geo_m = haversine_m(p, tower);
            let ratio = if d_geo_m < MIN_VERIFY_DISTANCE_M { f64::INFINITY } else { d_hat_m / d_geo_m };
            DistanceCheck { d_hat_m: *d_hat_m, d_geo_m, ratio }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundingBox {
    pub min_lat: f64,
    pub max_lat: f64,
    pub min_lon: f64,
    pub max_lon: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HeatmapLayer {
    points: Vec<(GeoPoint, f64)>,
    value_kind: ValueKind,
    bounding_box: BoundingBox,
}

impl HeatmapLayer {
    pub fn new(points: Vec<(GeoPoint, f64)>, value_kind: ValueKind) -> Result<Self> {
        let Some((first, _)) = points.first() else {
            return domain("heatmap layer has no points");
        };
        let init = BoundingBox {
            min_lat: first.lat(),
            max_lat: first.lat(),
            min_lon: first.lon(),
            max_lon: first.lon(),
        };
        let bounding_box = points.iter().fold(init, |b, (p, _)| BoundingBox {
            min_lat: b.min_lat.min(p.lat()),
            max_lat: b.max_lat.max(p.lat()),
            min_lon: b.min_lon.min(p.lon()),
            max_lon: b.max_lon.max(p.lon()),
        });
        Ok(Self { points, value_kind, bounding_box })
    }

    /// Builds a layer from samples. All samples must share one kind.
    pub fn from_samples(samples: &[MeasurementSample]) -> Result<Self> {
        let kind = samples.first().map(|s| s.kind).unwrap_or_default();
        if let Some(s) = samples.iter().find(|s| s.kind != kind) {
            return Err(crate::Error::Kind(format!("mixed value kinds {kind} and {}", s.kind)));
        }
        Self::new(samples.iter().map(|s| (s.point, s.val)).collect(), kind)
    }

    pub fn points(&self) -> &[(GeoPoint, f64)] {
        &self.points
    }

    pub fn value_kind(&self) -> ValueKind {
        self.value_kind
    }

    pub fn bounding_box(&self) -> BoundingBox {
        self.bounding_box
    }

    pub fn to_geojson(&self) -> Value {
        let b = self.bounding_box;
        let features: Vec<Value> = self
            .points
            .iter()
            .map(|(p, v)| {
                json!({
                    "type": "Feature",
                    "geometry": { "type": "Point", "coordinates": [p.lon(), p.lat()] },
                    "properties": { "val": v, "kind": self.value_kind.name() },
                })
            })
            .collect();
        json!({
            "type": "FeatureCollection",
            "bbox": [b.min_lon, b.min_lat, b.max_lon, b.max_lat],
            "features": features,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapFormat {
    Csv,
    GeoJson,
}

pub fn export_heatmap(layer: &HeatmapLayer, format: HeatmapFormat) -> Vec<u8> {
    match format {
        HeatmapFormat::Csv => {
            let samples: Vec<MeasurementSample> = layer
                .points
                .iter()
                .map(|(p, v)| MeasurementSample { point: *p, val: *v, kind: layer.value_kind })
                .collect();
            write_measurement_csv(&samples).into_bytes()
        }
        HeatmapFormat::GeoJson => {
            let mut bytes = serde_json::to_vec_pretty(&layer.to_geojson()).expect("json values serialize");
            bytes.push(b'\n');
            bytes
        }
    }
}
