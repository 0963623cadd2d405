//! Geo-tagged measurement samples in the three-column `lon,lat,val` CSV
//! layout, plus the LTE RSRP report-code mapping (98 codes, 1 dB steps from
//! -140 dBm to -44 dBm).
//!
//! Coordinates are kept as `f64`. Rust's float formatting emits the shortest
//! string that parses back to the same bits, so a parse/write cycle never
//! loses a decimal place that the input carried.

use std::fmt;
use std::io::Read;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Lower edge of the sanity window applied to RSRP values on ingest.
pub const RSRP_MIN_SANE_DBM: f64 = -160.0;
/// Upper edge of the sanity window applied to RSRP values on ingest.
pub const RSRP_MAX_SANE_DBM: f64 = -20.0;

pub const CSV_HEADER: &str = "lon,lat,val";

/// A WGS-84 position in decimal degrees.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GeoPoint {
    lat: f64,
    lon: f64,
}

impl GeoPoint {
    pub fn new(lat: f64, lon: f64) -> Result<Self> {
        if !lat.is_finite() || !(-90.0..=90.0).contains(&lat) {
            return Err(Error::Domain(format!("latitude {lat} outside [-90, 90]")));
        }
        if !lon.is_finite() || !(-180.0..=180.0).contains(&lon) {
            return Err(Error::Domain(format!("longitude {lon} outside [-180, 180]")));
        }
        Ok(Self { lat, lon })
    }

    pub fn lat(&self) -> f64 {
        self.lat
    }

    pub fn lon(&self) -> f64 {
        self.lon
    }
}

/// What the `val` column holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Hash)]
pub enum ValueKind {
    /// Reference signal received power, dBm.
    #[default]
    Rsrp,
    /// Downlink throughput, Mbit/s.
    DownlinkSpeed,
    /// Uplink throughput, Mbit/s.
    UplinkSpeed,
}

impl ValueKind {
    pub fn name(self) -> &'static str {
        match self {
            ValueKind::Rsrp => "rsrp",
            ValueKind::DownlinkSpeed => "downlink_speed",
            ValueKind::UplinkSpeed => "uplink_speed",
        }
    }
}

impl fmt::Display for ValueKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ValueKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rsrp" => Ok(ValueKind::Rsrp),
            "downlink_speed" | "downlink" | "dl" => Ok(ValueKind::DownlinkSpeed),
            "uplink_speed" | "uplink" | "ul" => Ok(ValueKind::UplinkSpeed),
            other => Err(Error::Domain(format!("unknown value kind `{other}`"))),
        }
    }
}

/// One geo-tagged observation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeasurementSample {
    pub point: GeoPoint,
    pub val: f64,
    pub kind: ValueKind,
}

impl MeasurementSample {
    pub fn new(point: GeoPoint, val: f64, kind: ValueKind) -> Result<Self> {
        if !val.is_finite() {
            return Err(Error::Domain(format!("value {val} is not finite")));
        }
        if kind == ValueKind::Rsrp && !(RSRP_MIN_SANE_DBM..=RSRP_MAX_SANE_DBM).contains(&val) {
            return Err(Error::Domain(format!(
                "RSRP {val} dBm outside sanity window [{RSRP_MIN_SANE_DBM}, {RSRP_MAX_SANE_DBM}]"
            )));
        }
        Ok(Self { point, val, kind })
    }

    pub fn rsrp(lat: f64, lon: f64, rsrp_dbm: f64) -> Result<Self> {
        Self::new(GeoPoint::new(lat, lon)?, rsrp_dbm, ValueKind::Rsrp)
    }
}

/// Parses a `lon,lat,val` CSV stream. Every `val` is interpreted as `kind`.
///
/// Row numbers in errors are 1-based physical line numbers, so the header is
/// line 1 and the first data row is line 2.
pub fn parse_measurement_csv<R: Read>(input: R, kind: ValueKind) -> Result<Vec<MeasurementSample>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .from_reader(input);

    let mut records = reader.records();
    let header = match records.next() {
        Some(rec) => rec.map_err(|e| Error::Row { row: 1, message: e.to_string() })?,
        None => return Err(Error::Schema { found: String::new() }),
    };
    let names: Vec<String> = header.iter().map(|h| h.trim().to_ascii_lowercase()).collect();
    if names != ["lon", "lat", "val"] {
        return Err(Error::Schema { found: header.iter().collect::<Vec<_>>().join(",") });
    }

    let mut samples = Vec::new();
    for rec in records {
        let rec = rec.map_err(|e| Error::Row {
            row: e.position().map_or(0, |p| p.line()),
            message: e.to_string(),
        })?;
        let row = rec.position().map_or(0, |p| p.line());
        if rec.len() == 1 && rec[0].trim().is_empty() {
            continue;
        }
        if rec.len() != 3 {
            return Err(Error::Row { row, message: format!("expected 3 fields, found {}", rec.len()) });
        }
        let field = |i: usize, name: &str| -> Result<f64> {
            rec[i].trim().parse::<f64>().map_err(|_| Error::Row {
                row,
                message: format!("{name} `{}` is not a number", &rec[i]),
            })
        };
        let lon = field(0, "lon")?;
        let lat = field(1, "lat")?;
        let val = field(2, "val")?;

        let sample = GeoPoint::new(lat, lon)
            .and_then(|p| MeasurementSample::new(p, val, kind))
            .map_err(|e| match e {
                Error::Domain(message) => Error::Validation { row, message },
                other => other,
            })?;
        samples.push(sample);
    }
    Ok(samples)
}

/// Serializes samples in the `lon,lat,val` layout with `\n` line endings.
pub fn write_measurement_csv(samples: &[MeasurementSample]) -> String {
    let mut out = String::with_capacity(16 + samples.len() * 36);
    out.push_str(CSV_HEADER);
    out.push('\n');
    for s in samples {
        out.push_str(&format!("{},{},{}\n", s.point.lon, s.point.lat, s.val));
    }
    out
}

/// LTE RSRP measurement report code, `RSRP_00` ..= `RSRP_97`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RsrpReportCode(u8);

impl RsrpReportCode {
    pub const MAX: u8 = 97;

    pub fn new(code: u8) -> Result<Self> {
        if code > Self::MAX {
            return Err(Error::Domain(format!("RSRP report code {code} outside [0, 97]")));
        }
        Ok(Self(code))
    }

    pub fn value(self) -> u8 {
        self.0
    }
}

impl fmt::Display for RsrpReportCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RSRP_{:02}", self.0)
    }
}

/// Half-open dBm interval `[lower, upper)`; `None` means unbounded on that side.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RsrpInterval {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

impl RsrpInterval {
    pub fn contains(&self, dbm: f64) -> bool {
        self.lower.is_none_or(|lo| dbm >= lo) && self.upper.is_none_or(|hi| dbm < hi)
    }
}

/// Maps a measured RSRP to its report code. Values below -140 dBm clamp to
/// code 0 and values at or above -44 dBm clamp to code 97.
pub fn quantize_rsrp(rsrp_dbm: f64) -> Result<RsrpReportCode> {
    if !rsrp_dbm.is_finite() {
        return Err(Error::Domain(format!("RSRP {rsrp_dbm} is not finite")));
    }
    let code = if rsrp_dbm < -140.0 {
        0
    } else if rsrp_dbm >= -44.0 {
        97
    } else {
        // -141 + k <= rsrp < -140 + k
        (rsrp_dbm.floor() + 141.0) as u8
    };
    Ok(RsrpReportCode(code))
}

pub fn dequantize_rsrp(code: RsrpReportCode) -> RsrpInterval {
    match code.0 {
        0 => RsrpInterval { lower: None, upper: Some(-140.0) },
        97 => RsrpInterval { lower: Some(-44.0), upper: None },
        k => {
            let lower = -141.0 + f64::from(k);
            RsrpInterval { lower: Some(lower), upper: Some(lower + 1.0) }
        }
    }
}

/// Same as [`dequantize_rsrp`] for a raw integer code.
pub fn dequantize_rsrp_raw(code: u32) -> Result<RsrpInterval> {
    let code = u8::try_from(code)
        .map_err(|_| Error::Domain(format!("RSRP report code {code} outside [0, 97]")))?;
    Ok(dequantize_rsrp(RsrpReportCode::new(code)?))
}
