//! Large-scale pathloss: the close-in log-distance model, the ITU urban-micro
//! NLoS formula and its closed-form inverse, far-field distance, and the
//! trivial link budget tying transmit power, pathloss and RSRP together.

use std::fmt::Write as _;

use crate::error::{domain, Error, Result};
use crate::measurements::{MeasurementSample, ValueKind};
use crate::SPEED_OF_LIGHT;

/// Log-distance pathloss referenced to a close-in distance `d0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogDistanceModel {
    alpha: f64,
    d0_m: f64,
    pl_d0_db: f64,
}

impl LogDistanceModel {
    pub fn new(alpha: f64, d0_m: f64, pl_d0_db: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha.is_finite()) {
            return domain(format!("pathloss exponent {alpha} must be > 0"));
        }
        if !(d0_m > 0.0 && d0_m.is_finite()) {
            return domain(format!("reference distance {d0_m} m must be > 0"));
        }
        if !(pl_d0_db >= 0.0 && pl_d0_db.is_finite()) {
            return domain(format!("reference pathloss {pl_d0_db} dB must be >= 0"));
        }
        Ok(Self { alpha, d0_m, pl_d0_db })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn d0_m(&self) -> f64 {
        self.d0_m
    }

    pub fn pl_d0_db(&self) -> f64 {
        self.pl_d0_db
    }

    /// Mean pathloss at `d_m`. Undefined inside the reference distance.
    pub fn pathloss_db(&self, d_m: f64) -> Result<f64> {
        if !(d_m >= self.d0_m) || !d_m.is_finite() {
            return domain(format!("distance {d_m} m is inside reference distance {} m", self.d0_m));
        }
        Ok(self.pl_d0_db + 10.0 * self.alpha * (d_m / self.d0_m).log10())
    }

    /// Distance at which the model reaches `pl_db`.
    pub fn invert(&self, pl_db: f64) -> Result<f64> {
        if !pl_db.is_finite() || pl_db < self.pl_d0_db {
            return domain(format!("pathloss {pl_db} dB below reference pathloss {}", self.pl_d0_db));
        }
        Ok(self.d0_m * 10f64.powf((pl_db - self.pl_d0_db) / (10.0 * self.alpha)))
    }
}

pub fn log_distance_pl(model: &LogDistanceModel, d_m: f64) -> Result<f64> {
    model.pathloss_db(d_m)
}

/// Urban-micro, non-line-of-sight pathloss:
/// `PL(d) = 36.7 log10(d) + 22.7 + 26 log10(fc_GHz)`.
///
/// The source model is specified for d >= 10 m; evaluation is accepted down
/// to 1 m so the inverse stays total over observed pathloss ranges.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UmiNlosModel {
    fc_ghz: f64,
}

impl UmiNlosModel {
    pub const DISTANCE_SLOPE_DB: f64 = 36.7;
    pub const INTERCEPT_DB: f64 = 22.7;
    pub const FREQUENCY_SLOPE_DB: f64 = 26.0;
    pub const MIN_DISTANCE_M: f64 = 1.0;

    pub fn new(fc_ghz: f64) -> Result<Self> {
        if !(fc_ghz > 0.0 && fc_ghz.is_finite()) {
            return domain(format!("carrier frequency {fc_ghz} GHz must be > 0"));
        }
        Ok(Self { fc_ghz })
    }

    pub fn fc_ghz(&self) -> f64 {
        self.fc_ghz
    }

    fn offset_db(&self) -> f64 {
        Self::INTERCEPT_DB + Self::FREQUENCY_SLOPE_DB * self.fc_ghz.log10()
    }

    pub fn pathloss_db(&self, d_m: f64) -> Result<f64> {
        if !(d_m >= Self::MIN_DISTANCE_M) || !d_m.is_finite() {
            return domain(format!("distance {d_m} m below model floor of 1 m"));
        }
        Ok(Self::DISTANCE_SLOPE_DB * d_m.log10() + self.offset_db())
    }

    pub fn invert(&self, pl_db: f64) -> f64 {
        10f64.powf((pl_db - self.offset_db()) / Self::DISTANCE_SLOPE_DB)
    }
}

pub fn umi_nlos_pl(model: &UmiNlosModel, d_m: f64) -> Result<f64> {
    model.pathloss_db(d_m)
}

pub fn invert_umi_nlos(model: &UmiNlosModel, pl_db: f64) -> f64 {
    model.invert(pl_db)
}

/// Effective transmit power. Antenna gains and feeder losses, if any, are
/// expected to be folded in by the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkBudget {
    pt_dbm: f64,
}

impl LinkBudget {
    pub fn new(pt_dbm: f64) -> Result<Self> {
        if !pt_dbm.is_finite() {
            return domain(format!("transmit power {pt_dbm} dBm must be finite"));
        }
        Ok(Self { pt_dbm })
    }

    pub fn pt_dbm(&self) -> f64 {
        self.pt_dbm
    }
}

pub fn received_power(lb: &LinkBudget, pl_db: f64) -> f64 {
    lb.pt_dbm - pl_db
}

pub fn pathloss_from_rsrp(lb: &LinkBudget, rsrp_dbm: f64) -> f64 {
    lb.pt_dbm - rsrp_dbm
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AntennaGeometry {
    largest_dimension_m: f64,
    fc_hz: f64,
}

impl AntennaGeometry {
    pub fn new(largest_dimension_m: f64, fc_hz: f64) -> Result<Self> {
        if !(largest_dimension_m > 0.0 && largest_dimension_m.is_finite()) {
            return domain(format!("antenna dimension {largest_dimension_m} m must be > 0"));
        }
        if !(fc_hz > 0.0 && fc_hz.is_finite()) {
            return domain(format!("frequency {fc_hz} Hz must be > 0"));
        }
        Ok(Self { largest_dimension_m, fc_hz })
    }

    pub fn wavelength_m(&self) -> f64 {
        SPEED_OF_LIGHT / self.fc_hz
    }
}

/// Far-field boundary `2 D^2 / lambda`.
pub fn fraunhofer_distance(g: &AntennaGeometry) -> f64 {
    2.0 * g.largest_dimension_m * g.largest_dimension_m / g.wavelength_m()
}

/// One row of a distance-estimation report.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistanceEstimate {
    pub sample: MeasurementSample,
    pub pl_db: f64,
    pub d_hat_m: f64,
}

/// Pathloss and transmitter distance for each RSRP sample, in input order.
pub fn estimate_distances(
    samples: &[MeasurementSample],
    lb: &LinkBudget,
    model: &UmiNlosModel,
) -> Result<Vec<DistanceEstimate>> {
    samples
        .iter()
        .enumerate()
        .map(|(i, s)| {
            if s.kind != ValueKind::Rsrp {
                return Err(Error::Kind(format!("sample {i} is {}, expected rsrp", s.kind)));
            }
            let pl_db = pathloss_from_rsrp(lb, s.val);
            Ok(DistanceEstimate { sample: *s, pl_db, d_hat_m: invert_umi_nlos(model, pl_db) })
        })
        .collect()
}

pub const DISTANCE_CSV_HEADER: &str = "lat,lon,rsrp_dbm,pl_db,d_hat_m";

/// Renders estimates as `lat,lon,rsrp_dbm,pl_db,d_hat_m`, distances rounded
/// to the nearest meter.
pub fn write_distance_csv(rows: &[DistanceEstimate]) -> String {
    let mut out = String::from(DISTANCE_CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{}",
            r.sample.point.lat(),
            r.sample.point.lon(),
            r.sample.val,
            r.pl_db,
            r.d_hat_m.round()
        );
    }
    out
}
