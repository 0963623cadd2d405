//! Radio propagation measurement analysis.
//!
//! * [`measurements`]: `lon,lat,val` CSV ingest/export and LTE RSRP report codes.
//! * [`pathloss`]: log-distance and urban-micro NLoS pathloss, link budget,
//!   transmitter distance estimation from RSRP.
//! * [`shadowing`]: Gaussian (dB-domain) shadow-fading fit with histogram and
//!   KS goodness of fit.
//! * [`smallscale`]: multipath envelope synthesis, Rayleigh fitting, IQ
//!   `.dat` captures and TDMA burst-gap timing.
//! * [`geoheat`]: haversine distances and CSV/GeoJSON heatmap layers.
//! * [`cli`]: the batch front-end behind the `propkit` binary.

pub mod cli;
mod error;
pub mod geoheat;
pub mod measurements;
pub mod pathloss;
pub mod shadowing;
pub mod smallscale;
pub mod stats;

pub use error::{Error, Result};

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;
