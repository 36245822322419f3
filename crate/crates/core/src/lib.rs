//! Heisenberg group H(1) with gauge-deformed metrics and dilatations, and
//! numerical probes for the ε → 0 limits that decide whether the deformed
//! structure is a dilatation structure.

pub mod cli;
pub mod dilatations;
pub mod error;
pub mod gauges;
pub mod h1;
pub mod limits;
pub mod metrics;
pub mod report;
pub mod verify;

pub use error::{Error, Result};
pub use gauges::{check_gauge, Gauge, GaugeSpec, PiecewiseLinearGauge, ValidGauge};
pub use h1::{omega, H1Point};
pub use report::{Check, VerificationReport, Witness};
