//! Gauge functions `k` and the derived pair `g⁻¹(t) = k(t) + t²`, `g`.
//!
//! A gauge `k: [0, ∞) → [0, ∞)` is convex, strictly increasing and vanishes
//! at the origin. `g` is the inverse of `t ↦ k(t) + t²`; it is computed by
//! bracketed bisection on `[0, √s]` (valid because `g⁻¹(t) ≥ t²`), unless
//! the gauge carries a closed form.
//!
//! Gauges built from arbitrary closures are accepted, but only a
//! [`ValidGauge`], which has passed [`check_gauge`], can be handed to the
//! metric and dilatation code.

use std::fmt;
use std::ops::Deref;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::{Check, VerificationReport, Witness};

pub const DEFAULT_TAU_INV: f64 = 1e-13;

/// Relative slack allowed in the midpoint convexity test.
pub const CONVEXITY_SLACK: f64 = 1e-12;

/// Convex piecewise-linear `k` through the origin.
///
/// Breakpoints are stored in ascending order. Below the first breakpoint the
/// graph is the segment from the origin; above the last one it continues
/// with the slope of the last segment.
#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseLinearGauge {
    breakpoints: Vec<f64>,
    values: Vec<f64>,
    slopes: Vec<f64>,
}

impl PiecewiseLinearGauge {
    /// Builds the gauge from ascending breakpoints `b` and values `k(b)`,
    /// verifying that the secant slopes (origin segment included) are
    /// positive and nondecreasing.
    pub fn new(breakpoints: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if breakpoints.is_empty() {
            return Err(Error::InvalidGauge("no breakpoints".into()));
        }
        if breakpoints.len() != values.len() {
            return Err(Error::InvalidGauge(format!(
                "{} breakpoints but {} values",
                breakpoints.len(),
                values.len()
            )));
        }
        for (i, (&b, &v)) in breakpoints.iter().zip(&values).enumerate() {
            if !(b.is_finite() && b > 0.0) || !v.is_finite() {
                return Err(Error::InvalidGauge(format!("breakpoint {i}: ({b}, {v}) is not a positive finite node")));
            }
            if i > 0 && b <= breakpoints[i - 1] {
                return Err(Error::InvalidGauge(format!(
                    "breakpoints not ascending at index {i}: {} then {b}",
                    breakpoints[i - 1]
                )));
            }
        }

        let mut slopes = Vec::with_capacity(breakpoints.len());
        slopes.push(values[0] / breakpoints[0]);
        for i in 1..breakpoints.len() {
            slopes.push((values[i] - values[i - 1]) / (breakpoints[i] - breakpoints[i - 1]));
        }
        if !(slopes[0] > 0.0) {
            return Err(Error::InvalidGauge(format!("origin segment slope {} is not positive", slopes[0])));
        }
        for i in 1..slopes.len() {
            if !(slopes[i] >= slopes[i - 1]) {
                return Err(Error::InvalidGauge(format!(
                    "slope decreases across breakpoint {}: {} then {} (segments ending at {} and {})",
                    breakpoints[i - 1],
                    slopes[i - 1],
                    slopes[i],
                    breakpoints[i - 1],
                    breakpoints[i]
                )));
            }
        }
        Ok(PiecewiseLinearGauge { breakpoints, values, slopes })
    }

    /// Surrogate gauge whose ratio `k(t)/t²` alternates between `M` and
    /// `1/M` on the breakpoints `rⁿ`, `n = 1..=levels`.
    ///
    /// `r < 1/M²` forces the segment slopes to shrink towards the origin,
    /// which is what makes the result convex.
    pub fn oscillatory(m: f64, r: f64, levels: u32) -> Result<Self> {
        if !(m.is_finite() && m > 1.0) {
            return Err(Error::InvalidGauge(format!("oscillatory gauge needs M > 1, got {m}")));
        }
        if !(r > 0.0 && r < 1.0 / (m * m)) {
            return Err(Error::InvalidGauge(format!(
                "oscillatory gauge needs 0 < r < 1/M^2 = {}, got r = {r}",
                1.0 / (m * m)
            )));
        }
        if levels < 4 {
            return Err(Error::InvalidGauge(format!("oscillatory gauge needs levels >= 4, got {levels}")));
        }
        let mut breakpoints = Vec::with_capacity(levels as usize);
        let mut values = Vec::with_capacity(levels as usize);
        for n in (1..=levels).rev() {
            let b = r.powi(n as i32);
            let ratio = if n % 2 == 0 { m } else { 1.0 / m };
            breakpoints.push(b);
            values.push(ratio * b * b);
        }
        PiecewiseLinearGauge::new(breakpoints, values)
    }

    pub fn breakpoints(&self) -> &[f64] {
        &self.breakpoints
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Secant slopes, starting with the origin segment.
    pub fn slopes(&self) -> &[f64] {
        &self.slopes
    }

    pub fn eval(&self, t: f64) -> f64 {
        let b = &self.breakpoints;
        let v = &self.values;
        if t <= b[0] {
            return self.slopes[0] * t;
        }
        // first breakpoint >= t
        let i = b.partition_point(|&x| x < t);
        if i == b.len() {
            let last = b.len() - 1;
            return v[last] + self.slopes[last] * (t - b[last]);
        }
        v[i - 1] + self.slopes[i] * (t - b[i - 1])
    }
}

#[derive(Clone)]
enum Kind {
    Linear,
    Piecewise(PiecewiseLinearGauge),
    Raw(Arc<dyn Fn(f64) -> f64 + Send + Sync>),
}

/// A gauge function `k` together with its derived `g⁻¹` and `g`.
#[derive(Clone)]
pub struct Gauge {
    kind: Kind,
    label: String,
    tau_inv: f64,
}

impl fmt::Debug for Gauge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Gauge").field("label", &self.label).field("tau_inv", &self.tau_inv).finish()
    }
}

impl Gauge {
    /// `k(t) = t`, with closed form `g(s) = (√(1+4s) − 1)/2`.
    pub fn linear() -> Self {
        Gauge { kind: Kind::Linear, label: "linear".into(), tau_inv: DEFAULT_TAU_INV }
    }

    pub fn piecewise(pl: PiecewiseLinearGauge) -> Self {
        let label = format!("piecewise(n={})", pl.breakpoints.len());
        Gauge { kind: Kind::Piecewise(pl), label, tau_inv: DEFAULT_TAU_INV }
    }

    pub fn oscillatory(m: f64, r: f64, levels: u32) -> Result<Self> {
        let pl = PiecewiseLinearGauge::oscillatory(m, r, levels)?;
        Ok(Gauge {
            kind: Kind::Piecewise(pl),
            label: format!("oscillatory(M={m},r={r},levels={levels})"),
            tau_inv: DEFAULT_TAU_INV,
        })
    }

    /// Wraps an arbitrary evaluable. Nothing is checked here.
    pub fn raw(label: impl Into<String>, k: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Gauge { kind: Kind::Raw(Arc::new(k)), label: label.into(), tau_inv: DEFAULT_TAU_INV }
    }

    pub fn with_tau_inv(mut self, tau_inv: f64) -> Self {
        self.tau_inv = tau_inv;
        self
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn tau_inv(&self) -> f64 {
        self.tau_inv
    }

    pub fn as_piecewise(&self) -> Option<&PiecewiseLinearGauge> {
        match &self.kind {
            Kind::Piecewise(pl) => Some(pl),
            _ => None,
        }
    }

    pub fn has_closed_form(&self) -> bool {
        matches!(self.kind, Kind::Linear)
    }

    #[inline]
    pub fn k(&self, t: f64) -> f64 {
        match &self.kind {
            Kind::Linear => t,
            Kind::Piecewise(pl) => pl.eval(t),
            Kind::Raw(f) => f(t),
        }
    }

    #[inline]
    fn g_inverse_raw(&self, t: f64) -> f64 {
        self.k(t) + t * t
    }

    /// `g⁻¹(t) = k(t) + t²`.
    pub fn g_inverse(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("g^-1 needs a finite t >= 0, got {t}")));
        }
        Ok(self.g_inverse_raw(t))
    }

    /// `g(s)`, through the closed form when the gauge has one.
    pub fn g(&self, s: f64) -> Result<f64> {
        check_g_arg(s)?;
        match self.kind {
            Kind::Linear => Ok(2.0 * s / (1.0 + (1.0 + 4.0 * s).sqrt())),
            _ => self.invert(s),
        }
    }

    /// `g(s)` by bisection, ignoring any closed form.
    pub fn g_bisect(&self, s: f64) -> Result<f64> {
        check_g_arg(s)?;
        self.invert(s)
    }

    fn invert(&self, s: f64) -> Result<f64> {
        if s == 0.0 {
            return Ok(0.0);
        }
        let mut hi = s.sqrt();
        let mut value = self.g_inverse_raw(hi);
        let mut widen = 0;
        while !(value >= s) {
            // sqrt rounding, or a k that is negative somewhere
            if widen == 64 || !value.is_finite() {
                return Err(Error::Inversion { s, hi, value });
            }
            hi *= 1.0 + f64::EPSILON * f64::from(1u32 << (widen.min(30)));
            value = self.g_inverse_raw(hi);
            widen += 1;
        }
        let mut lo = 0.0;
        loop {
            let mid = lo + 0.5 * (hi - lo);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.g_inverse_raw(mid) < s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let below = s - self.g_inverse_raw(lo);
        let above = self.g_inverse_raw(hi) - s;
        Ok(if below <= above { lo } else { hi })
    }

    /// Runs [`check_gauge`] on [`default_check_grid`] and wraps the gauge on success.
    pub fn validate(self) -> std::result::Result<ValidGauge, (Gauge, VerificationReport)> {
        let report = check_gauge(&self, &default_check_grid());
        if report.passed() {
            Ok(ValidGauge(self))
        } else {
            Err((self, report))
        }
    }
}

fn check_g_arg(s: f64) -> Result<()> {
    if !(s >= 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!("g needs a finite s >= 0, got {s}")));
    }
    Ok(())
}

/// A gauge that passed [`check_gauge`].
#[derive(Debug, Clone)]
pub struct ValidGauge(Gauge);

impl ValidGauge {
    pub fn linear() -> Self {
        ValidGauge(Gauge::linear())
    }

    /// Validates `gauge`, turning a failed report into an error.
    pub fn new(gauge: Gauge) -> Result<Self> {
        gauge.validate().map_err(|(g, report)| {
            let why = report
                .first_failure()
                .map(|c| format!("{} failed (worst {:e}, witness {:?})", c.name, c.worst, c.witness))
                .unwrap_or_default();
            Error::InvalidGauge(format!("{}: {why}", g.label()))
        })
    }

    pub fn oscillatory(m: f64, r: f64, levels: u32) -> Result<Self> {
        ValidGauge::new(Gauge::oscillatory(m, r, levels)?)
    }

    pub fn into_inner(self) -> Gauge {
        self.0
    }
}

impl Deref for ValidGauge {
    type Target = Gauge;

    fn deref(&self) -> &Gauge {
        &self.0
    }
}

/// Geometric grid from 1e-24 to 1e6, ten points per decade.
pub fn default_check_grid() -> Vec<f64> {
    (-240..=60).map(|i| 10f64.powf(f64::from(i) / 10.0)).collect()
}

/// Verifies the gauge hypotheses on a sorted positive grid. Failures go in
/// the report; nothing is raised.
pub fn check_gauge(gauge: &Gauge, grid: &[f64]) -> VerificationReport {
    let mut report = VerificationReport::new(format!("gauge {}", gauge.label()));

    let grid_ok = !grid.is_empty() && grid.iter().all(|&t| t > 0.0 && t.is_finite()) && grid.windows(2).all(|w| w[0] < w[1]);
    if !grid_ok {
        report.push(Check {
            name: "grid".into(),
            passed: false,
            samples: grid.len(),
            worst: f64::NAN,
            tolerance: 0.0,
            witness: Witness::default(),
            note: "grid must be nonempty, positive and strictly ascending".into(),
        });
        return report;
    }

    let k0 = gauge.k(0.0);
    report.push(Check::bounded("k(0)=0", 1, k0.abs(), 0.0, Witness::scalars(vec![0.0, k0])));

    // strict monotonicity on 0 < t_0 < t_1 < ...
    let mut points = Vec::with_capacity(grid.len() + 1);
    points.push(0.0);
    points.extend_from_slice(grid);
    let ks: Vec<f64> = points.iter().map(|&t| gauge.k(t)).collect();
    let mut failures = 0;
    let mut worst = 0.0_f64;
    let mut witness = Witness::default();
    for i in 1..points.len() {
        if ks[i] > ks[i - 1] {
            continue;
        }
        failures += 1;
        let drop = if ks[i].is_nan() || ks[i - 1].is_nan() { f64::INFINITY } else { ks[i - 1] - ks[i] };
        if witness.is_empty() || drop > worst {
            worst = drop;
            witness = Witness::scalars(vec![points[i - 1], points[i], ks[i - 1], ks[i]]);
        }
    }
    report.push(Check {
        name: "k strictly increasing".into(),
        passed: failures == 0,
        samples: points.len() - 1,
        worst,
        tolerance: 0.0,
        witness,
        note: if failures > 0 { format!("{failures} non-increasing steps") } else { String::new() },
    });

    // midpoint convexity over all pairs, the origin included
    let mut worst = 0.0_f64;
    let mut witness = Witness::default();
    let mut pairs = 0;
    for i in 0..points.len() {
        for j in (i + 1)..points.len() {
            let (s, t) = (points[i], points[j]);
            let mid = gauge.k(0.5 * (s + t));
            let chord = 0.5 * (ks[i] + ks[j]);
            let scale = ks[i].abs().max(ks[j].abs());
            let excess = mid - chord;
            let rel = if scale > 0.0 { excess / scale } else if excess > 0.0 { f64::INFINITY } else { 0.0 };
            let rel = if rel.is_nan() { f64::INFINITY } else { rel };
            pairs += 1;
            if rel > worst {
                worst = rel;
                witness = Witness::scalars(vec![s, t, mid, chord]);
            }
        }
    }
    report.push(Check::bounded("k midpoint convex", pairs, worst, CONVEXITY_SLACK, witness));

    // g and g^-1 mutually inverse
    let mut worst = 0.0_f64;
    let mut witness = Witness::default();
    let tau = gauge.tau_inv();
    for &s in grid {
        let err = match gauge.g(s).and_then(|t| gauge.g_inverse(t)) {
            Ok(back) => (back - s).abs() / s.max(1.0),
            Err(_) => f64::INFINITY,
        };
        let err_rev = match gauge.g_inverse(s).and_then(|u| gauge.g(u)) {
            Ok(back) => (back - s).abs() / s.max(1.0),
            Err(_) => f64::INFINITY,
        };
        let e = if err.is_nan() || err_rev.is_nan() { f64::INFINITY } else { err.max(err_rev) };
        if e > worst {
            worst = e;
            witness = Witness::scalars(vec![s]);
        }
    }
    report.push(Check::bounded("g round trip", 2 * grid.len(), worst, tau, witness));

    report
}

/// Gauge file schema.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum GaugeSpec {
    Linear {},
    /// Breakpoints ascending, `values[i] = k(breakpoints[i])`.
    Piecewise { breakpoints: Vec<f64>, values: Vec<f64> },
    Oscillatory {
        #[serde(rename = "M")]
        m: f64,
        r: f64,
        levels: u32,
    },
    /// Raw evaluable `k(t) = scale · t^exponent`.
    Power {
        exponent: f64,
        #[serde(default = "unit")]
        scale: f64,
    },
}

fn unit() -> f64 {
    1.0
}

impl Default for GaugeSpec {
    fn default() -> Self {
        GaugeSpec::default_oscillatory()
    }
}

impl GaugeSpec {
    pub fn default_oscillatory() -> Self {
        GaugeSpec::Oscillatory { m: 10.0, r: 1e-3, levels: 8 }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the (not yet validated) gauge.
    pub fn build(&self) -> Result<Gauge> {
        match self {
            GaugeSpec::Linear {} => Ok(Gauge::linear()),
            GaugeSpec::Piecewise { breakpoints, values } => {
                Ok(Gauge::piecewise(PiecewiseLinearGauge::new(breakpoints.clone(), values.clone())?))
            }
            GaugeSpec::Oscillatory { m, r, levels } => Gauge::oscillatory(*m, *r, *levels),
            GaugeSpec::Power { exponent, scale } => {
                if !(exponent.is_finite() && scale.is_finite()) {
                    return Err(Error::InvalidGauge("power gauge needs finite exponent and scale".into()));
                }
                let (p, c) = (*exponent, *scale);
                Ok(Gauge::raw(format!("power(p={p},c={c})"), move |t: f64| c * t.powf(p)))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn osc() -> Gauge {
        Gauge::oscillatory(10.0, 1e-3, 8).unwrap()
    }

    #[test]
    fn g_inverse_examples() {
        let g = Gauge::linear();
        assert_eq!(g.g_inverse(1.0).unwrap(), 2.0);
        assert_eq!(g.g_inverse(2.0).unwrap(), 6.0);
        assert_eq!(g.g_inverse(0.0).unwrap(), 0.0);
        assert_eq!(osc().g_inverse(0.0).unwrap(), 0.0);
        assert!(matches!(g.g_inverse(-1.0), Err(Error::Domain(_))));
        assert!(g.g_inverse(f64::NAN).is_err());
    }

    #[test]
    fn g_examples() {
        let g = Gauge::linear();
        assert!((g.g(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((g.g(6.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(g.g(0.0).unwrap(), 0.0);
        assert!((g.g(0.5).unwrap() - (3f64.sqrt() - 1.0) / 2.0).abs() < 1e-15);
        assert!((g.g_bisect(2.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((g.g_bisect(6.0).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(osc().g(0.0).unwrap(), 0.0);
        assert!(matches!(g.g(-0.1), Err(Error::Domain(_))));
        assert_eq!(g.k(0.5), 0.5);
    }

    // Frozen from a 40-digit mpmath bisection of the same piecewise gauge.
    #[test]
    fn oscillatory_values_match_high_precision_oracle() {
        let g = osc();
        let cases = [
            (1e-6, 0.000_951_251_412_865_223_74),
            (0.5, 0.707_056_737_976_159_34),
            (2.0, 1.414_163_518_245_378_4),
            (1e-20, 6.218_060_542_600_670_4e-11),
            (4.0, 1.999_949_955_603_604_1),
        ];
        for (s, want) in cases {
            let got = g.g(s).unwrap();
            assert!(((got - want) / want).abs() < 1e-14, "g({s}) = {got}, oracle {want}");
        }
        assert!((g.k(1e-3) - 1e-7).abs() < 1e-21);
        assert!((g.k(1e-6) - 1e-11).abs() < 1e-25);
        assert!((g.k(5e-7) - 4.994_995_045_045_045e-12).abs() < 1e-25);
        assert!((g.k(2.0) - 2.001_800_900_900_900_9e-4).abs() < 1e-17);
    }

    #[test]
    fn oscillatory_construction() {
        let pl = PiecewiseLinearGauge::oscillatory(10.0, 1e-3, 8).unwrap();
        assert_eq!(pl.breakpoints().len(), 8);
        // b_2 = 1e-6 is an even level
        let b2 = 1e-6;
        assert!((pl.eval(b2) / (b2 * b2) - 10.0).abs() < 1e-9);
        let b1 = 1e-3;
        assert!((pl.eval(b1) / (b1 * b1) - 0.1).abs() < 1e-12);
        assert!(check_gauge(&osc(), &default_check_grid()).passed());
    }

    #[test]
    fn oscillatory_rejects_bad_parameters() {
        assert!(Gauge::oscillatory(10.0, 0.5, 8).is_err());
        assert!(Gauge::oscillatory(1.0, 1e-3, 8).is_err());
        assert!(Gauge::oscillatory(10.0, 1e-3, 3).is_err());
        assert!(Gauge::oscillatory(10.0, 0.0, 8).is_err());
    }

    #[test]
    fn slope_verifier_names_the_offending_pair() {
        // the M=10, r=0.5 node set, bypassing the parameter precondition
        let (m, r) = (10.0f64, 0.5f64);
        let mut b = Vec::new();
        let mut v = Vec::new();
        for n in (1..=8).rev() {
            let bn = r.powi(n);
            b.push(bn);
            v.push(if n % 2 == 0 { m * bn * bn } else { bn * bn / m });
        }
        match PiecewiseLinearGauge::new(b, v) {
            Err(Error::InvalidGauge(msg)) => assert!(msg.contains("slope decreases"), "{msg}"),
            other => panic!("expected slope error, got {other:?}"),
        }
    }

    #[test]
    fn piecewise_rejects_malformed_nodes() {
        assert!(PiecewiseLinearGauge::new(vec![], vec![]).is_err());
        assert!(PiecewiseLinearGauge::new(vec![1.0, 2.0], vec![1.0]).is_err());
        assert!(PiecewiseLinearGauge::new(vec![2.0, 1.0], vec![1.0, 3.0]).is_err());
        assert!(PiecewiseLinearGauge::new(vec![1.0], vec![0.0]).is_err());
        assert!(PiecewiseLinearGauge::new(vec![1.0, 2.0], vec![1.0, 3.0]).is_ok());
    }

    #[test]
    fn piecewise_is_continuous_at_breakpoints() {
        let pl = PiecewiseLinearGauge::oscillatory(10.0, 1e-3, 8).unwrap();
        let steepest = pl.slopes().iter().cloned().fold(0.0, f64::max);
        for (&b, &v) in pl.breakpoints().iter().zip(pl.values()) {
            let h = b * 1e-9;
            assert_eq!(pl.eval(b), v);
            for side in [pl.eval(b - h), pl.eval(b + h)] {
                assert!((side - v).abs() <= steepest * h * (1.0 + 1e-6));
            }
        }
    }

    #[test]
    fn check_gauge_linear_passes() {
        let r = check_gauge(&Gauge::linear(), &default_check_grid());
        assert!(r.passed(), "{r}");
        assert_eq!(r.checks.len(), 4);
    }

    #[test]
    fn check_gauge_flags_concave_sqrt() {
        let g = Gauge::raw("sqrt", f64::sqrt);
        let r = check_gauge(&g, &[0.01, 1.0]);
        let c = r.check("k midpoint convex").unwrap();
        assert!(!c.passed);
        // worst pair over the grid plus the origin
        assert_eq!(c.witness.scalars[1], 1.0);
        assert!(r.check("k strictly increasing").unwrap().passed);
        assert!(Gauge::raw("sqrt", f64::sqrt).validate().is_err());
    }

    #[test]
    fn check_gauge_flags_nonmonotone_and_offset() {
        let r = check_gauge(&Gauge::raw("wiggle", |t: f64| t * t + 1.0), &[0.5, 1.0]);
        assert!(!r.check("k(0)=0").unwrap().passed);
        let r = check_gauge(&Gauge::raw("dip", |t: f64| (t - 1.0).powi(2) - 1.0), &[0.5, 1.0, 2.0]);
        assert!(!r.check("k strictly increasing").unwrap().passed);
    }

    #[test]
    fn check_gauge_rejects_bad_grid() {
        assert!(!check_gauge(&Gauge::linear(), &[]).passed());
        assert!(!check_gauge(&Gauge::linear(), &[1.0, 0.5]).passed());
    }

    #[test]
    fn spec_json_parsing() {
        assert_eq!(GaugeSpec::from_json(r#"{"type":"linear"}"#).unwrap(), GaugeSpec::Linear {});
        let s = GaugeSpec::from_json(r#"{"type":"oscillatory","M":10,"r":0.001,"levels":8}"#).unwrap();
        assert_eq!(s, GaugeSpec::default_oscillatory());
        let s = GaugeSpec::from_json(r#"{"type":"piecewise","breakpoints":[1,2],"values":[1,3]}"#).unwrap();
        assert!(s.build().is_ok());
        let s = GaugeSpec::from_json(r#"{"type":"power","exponent":0.5}"#).unwrap();
        assert!(s.build().unwrap().validate().is_err());
        assert!(GaugeSpec::from_json(r#"{"type":"cubic"}"#).is_err());
        assert!(GaugeSpec::from_json(r#"{"type":"linear","extra":1}"#).is_err());
        let bad = GaugeSpec::from_json(r#"{"type":"piecewise","breakpoints":[1,2],"values":[3,4]}"#).unwrap();
        assert!(bad.build().is_err());
    }

    proptest! {
        #[test]
        fn g_and_g_inverse_round_trip(s in 0.0..1e6f64) {
            for gauge in [Gauge::linear(), osc()] {
                let t = gauge.g(s).unwrap();
                let back = gauge.g_inverse(t).unwrap();
                prop_assert!((back - s).abs() <= DEFAULT_TAU_INV * s.max(1.0));
                prop_assert!(t <= s.sqrt() * (1.0 + 4.0 * f64::EPSILON));
            }
        }

        #[test]
        fn g_relative_accuracy_at_tiny_scales(e in -24.0..0.0f64) {
            // g∘g⁻¹ is the well-conditioned direction near the kinks of k
            let t = 10f64.powf(e);
            let gauge = osc();
            let back = gauge.g(gauge.g_inverse(t).unwrap()).unwrap();
            prop_assert!(((back - t) / t).abs() <= 4.0 * f64::EPSILON);
        }

        #[test]
        fn g_is_nondecreasing(a in 0.0..100.0f64, b in 0.0..100.0f64) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let gauge = osc();
            prop_assert!(gauge.g(lo).unwrap() <= gauge.g(hi).unwrap());
        }

        #[test]
        fn piecewise_k_over_t_nondecreasing(a in -30.0..1.0f64, b in -30.0..1.0f64) {
            let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
            let pl = PiecewiseLinearGauge::oscillatory(10.0, 1e-3, 8).unwrap();
            let (s, t) = (10f64.powf(lo), 10f64.powf(hi));
            prop_assert!(pl.eval(s) / s <= pl.eval(t) / t * (1.0 + 1e-12));
        }
    }
}
