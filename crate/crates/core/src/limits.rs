//! Numerical ε → 0 limit probes.
//!
//! Every probe samples a quantity on a geometric grid `ε_j = ε₀ qʲ` and
//! classifies the tail of the sampled curve:
//!
//! * **diverging** if any of the last `2w` values is non-finite or exceeds
//!   the divergence bound in absolute value;
//! * **converged** if the last `w` values spread by at most `atol` and the
//!   means of the last two windows of length `w` agree within `atol`;
//! * **oscillating** if both of the last two windows spread by more than
//!   `atol`;
//! * **unsettled** otherwise (for instance a slow drift that has not yet
//!   flattened out).
//!
//! Point-valued traces are classified one component at a time and the worst
//! component wins. Uniformity over a compact set is approximated by the sup
//! over a finite sample of it.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::dilatations::{beta_bar, delta_bar, delta_std};
use crate::error::{Error, Result};
use crate::gauges::ValidGauge;
use crate::h1::{omega, sgn, H1Point};
use crate::metrics::{rho_dist, INVERSION_TOL};
use crate::report::{Check, VerificationReport, Witness};

/// Geometric grid `ε_j = eps0 · ratioʲ`, `j = 0..count`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EpsGrid {
    pub eps0: f64,
    pub ratio: f64,
    pub count: usize,
}

impl Default for EpsGrid {
    fn default() -> Self {
        EpsGrid { eps0: 1.0, ratio: 0.5, count: 37 }
    }
}

/// Smallest admissible `ε²` on a grid.
pub const UNDERFLOW_GUARD: f64 = 1e3 * f64::MIN_POSITIVE;

impl EpsGrid {
    pub fn new(eps0: f64, ratio: f64, count: usize) -> Result<Self> {
        if !(eps0 > 0.0 && eps0.is_finite()) {
            return Err(Error::Usage(format!("eps0 must be finite and > 0, got {eps0}")));
        }
        if !(ratio > 0.0 && ratio < 1.0) {
            return Err(Error::Usage(format!("ratio must lie in (0, 1), got {ratio}")));
        }
        if count == 0 {
            return Err(Error::Usage("grid needs at least one point".into()));
        }
        let grid = EpsGrid { eps0, ratio, count };
        let last = grid.eps(count - 1);
        if !(last * last >= UNDERFLOW_GUARD) {
            return Err(Error::Usage(format!(
                "grid reaches eps = {last:e}, whose square {:e} is below the underflow guard {UNDERFLOW_GUARD:e}",
                last * last
            )));
        }
        Ok(grid)
    }

    pub fn eps(&self, j: usize) -> f64 {
        self.eps0 * self.ratio.powi(j as i32)
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.count).map(|j| self.eps(j)).collect()
    }

    pub fn finest(&self) -> f64 {
        self.eps(self.count - 1)
    }
}

/// Window length, tolerance and divergence bound used by the classifier.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitParams {
    pub window: usize,
    pub atol: f64,
    pub divergence_bound: f64,
}

impl Default for LimitParams {
    fn default() -> Self {
        LimitParams { window: 6, atol: 1e-4, divergence_bound: 1e6 }
    }
}

impl LimitParams {
    pub fn validate(&self) -> Result<()> {
        if self.window == 0 {
            return Err(Error::Usage("window must be at least 1".into()));
        }
        if !(self.atol > 0.0 && self.atol.is_finite()) {
            return Err(Error::Usage(format!("atol must be finite and > 0, got {}", self.atol)));
        }
        if !(self.divergence_bound > 0.0) {
            return Err(Error::Usage(format!("divergence bound must be > 0, got {}", self.divergence_bound)));
        }
        Ok(())
    }

    /// Errors unless a sequence of `len` values holds two full windows.
    pub fn require_len(&self, len: usize) -> Result<()> {
        self.validate()?;
        if len < 2 * self.window {
            return Err(Error::Usage(format!(
                "{len} samples cannot hold two windows of length {}",
                self.window
            )));
        }
        Ok(())
    }
}

/// Values that can be traced: scalars and points, seen as component arrays.
pub trait Sample: Copy + fmt::Debug {
    const DIM: usize;
    fn component(&self, i: usize) -> f64;
    fn from_components(c: &[f64]) -> Self;
}

impl Sample for f64 {
    const DIM: usize = 1;

    fn component(&self, _: usize) -> f64 {
        *self
    }

    fn from_components(c: &[f64]) -> Self {
        c[0]
    }
}

impl Sample for H1Point {
    const DIM: usize = 3;

    fn component(&self, i: usize) -> f64 {
        self.components()[i]
    }

    fn from_components(c: &[f64]) -> Self {
        H1Point::new(c[0], c[1], c[2])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Classification<T> {
    Converged { limit: T },
    Oscillating { liminf: T, limsup: T },
    Unsettled { liminf: T, limsup: T },
    Diverging,
}

/// Outcome label without the attached values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Converged,
    Oscillating,
    Unsettled,
    Diverging,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Converged => "converged",
            Outcome::Oscillating => "oscillating",
            Outcome::Unsettled => "unsettled",
            Outcome::Diverging => "diverging",
        })
    }
}

impl<T: Copy> Classification<T> {
    pub fn outcome(&self) -> Outcome {
        match self {
            Classification::Converged { .. } => Outcome::Converged,
            Classification::Oscillating { .. } => Outcome::Oscillating,
            Classification::Unsettled { .. } => Outcome::Unsettled,
            Classification::Diverging => Outcome::Diverging,
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, Classification::Converged { .. })
    }

    pub fn limit(&self) -> Option<T> {
        match self {
            Classification::Converged { limit } => Some(*limit),
            _ => None,
        }
    }

    pub fn bounds(&self) -> Option<(T, T)> {
        match self {
            Classification::Oscillating { liminf, limsup } | Classification::Unsettled { liminf, limsup } => {
                Some((*liminf, *limsup))
            }
            _ => None,
        }
    }
}

impl Classification<f64> {
    /// `limsup − liminf` for non-converged, non-diverging outcomes.
    pub fn gap(&self) -> Option<f64> {
        self.bounds().map(|(lo, hi)| hi - lo)
    }
}

fn spread(w: &[f64]) -> f64 {
    let (lo, hi) = min_max(w);
    hi - lo
}

fn min_max(w: &[f64]) -> (f64, f64) {
    w.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
}

fn mean(w: &[f64]) -> f64 {
    w.iter().sum::<f64>() / w.len() as f64
}

/// Classifies a scalar sequence sampled along a grid.
pub fn classify_limit(values: &[f64], params: &LimitParams) -> Result<Classification<f64>> {
    params.require_len(values.len())?;
    let w = params.window;
    let tail = &values[values.len() - 2 * w..];
    if tail.iter().any(|v| !v.is_finite() || v.abs() > params.divergence_bound) {
        return Ok(Classification::Diverging);
    }
    let (prev, last) = tail.split_at(w);
    let (lo, hi) = min_max(tail);
    let last_spread = spread(last);
    if last_spread <= params.atol && (mean(last) - mean(prev)).abs() <= params.atol {
        Ok(Classification::Converged { limit: mean(last) })
    } else if last_spread > params.atol && spread(prev) > params.atol {
        Ok(Classification::Oscillating { liminf: lo, limsup: hi })
    } else {
        Ok(Classification::Unsettled { liminf: lo, limsup: hi })
    }
}

/// Componentwise classification; the worst component decides.
pub fn classify_samples<T: Sample>(values: &[T], params: &LimitParams) -> Result<Classification<T>> {
    params.require_len(values.len())?;
    let per: Vec<Classification<f64>> = (0..T::DIM)
        .map(|i| {
            let series: Vec<f64> = values.iter().map(|v| v.component(i)).collect();
            classify_limit(&series, params)
        })
        .collect::<Result<_>>()?;
    if per.iter().any(|c| c.outcome() == Outcome::Diverging) {
        return Ok(Classification::Diverging);
    }
    if per.iter().all(Classification::is_converged) {
        let limit: Vec<f64> = per.iter().map(|c| c.limit().unwrap_or(f64::NAN)).collect();
        return Ok(Classification::Converged { limit: T::from_components(&limit) });
    }
    let tail = &values[values.len() - 2 * params.window..];
    let mut lo = vec![f64::INFINITY; T::DIM];
    let mut hi = vec![f64::NEG_INFINITY; T::DIM];
    for v in tail {
        for i in 0..T::DIM {
            lo[i] = lo[i].min(v.component(i));
            hi[i] = hi[i].max(v.component(i));
        }
    }
    let (liminf, limsup) = (T::from_components(&lo), T::from_components(&hi));
    if per.iter().any(|c| c.outcome() == Outcome::Oscillating) {
        Ok(Classification::Oscillating { liminf, limsup })
    } else {
        Ok(Classification::Unsettled { liminf, limsup })
    }
}

/// A sampled `ε ↦ value` curve with its classification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTrace<T> {
    pub probe: String,
    pub gauge: String,
    pub grid: EpsGrid,
    pub params: LimitParams,
    pub values: Vec<T>,
    pub classification: Classification<T>,
}

impl<T: Sample> ConvergenceTrace<T> {
    pub fn new(probe: impl Into<String>, gauge: impl Into<String>, grid: EpsGrid, params: LimitParams, values: Vec<T>) -> Result<Self> {
        let classification = classify_samples(&values, &params)?;
        Ok(ConvergenceTrace { probe: probe.into(), gauge: gauge.into(), grid, params, values, classification })
    }

    /// Recomputes the classification from the stored values.
    pub fn reclassify(&self) -> Result<Classification<T>> {
        classify_samples(&self.values, &self.params)
    }

    /// Mean of the last window, per component.
    pub fn tail_mean(&self) -> T {
        let last = &self.values[self.values.len() - self.params.window..];
        let c: Vec<f64> = (0..T::DIM).map(|i| mean(&last.iter().map(|v| v.component(i)).collect::<Vec<_>>())).collect();
        T::from_components(&c)
    }

    /// CSV with a header row; shortest round-trip decimal rendering.
    pub fn to_csv(&self) -> String {
        let mut out = String::from(if T::DIM == 1 { "epsilon,value\n" } else { "epsilon,x1,x2,xbar\n" });
        for (j, v) in self.values.iter().enumerate() {
            out.push_str(&self.grid.eps(j).to_string());
            for i in 0..T::DIM {
                out.push(',');
                out.push_str(&v.component(i).to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn summary(&self, arguments: Vec<(String, f64)>) -> TraceSummary<T> {
        TraceSummary {
            gauge: self.gauge.clone(),
            probe: self.probe.clone(),
            outcome: self.classification.outcome(),
            classification: self.classification,
            grid: self.grid,
            params: self.params,
            arguments,
        }
    }
}

/// Parses the CSV written by [`ConvergenceTrace::to_csv`] back into `(ε, components)` rows.
pub fn parse_trace_csv(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Parse("empty trace".into()))?;
    let width = header.split(',').count();
    lines
        .map(|line| {
            let row: Vec<f64> = line
                .split(',')
                .map(|c| c.parse::<f64>().map_err(|e| Error::Parse(format!("{c:?}: {e}"))))
                .collect::<Result<_>>()?;
            if row.len() != width {
                return Err(Error::Parse(format!("row {line:?} has {} columns, header has {width}", row.len())));
            }
            Ok(row)
        })
        .collect()
}

/// Structured record of one probe run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceSummary<T> {
    pub gauge: String,
    pub probe: String,
    pub outcome: Outcome,
    pub classification: Classification<T>,
    pub grid: EpsGrid,
    pub params: LimitParams,
    pub arguments: Vec<(String, f64)>,
}

/// `A_ε(ū) = g(ε²|ū|)/ε`.
pub fn a_eps(gauge: &ValidGauge, eps: f64, ubar: f64) -> Result<f64> {
    Ok(gauge.g(eps * eps * ubar.abs())? / eps)
}

pub fn a_probe(gauge: &ValidGauge, ubar: f64, grid: &EpsGrid, params: &LimitParams) -> Result<ConvergenceTrace<f64>> {
    params.require_len(grid.count)?;
    let values = grid.values().into_iter().map(|e| a_eps(gauge, e, ubar)).collect::<Result<Vec<_>>>()?;
    ConvergenceTrace::new("a", gauge.label(), *grid, *params, values)
}

pub fn beta_probe(gauge: &ValidGauge, p: H1Point, q: H1Point, grid: &EpsGrid, params: &LimitParams) -> Result<ConvergenceTrace<H1Point>> {
    params.require_len(grid.count)?;
    let values = grid.values().into_iter().map(|e| beta_bar(gauge, e, p, q)).collect::<Result<Vec<_>>>()?;
    ConvergenceTrace::new("beta", gauge.label(), *grid, *params, values)
}

/// Trace of `δ̄_{1/ε} δ_ε u`, with its distance to the closed form
/// `(u_h, sgn(ū) g⁻¹(A_ε(ū)))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DerivabilityTrace {
    pub trace: ConvergenceTrace<H1Point>,
    /// Largest componentwise gap to the closed form, relative to `max(1, |value|)`.
    pub closed_form_residual: f64,
}

impl DerivabilityTrace {
    pub fn closed_form_holds(&self) -> bool {
        self.closed_form_residual <= INVERSION_TOL
    }
}

pub fn id_derivability_probe(gauge: &ValidGauge, u: H1Point, grid: &EpsGrid, params: &LimitParams) -> Result<DerivabilityTrace> {
    params.require_len(grid.count)?;
    let mut values = Vec::with_capacity(grid.count);
    let mut residual = 0.0_f64;
    for e in grid.values() {
        let v = delta_bar(gauge, 1.0 / e, delta_std(e, u)?)?;
        let closed = H1Point::new(u.x[0], u.x[1], sgn(u.xbar) * gauge.g_inverse(a_eps(gauge, e, u.xbar)?)?);
        residual = residual.max(v.max_abs_diff(&closed) / v.max_abs().max(1.0));
        values.push(v);
    }
    Ok(DerivabilityTrace {
        trace: ConvergenceTrace::new("derivability", gauge.label(), *grid, *params, values)?,
        closed_form_residual: residual,
    })
}

/// Result of probing a family of limits over a sampled compact set.
#[derive(Debug, Clone, PartialEq)]
pub struct UniformProbe<K, T> {
    pub points: Vec<K>,
    pub traces: Vec<ConvergenceTrace<T>>,
    /// `s_j = sup_k |v_j(k) − L(k)|`, `L(k)` the tail mean of trace `k`.
    pub sup_trace: ConvergenceTrace<f64>,
    /// Index of the point realizing the largest tail deviation.
    pub witness: usize,
}

impl<K: Copy, T: Sample> UniformProbe<K, T> {
    /// Uniform convergence: the sup trace settles at (numerically) zero.
    pub fn passed(&self) -> bool {
        matches!(self.sup_trace.classification, Classification::Converged { limit } if limit.abs() <= self.sup_trace.params.atol)
    }

    pub fn witness_point(&self) -> K {
        self.points[self.witness]
    }

    pub fn to_check(&self, name: impl Into<String>, witness: Witness) -> Check {
        let tail = &self.sup_trace.values[self.sup_trace.values.len() - 2 * self.sup_trace.params.window..];
        let worst = tail.iter().cloned().fold(0.0, f64::max);
        Check {
            name: name.into(),
            passed: self.passed(),
            samples: self.points.len(),
            worst,
            tolerance: self.sup_trace.params.atol,
            witness: if self.passed() { Witness::default() } else { witness },
            note: format!("sup trace {}", self.sup_trace.classification.outcome()),
        }
    }
}

/// Runs `probe` at every point of `points` and classifies the sup over the
/// points of each trace's deviation from its own tail mean.
pub fn uniform_probe<K, T, F>(points: &[K], grid: &EpsGrid, params: &LimitParams, mut probe: F) -> Result<UniformProbe<K, T>>
where
    K: Copy,
    T: Sample,
    F: FnMut(&K, &EpsGrid, &LimitParams) -> Result<ConvergenceTrace<T>>,
{
    if points.is_empty() {
        return Err(Error::Usage("uniform probe needs at least one point".into()));
    }
    params.require_len(grid.count)?;
    let traces: Vec<ConvergenceTrace<T>> = points.iter().map(|k| probe(k, grid, params)).collect::<Result<_>>()?;
    let mut sup = vec![0.0_f64; grid.count];
    let mut witness = 0;
    let mut witness_dev = f64::NEG_INFINITY;
    let tail_start = grid.count - 2 * params.window;
    for (idx, t) in traces.iter().enumerate() {
        let reference = t.tail_mean();
        for (j, v) in t.values.iter().enumerate() {
            let dev = (0..T::DIM).fold(0.0_f64, |m, i| {
                let d = (v.component(i) - reference.component(i)).abs();
                if d.is_nan() { f64::INFINITY } else { m.max(d) }
            });
            sup[j] = sup[j].max(dev);
            if j >= tail_start && dev > witness_dev {
                witness_dev = dev;
                witness = idx;
            }
        }
    }
    let probe_name = traces[0].probe.clone();
    let gauge = traces[0].gauge.clone();
    let sup_trace = ConvergenceTrace::new(format!("sup-{probe_name}"), gauge, *grid, *params, sup)?;
    Ok(UniformProbe { points: points.to_vec(), traces, sup_trace, witness })
}

/// `m_ε(v) = ρ(base, base · δ_ε v)/ε`.
pub fn metric_diff_quotient(gauge: &ValidGauge, base: H1Point, v: H1Point, eps: f64) -> Result<f64> {
    Ok(rho_dist(gauge, base, base * delta_std(eps, v)?)? / eps)
}

pub fn metric_diff_trace(gauge: &ValidGauge, base: H1Point, v: H1Point, grid: &EpsGrid, params: &LimitParams) -> Result<ConvergenceTrace<f64>> {
    params.require_len(grid.count)?;
    let values = grid
        .values()
        .into_iter()
        .map(|e| metric_diff_quotient(gauge, base, v, e))
        .collect::<Result<Vec<_>>>()?;
    ConvergenceTrace::new("metric-diff", gauge.label(), *grid, *params, values)
}

/// Estimate of the seminorm `η(v)`: mean of the last window of `m_ε(v)`.
pub fn estimate_eta(gauge: &ValidGauge, base: H1Point, v: H1Point, grid: &EpsGrid, params: &LimitParams) -> Result<f64> {
    Ok(metric_diff_trace(gauge, base, v, grid, params)?.tail_mean())
}

/// Horizontal parts in `{−1, 0, 1}²`, vertical in `{−1, 0, 1}`.
pub fn default_v_grid() -> Vec<H1Point> {
    let s = [-1.0, 0.0, 1.0];
    let mut out = Vec::with_capacity(27);
    for &a in &s {
        for &b in &s {
            for &c in &s {
                out.push(H1Point::new(a, b, c));
            }
        }
    }
    out
}

/// Dilatation parameters used by the seminorm homogeneity check.
pub const HOMOGENEITY_EPS: [f64; 3] = [0.25, 0.5, 2.0];

#[derive(Debug, Clone, PartialEq)]
pub struct MetricDiffReport {
    pub base: H1Point,
    pub uniform: UniformProbe<H1Point, f64>,
    /// `(v, η(v))` on the sampled set, present when the limit is uniform.
    pub eta: Vec<(H1Point, f64)>,
    /// Seminorm law checks, present when the limit is uniform.
    pub seminorm: Option<VerificationReport>,
}

impl MetricDiffReport {
    pub fn differentiable(&self) -> bool {
        self.uniform.passed()
    }

    /// A point of `V` whose difference quotient fails to settle.
    pub fn witness(&self) -> Option<H1Point> {
        (!self.differentiable()).then(|| self.uniform.witness_point())
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut r = VerificationReport::new(format!("metric differentiability of id at {}", self.base));
        r.push(self.uniform.to_check("difference quotients converge uniformly", Witness::points(vec![self.uniform.witness_point()])));
        if let Some(s) = &self.seminorm {
            r.extend(s.clone());
        }
        r
    }
}

/// Probes metric differentiability of `id: (H(1), d, δ) → (H(1), ρ)` at `base`.
pub fn metric_diff_probe(
    gauge: &ValidGauge,
    base: H1Point,
    v_grid: &[H1Point],
    grid: &EpsGrid,
    params: &LimitParams,
    seminorm_tol: f64,
) -> Result<MetricDiffReport> {
    let uniform = uniform_probe(v_grid, grid, params, |v, grid, params| metric_diff_trace(gauge, base, *v, grid, params))?;
    if !uniform.passed() {
        return Ok(MetricDiffReport { base, uniform, eta: Vec::new(), seminorm: None });
    }
    let eta: Vec<(H1Point, f64)> = v_grid.iter().zip(&uniform.traces).map(|(v, t)| (*v, t.tail_mean())).collect();
    let seminorm = check_seminorm(gauge, base, &eta, grid, params, seminorm_tol)?;
    Ok(MetricDiffReport { base, uniform, eta, seminorm: Some(seminorm) })
}

/// Homogeneity `η(δ_ε v) = ε η(v)` and subadditivity `η(vw) ≤ η(v) + η(w)`,
/// with `η` at new points estimated by fresh traces.
pub fn check_seminorm(
    gauge: &ValidGauge,
    base: H1Point,
    eta: &[(H1Point, f64)],
    grid: &EpsGrid,
    params: &LimitParams,
    tol: f64,
) -> Result<VerificationReport> {
    let mut report = VerificationReport::new("seminorm laws");

    let mut worst = 0.0_f64;
    let mut witness = Witness::default();
    let mut n = 0;
    for &(v, ev) in eta {
        for &e in &HOMOGENEITY_EPS {
            let scaled = estimate_eta(gauge, base, delta_std(e, v)?, grid, params)?;
            let err = (scaled - e * ev).abs();
            n += 1;
            if err > worst || err.is_nan() {
                worst = if err.is_nan() { f64::INFINITY } else { err };
                witness = Witness { points: vec![v], scalars: vec![e] };
            }
        }
    }
    report.push(Check::bounded("seminorm homogeneity", n, worst, tol, witness));

    let mut worst = f64::NEG_INFINITY;
    let mut witness = Witness::default();
    let mut n = 0;
    for &(v, ev) in eta {
        for &(w, ew) in eta {
            let vw = estimate_eta(gauge, base, v * w, grid, params)?;
            let excess = vw - ev - ew;
            n += 1;
            if excess > worst || excess.is_nan() {
                worst = if excess.is_nan() { f64::INFINITY } else { excess };
                witness = Witness::points(vec![v, w]);
            }
        }
    }
    report.push(Check::bounded("seminorm subadditivity", n, worst.max(0.0), tol, witness));
    Ok(report)
}

/// `ν(v) = max{‖v_h‖, A(|v̄|)}`, available only when the `A` limit converges.
pub fn metric_differential(gauge: &ValidGauge, v: H1Point, grid: &EpsGrid, params: &LimitParams) -> Result<f64> {
    let trace = a_probe(gauge, v.xbar.abs(), grid, params)?;
    match trace.classification {
        Classification::Converged { limit } => Ok(v.horizontal_norm().max(limit)),
        other => Err(Error::Unavailable(format!(
            "A({}) does not converge ({}); use the metric differentiability probe",
            v.xbar.abs(),
            other.outcome()
        ))),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementEntry {
    pub p: H1Point,
    pub q: H1Point,
    pub ubar: f64,
    pub beta: Outcome,
    pub a: Outcome,
}

impl AgreementEntry {
    pub fn agree(&self) -> bool {
        (self.beta == Outcome::Converged) == (self.a == Outcome::Converged)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AgreementReport {
    pub entries: Vec<AgreementEntry>,
    /// Pairs dropped because `x̄ ≠ 0`, `ȳ ≠ 0` or `ω(x, y) = 0`.
    pub excluded: Vec<(H1Point, H1Point)>,
}

impl AgreementReport {
    pub fn all_agree(&self) -> bool {
        !self.entries.is_empty() && self.entries.iter().all(AgreementEntry::agree)
    }

    pub fn to_report(&self) -> VerificationReport {
        let mut r = VerificationReport::new("A4 convergence vs existence of A");
        for (i, e) in self.entries.iter().enumerate() {
            let check = Check {
                name: format!("agreement #{i}"),
                passed: e.agree(),
                samples: 1,
                worst: if e.agree() { 0.0 } else { 1.0 },
                tolerance: 0.0,
                witness: Witness { points: vec![e.p, e.q], scalars: vec![e.ubar] },
                note: format!("beta {}, A {}", e.beta, e.a),
            };
            r.push(check);
        }
        r
    }
}

/// Pairs on the plane `x̄ = ȳ = 0` with `ω(x, y) ≠ 0`.
pub fn default_a4_samples() -> Vec<(H1Point, H1Point)> {
    vec![
        (H1Point::new(1.0, 0.0, 0.0), H1Point::new(0.0, 1.0, 0.0)),
        (H1Point::new(1.0, 1.0, 0.0), H1Point::new(-1.0, 2.0, 0.0)),
        (H1Point::new(0.5, -1.0, 0.0), H1Point::new(2.0, 1.0, 0.0)),
        (H1Point::new(-1.5, 0.25, 0.0), H1Point::new(0.5, 0.75, 0.0)),
    ]
}

/// On `x̄ = ȳ = 0` the product law gives
/// `β̄_ε(p, q) = (x + y, sgn(ω) g⁻¹(A_ε(2|ω(x, y)|)))`, so convergence of
/// `β̄_ε` and of `A_ε` at `ū = 2ω(x, y)` must agree.
pub fn a4_equivalence_check(
    gauge: &ValidGauge,
    samples: &[(H1Point, H1Point)],
    grid: &EpsGrid,
    params: &LimitParams,
) -> Result<AgreementReport> {
    params.require_len(grid.count)?;
    let mut entries = Vec::new();
    let mut excluded = Vec::new();
    for &(p, q) in samples {
        let w = omega(p.x, q.x);
        if p.xbar != 0.0 || q.xbar != 0.0 || w == 0.0 {
            excluded.push((p, q));
            continue;
        }
        let ubar = 2.0 * w;
        let beta = beta_probe(gauge, p, q, grid, params)?.classification.outcome();
        let a = a_probe(gauge, ubar, grid, params)?.classification.outcome();
        entries.push(AgreementEntry { p, q, ubar, beta, a });
    }
    if entries.is_empty() {
        return Err(Error::Usage("no admissible samples (need x̄ = ȳ = 0 and ω(x, y) ≠ 0)".into()));
    }
    Ok(AgreementReport { entries, excluded })
}
