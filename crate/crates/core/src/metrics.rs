//! The left-invariant distances on H(1) and randomized samplers for their
//! metric properties.
//!
//! * `d`: gauge `max{‖x‖, √|x̄|}`, compatible with the intrinsic dilatations;
//! * `ρ`: gauge `max{‖x‖, g(|x̄|)}`, homogeneous for `δ̄`;
//! * `μ`: gauge `max{‖x‖, |x̄|}`, left-invariant for the transported product.
//!
//! `‖·‖` is the Euclidean norm on ℝ² throughout.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dilatations::{transported_inv, transported_mul};
use crate::error::{Error, Result};
use crate::gauges::ValidGauge;
use crate::h1::H1Point;
use crate::report::{Check, Witness};

/// Tolerance for identities that are exact in real arithmetic.
pub const EXACT_TOL: f64 = 1e-12;

/// Tolerance for identities that go through a numeric gauge inversion.
pub const INVERSION_TOL: f64 = 1e-9;

pub fn d_norm(p: H1Point) -> f64 {
    p.horizontal_norm().max(p.xbar.abs().sqrt())
}

pub fn d_cc(p: H1Point, q: H1Point) -> f64 {
    d_norm(p.inv() * q)
}

pub fn rho_norm(gauge: &ValidGauge, p: H1Point) -> Result<f64> {
    Ok(p.horizontal_norm().max(gauge.g(p.xbar.abs())?))
}

pub fn rho_dist(gauge: &ValidGauge, p: H1Point, q: H1Point) -> Result<f64> {
    rho_norm(gauge, p.inv() * q)
}

pub fn mu_norm(p: H1Point) -> f64 {
    p.horizontal_norm().max(p.xbar.abs())
}

/// `μ(p, q) = μ(p⁻¹ · q)` in the transported group.
pub fn mu_dist(gauge: &ValidGauge, p: H1Point, q: H1Point) -> Result<f64> {
    Ok(mu_norm(transported_mul(gauge, transported_inv(p), q)?))
}

/// One of the three distances, for generic samplers.
#[derive(Debug, Clone)]
pub enum Distance {
    Cc,
    Rho(ValidGauge),
    Mu(ValidGauge),
}

impl Distance {
    pub fn name(&self) -> &'static str {
        match self {
            Distance::Cc => "d",
            Distance::Rho(_) => "rho",
            Distance::Mu(_) => "mu",
        }
    }

    pub fn dist(&self, p: H1Point, q: H1Point) -> Result<f64> {
        match self {
            Distance::Cc => Ok(d_cc(p, q)),
            Distance::Rho(g) => rho_dist(g, p, q),
            Distance::Mu(g) => mu_dist(g, p, q),
        }
    }

    /// Left translation matching the distance's group law.
    pub fn translate(&self, z: H1Point, p: H1Point) -> Result<H1Point> {
        match self {
            Distance::Cc | Distance::Rho(_) => Ok(z * p),
            Distance::Mu(g) => transported_mul(g, z, p),
        }
    }
}

/// Axis-aligned sampling region: horizontal components uniform in
/// `[−horizontal, horizontal]`, vertical in `[−vertical, vertical]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleBox {
    pub horizontal: f64,
    pub vertical: f64,
}

impl Default for SampleBox {
    fn default() -> Self {
        SampleBox { horizontal: 2.0, vertical: 4.0 }
    }
}

impl SampleBox {
    pub fn new(horizontal: f64, vertical: f64) -> Result<Self> {
        if !(horizontal > 0.0 && horizontal.is_finite() && vertical > 0.0 && vertical.is_finite()) {
            return Err(Error::Usage(format!("sample box half-widths must be positive, got {horizontal},{vertical}")));
        }
        Ok(SampleBox { horizontal, vertical })
    }

    /// Parses `"h,v"`.
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 2 {
            return Err(Error::Parse(format!("expected horizontal,vertical but got {s:?}")));
        }
        let h = parts[0].parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?;
        let v = parts[1].parse::<f64>().map_err(|e| Error::Parse(e.to_string()))?;
        SampleBox::new(h, v)
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> H1Point {
        let h = self.horizontal;
        let v = self.vertical;
        H1Point::new(rng.random_range(-h..=h), rng.random_range(-h..=h), rng.random_range(-v..=v))
    }
}

/// Deterministic RNG for a sampler: the run seed mixed with a per-sampler tag.
pub fn sampler_rng(seed: u64, tag: &str) -> ChaCha8Rng {
    // FNV-1a over the tag
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in tag.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    ChaCha8Rng::seed_from_u64(seed ^ h)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricSampleReport {
    pub property: String,
    pub samples: usize,
    /// Worst violation divided by the largest distance involved in that sample.
    pub worst_violation: f64,
    pub witness: Vec<H1Point>,
    pub tolerance: f64,
}

impl MetricSampleReport {
    pub fn passed(&self) -> bool {
        self.worst_violation <= self.tolerance
    }

    pub fn to_check(&self) -> Check {
        Check::bounded(
            self.property.clone(),
            self.samples,
            self.worst_violation,
            self.tolerance,
            if self.passed() { Witness::default() } else { Witness::points(self.witness.clone()) },
        )
    }
}

fn relative(excess: f64, scale: f64) -> f64 {
    if excess.is_nan() || scale.is_nan() {
        f64::INFINITY
    } else if scale > 0.0 {
        excess / scale
    } else if excess > 0.0 {
        f64::INFINITY
    } else {
        0.0
    }
}

/// Triangle-inequality excess `dist(p,r) − dist(p,q) − dist(q,r)` for one triple, relative.
pub fn triangle_excess(metric: &Distance, p: H1Point, q: H1Point, r: H1Point) -> Result<f64> {
    let pr = metric.dist(p, r)?;
    let pq = metric.dist(p, q)?;
    let qr = metric.dist(q, r)?;
    Ok(relative(pr - pq - qr, pr.max(pq).max(qr)))
}

pub fn sample_triangle(metric: &Distance, n: usize, seed: u64, region: SampleBox) -> Result<MetricSampleReport> {
    let mut rng = sampler_rng(seed, &format!("triangle/{}", metric.name()));
    let mut worst = f64::NEG_INFINITY;
    let mut witness = Vec::new();
    for _ in 0..n {
        let (p, q, r) = (region.sample(&mut rng), region.sample(&mut rng), region.sample(&mut rng));
        let v = triangle_excess(metric, p, q, r)?;
        if v > worst {
            worst = v;
            witness = vec![p, q, r];
        }
    }
    Ok(MetricSampleReport {
        property: format!("triangle inequality ({})", metric.name()),
        samples: n,
        worst_violation: worst,
        witness,
        tolerance: EXACT_TOL,
    })
}

/// Excess of `ρ(p,q) − d(p,q)`, relative to `d(p,q)`.
pub fn lipschitz_excess(gauge: &ValidGauge, p: H1Point, q: H1Point) -> Result<f64> {
    let rho = rho_dist(gauge, p, q)?;
    let d = d_cc(p, q);
    Ok(relative(rho - d, d.max(rho)))
}

/// Samples the claim that `id: (H(1), d) → (H(1), ρ)` is 1-Lipschitz.
pub fn sample_lipschitz_id(gauge: &ValidGauge, n: usize, seed: u64, region: SampleBox) -> Result<MetricSampleReport> {
    let mut rng = sampler_rng(seed, "lipschitz");
    let mut worst = f64::NEG_INFINITY;
    let mut witness = Vec::new();
    for _ in 0..n {
        let (p, q) = (region.sample(&mut rng), region.sample(&mut rng));
        let v = lipschitz_excess(gauge, p, q)?;
        if v > worst {
            worst = v;
            witness = vec![p, q];
        }
    }
    Ok(MetricSampleReport {
        property: "id is 1-Lipschitz (d -> rho)".into(),
        samples: n,
        worst_violation: worst,
        witness,
        tolerance: EXACT_TOL,
    })
}

/// Worst `|dist(z·p, z·q) − dist(p, q)|` relative to `max(1, dist)`.
pub fn sample_left_invariance(metric: &Distance, n: usize, seed: u64, region: SampleBox) -> Result<MetricSampleReport> {
    let mut rng = sampler_rng(seed, &format!("left-invariance/{}", metric.name()));
    let mut worst = 0.0_f64;
    let mut witness = Vec::new();
    let tolerance = match metric {
        Distance::Cc | Distance::Rho(_) => EXACT_TOL,
        Distance::Mu(_) => INVERSION_TOL,
    };
    for _ in 0..n {
        let (z, p, q) = (region.sample(&mut rng), region.sample(&mut rng), region.sample(&mut rng));
        let base = metric.dist(p, q)?;
        let moved = metric.dist(metric.translate(z, p)?, metric.translate(z, q)?)?;
        let v = relative((moved - base).abs(), base.max(1.0));
        if v > worst {
            worst = v;
            witness = vec![z, p, q];
        }
    }
    Ok(MetricSampleReport {
        property: format!("left invariance ({})", metric.name()),
        samples: n,
        worst_violation: worst,
        witness,
        tolerance,
    })
}

/// Symmetry and identity of indiscernibles on sampled pairs.
pub fn sample_symmetry(metric: &Distance, n: usize, seed: u64, region: SampleBox) -> Result<MetricSampleReport> {
    let mut rng = sampler_rng(seed, &format!("symmetry/{}", metric.name()));
    let mut worst = 0.0_f64;
    let mut witness = Vec::new();
    for _ in 0..n {
        let (p, q) = (region.sample(&mut rng), region.sample(&mut rng));
        let pq = metric.dist(p, q)?;
        let qp = metric.dist(q, p)?;
        let pp = metric.dist(p, p)?;
        let neg = if pq < 0.0 { -pq } else { 0.0 };
        let v = relative((pq - qp).abs(), pq.max(1.0)).max(pp).max(neg);
        if v > worst {
            worst = v;
            witness = vec![p, q];
        }
    }
    Ok(MetricSampleReport {
        property: format!("symmetry and d(p,p)=0 ({})", metric.name()),
        samples: n,
        worst_violation: worst,
        witness,
        tolerance: EXACT_TOL,
    })
}
