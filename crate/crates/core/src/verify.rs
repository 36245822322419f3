//! Seeded verification suite: gauge checks, group axioms, distance samplers
//! and the exact dilatation identities.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::dilatations::{beta_bar, conjugation_residual, delta_bar, delta_std, f_inv, f_map, transported_inv, transported_mul};
use crate::error::Result;
use crate::gauges::{check_gauge, default_check_grid, Gauge, ValidGauge};
use crate::h1::H1Point;
use crate::metrics::{
    d_cc, mu_dist, rho_dist, rho_norm, sample_left_invariance, sample_lipschitz_id, sample_symmetry, sample_triangle,
    sampler_rng, Distance, SampleBox, INVERSION_TOL,
};
use crate::report::{Check, VerificationReport, Witness};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VerifyConfig {
    pub samples: usize,
    pub seed: u64,
    pub region: SampleBox,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig { samples: 10_000, seed: 1, region: SampleBox::default() }
    }
}

impl VerifyConfig {
    /// Sample count for the costlier identity checks.
    fn identity_samples(&self) -> usize {
        (self.samples / 10).max(1)
    }
}

/// Dilatation parameters `2⁻¹⁰, …, 2¹⁰`.
pub fn dyadic_eps_grid() -> Vec<f64> {
    (-10..=10).map(|k| 2f64.powi(k)).collect()
}

/// Running maximum of a sampled violation, with the inputs that produced it.
struct Worst {
    name: String,
    samples: usize,
    worst: f64,
    witness: Witness,
    tolerance: f64,
}

impl Worst {
    fn new(name: impl Into<String>, tolerance: f64) -> Self {
        Worst { name: name.into(), samples: 0, worst: 0.0, witness: Witness::default(), tolerance }
    }

    fn record(&mut self, value: f64, witness: impl FnOnce() -> Witness) {
        self.samples += 1;
        let value = if value.is_nan() { f64::INFINITY } else { value };
        if value > self.worst || (self.witness.is_empty() && self.samples == 1) {
            self.worst = self.worst.max(value);
            self.witness = witness();
        }
    }

    fn finish(self) -> Check {
        let mut c = Check::bounded(self.name, self.samples, self.worst, self.tolerance, Witness::default());
        if !c.passed {
            c.witness = self.witness;
        }
        c
    }
}

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

fn point_rel(a: H1Point, b: H1Point) -> f64 {
    rel(a.max_abs_diff(&b), a.max_abs().max(b.max_abs()))
}

/// Associativity, identity and inverse on sampled triples.
pub fn group_axioms(cfg: &VerifyConfig) -> VerificationReport {
    let mut rng = sampler_rng(cfg.seed, "group");
    let mut assoc = Worst::new("group associativity", INVERSION_TOL);
    let mut ident = Worst::new("group identity", INVERSION_TOL);
    let mut inv = Worst::new("group inverse", INVERSION_TOL);
    let e = H1Point::identity();
    for _ in 0..cfg.samples {
        let (p, q, r) = (cfg.region.sample(&mut rng), cfg.region.sample(&mut rng), cfg.region.sample(&mut rng));
        assoc.record(point_rel((p * q) * r, p * (q * r)), || Witness::points(vec![p, q, r]));
        ident.record(point_rel(p * e, p).max(point_rel(e * p, p)), || Witness::points(vec![p]));
        inv.record(point_rel(p * p.inv(), e).max(point_rel(p.inv() * p, e)), || Witness::points(vec![p]));
    }
    let mut r = VerificationReport::new("group axioms");
    r.push(assoc.finish());
    r.push(ident.finish());
    r.push(inv.finish());
    r
}

/// Triangle, symmetry and left-invariance for `d`, `ρ`, `μ`, and the
/// 1-Lipschitz property of `id: (H(1), d) → (H(1), ρ)`.
pub fn distance_samplers(gauge: &ValidGauge, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("distance samplers");
    let metrics = [Distance::Cc, Distance::Rho(gauge.clone()), Distance::Mu(gauge.clone())];
    for m in &metrics {
        r.push(sample_triangle(m, cfg.samples, cfg.seed, cfg.region)?.to_check());
        r.push(sample_symmetry(m, cfg.samples, cfg.seed, cfg.region)?.to_check());
        r.push(sample_left_invariance(m, cfg.samples, cfg.seed, cfg.region)?.to_check());
    }
    r.push(sample_lipschitz_id(gauge, cfg.samples, cfg.seed, cfg.region)?.to_check());
    Ok(r)
}

/// Dilatation identities and the transported-group structure.
pub fn dilatation_identities(gauge: &ValidGauge, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut r = VerificationReport::new("dilatation identities");
    let grid = dyadic_eps_grid();
    let n = cfg.samples;
    let m = cfg.identity_samples();
    let region = cfg.region;

    let mut rng = sampler_rng(cfg.seed, "isometry");
    let mut iso = Worst::new("F is an isometry (rho -> mu)", INVERSION_TOL);
    for _ in 0..n {
        let (p, q) = (region.sample(&mut rng), region.sample(&mut rng));
        let rho = rho_dist(gauge, p, q)?;
        let mu = mu_dist(gauge, f_map(gauge, p)?, f_map(gauge, q)?)?;
        iso.record(rel((mu - rho).abs(), rho), || Witness::points(vec![p, q]));
    }
    r.push(iso.finish());

    let mut rng = sampler_rng(cfg.seed, "semigroup");
    let mut semi = Worst::new("dilatation semigroup", INVERSION_TOL);
    for i in 0..n {
        let (e, mu) = (grid[i % grid.len()], grid[(i / grid.len()) % grid.len()]);
        let p = region.sample(&mut rng);
        let lhs = delta_bar(gauge, e, delta_bar(gauge, mu, p)?)?;
        let rhs = delta_bar(gauge, e * mu, p)?;
        semi.record(point_rel(lhs, rhs), || Witness { points: vec![p], scalars: vec![e, mu] });
    }
    r.push(semi.finish());

    let mut rng = sampler_rng(cfg.seed, "homogeneity");
    let mut homog = Worst::new("rho homogeneity", INVERSION_TOL);
    for i in 0..n {
        let e = grid[i % grid.len()];
        let p = region.sample(&mut rng);
        let lhs = rho_norm(gauge, delta_bar(gauge, e, p)?)?;
        let rhs = e * rho_norm(gauge, p)?;
        homog.record(rel((lhs - rhs).abs(), rhs), || Witness { points: vec![p], scalars: vec![e] });
    }
    r.push(homog.finish());

    let mut rng = sampler_rng(cfg.seed, "reduction");
    let mut red = Worst::new("rescaled distance equals norm of rescaled product", INVERSION_TOL);
    for _ in 0..m {
        let e = 2f64.powf(-20.0 * rng.random::<f64>());
        let (p, q) = (region.sample(&mut rng), region.sample(&mut rng));
        let lhs = rho_dist(gauge, delta_bar(gauge, e, p)?, delta_bar(gauge, e, q)?)? / e;
        let rhs = rho_norm(gauge, beta_bar(gauge, e, p.inv(), q)?)?;
        red.record(rel((lhs - rhs).abs(), rhs), || Witness { points: vec![p, q], scalars: vec![e] });
    }
    r.push(red.finish());

    let mut rng = sampler_rng(cfg.seed, "conjugation");
    let mut conj = Worst::new("F conjugates the dilatations", INVERSION_TOL);
    for i in 0..m {
        let e = grid[i % grid.len()];
        let p = region.sample(&mut rng);
        let scale = delta_bar(gauge, e, p)?.max_abs();
        conj.record(rel(conjugation_residual(gauge, e, p)?, scale), || Witness { points: vec![p], scalars: vec![e] });
    }
    r.push(conj.finish());

    let mut rng = sampler_rng(cfg.seed, "transport");
    let mut hom = Worst::new("F is a group homomorphism", INVERSION_TOL);
    let mut assoc = Worst::new("transported associativity", INVERSION_TOL);
    let mut inv = Worst::new("transported inverse", INVERSION_TOL);
    for _ in 0..m {
        let (p, q, s) = (region.sample(&mut rng), region.sample(&mut rng), region.sample(&mut rng));
        let (fp, fq, fs) = (f_map(gauge, p)?, f_map(gauge, q)?, f_map(gauge, s)?);
        hom.record(point_rel(f_map(gauge, p * q)?, transported_mul(gauge, fp, fq)?), || Witness::points(vec![p, q]));
        let left = transported_mul(gauge, transported_mul(gauge, fp, fq)?, fs)?;
        let right = transported_mul(gauge, fp, transported_mul(gauge, fq, fs)?)?;
        assoc.record(point_rel(left, right), || Witness::points(vec![fp, fq, fs]));
        let via_f = f_map(gauge, f_inv(gauge, fp)?.inv())?;
        let unit = transported_mul(gauge, fp, transported_inv(fp))?;
        inv.record(point_rel(transported_inv(fp), via_f).max(point_rel(unit, H1Point::identity())), || {
            Witness::points(vec![fp])
        });
    }
    r.push(hom.finish());
    r.push(assoc.finish());
    r.push(inv.finish());

    let mut rng = sampler_rng(cfg.seed, "cc-homogeneity");
    let mut cc = Worst::new("d homogeneity under intrinsic dilatations", INVERSION_TOL);
    for i in 0..m {
        let e = grid[i % grid.len()];
        let (p, q) = (region.sample(&mut rng), region.sample(&mut rng));
        let lhs = d_cc(delta_std(e, p)?, delta_std(e, q)?);
        let rhs = e * d_cc(p, q);
        cc.record(rel((lhs - rhs).abs(), rhs), || Witness { points: vec![p, q], scalars: vec![e] });
    }
    r.push(cc.finish());
    Ok(r)
}

/// Full suite. Stops after the gauge checks if the gauge is invalid.
pub fn verify_suite(gauge: &Gauge, cfg: &VerifyConfig) -> Result<VerificationReport> {
    let mut report = VerificationReport::new(format!("verify {}", gauge.label()));
    let gauge_report = check_gauge(gauge, &default_check_grid());
    let valid = gauge_report.passed();
    report.extend(gauge_report);
    if !valid {
        return Ok(report);
    }
    let gauge = ValidGauge::new(gauge.clone())?;
    report.extend(group_axioms(cfg));
    report.extend(distance_samplers(&gauge, cfg)?);
    report.extend(dilatation_identities(&gauge, cfg)?);
    Ok(report)
}
