//! The three dilatation families on H(1), the gauge dilatation field and the
//! rescaled product `β̄_ε`, and the map `F` that conjugates the gauge
//! dilatations into the componentwise ones.
//!
//! * intrinsic `δ_ε(x, x̄) = (εx, ε²x̄)`, a group automorphism;
//! * gauge `δ̄_ε(x, x̄) = (εx, sgn(x̄) g⁻¹(ε g(|x̄|)))`;
//! * euclidean `δ̂_ε(x, x̄) = (εx, εx̄)`.
//!
//! `F(x, x̄) = (x, sgn(x̄) g(|x̄|))` satisfies `δ̄_ε = F⁻¹ δ̂_ε F` and becomes a
//! group isomorphism once H(1) carries the transported product
//! `p · q = F(F⁻¹(p) F⁻¹(q))`. `sgn(0) = 0` everywhere.

use crate::error::{Error, Result};
use crate::gauges::ValidGauge;
use crate::h1::{sgn, H1Point};

pub(crate) fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("dilatation parameter must be finite and > 0, got {eps}")))
    }
}

/// Which family a dilatation belongs to.
#[derive(Debug, Clone)]
pub enum DilationKind {
    Intrinsic,
    Gauge(ValidGauge),
    Euclidean,
}

impl DilationKind {
    pub fn apply(&self, eps: f64, p: H1Point) -> Result<H1Point> {
        match self {
            DilationKind::Intrinsic => delta_std(eps, p),
            DilationKind::Gauge(g) => delta_bar(g, eps, p),
            DilationKind::Euclidean => delta_hat(eps, p),
        }
    }
}

/// Intrinsic dilatation `(εx, ε²x̄)`.
pub fn delta_std(eps: f64, p: H1Point) -> Result<H1Point> {
    check_eps(eps)?;
    Ok(H1Point::new(eps * p.x[0], eps * p.x[1], eps * eps * p.xbar))
}

/// Gauge dilatation `(εx, sgn(x̄) g⁻¹(ε g(|x̄|)))`.
pub fn delta_bar(gauge: &ValidGauge, eps: f64, p: H1Point) -> Result<H1Point> {
    check_eps(eps)?;
    let vertical = if p.xbar == 0.0 {
        0.0
    } else {
        sgn(p.xbar) * gauge.g_inverse(eps * gauge.g(p.xbar.abs())?)?
    };
    Ok(H1Point::new(eps * p.x[0], eps * p.x[1], vertical))
}

/// Componentwise dilatation `(εx, εx̄)`.
pub fn delta_hat(eps: f64, p: H1Point) -> Result<H1Point> {
    check_eps(eps)?;
    Ok(H1Point::new(eps * p.x[0], eps * p.x[1], eps * p.xbar))
}

/// Dilatation field based at `base`: `base · δ̄_ε(base⁻¹ q)`.
pub fn delta_bar_field(gauge: &ValidGauge, eps: f64, base: H1Point, q: H1Point) -> Result<H1Point> {
    Ok(base * delta_bar(gauge, eps, base.inv() * q)?)
}

/// Rescaled product `δ̄_{1/ε}(δ̄_ε(p) δ̄_ε(q))`.
pub fn beta_bar(gauge: &ValidGauge, eps: f64, p: H1Point, q: H1Point) -> Result<H1Point> {
    check_eps(eps)?;
    let prod = delta_bar(gauge, eps, p)? * delta_bar(gauge, eps, q)?;
    delta_bar(gauge, 1.0 / eps, prod)
}

/// `F(x, x̄) = (x, sgn(x̄) g(|x̄|))`.
pub fn f_map(gauge: &ValidGauge, p: H1Point) -> Result<H1Point> {
    Ok(H1Point::new(p.x[0], p.x[1], sgn(p.xbar) * gauge.g(p.xbar.abs())?))
}

/// `F⁻¹(x, x̄) = (x, h(x̄))` with `h(t) = sgn(t)(t² + k(|t|))`.
pub fn f_inv(gauge: &ValidGauge, p: H1Point) -> Result<H1Point> {
    Ok(H1Point::new(p.x[0], p.x[1], h(gauge, p.xbar)?))
}

pub fn h(gauge: &ValidGauge, t: f64) -> Result<f64> {
    Ok(sgn(t) * gauge.g_inverse(t.abs())?)
}

/// Transported product `F(F⁻¹(p) F⁻¹(q))`.
pub fn transported_mul(gauge: &ValidGauge, p: H1Point, q: H1Point) -> Result<H1Point> {
    f_map(gauge, f_inv(gauge, p)? * f_inv(gauge, q)?)
}

/// Inverse in the transported group. `F` is odd in the vertical variable,
/// so `F(F⁻¹(p)⁻¹) = (−x, −x̄)`.
#[inline]
pub fn transported_inv(p: H1Point) -> H1Point {
    p.inv()
}

/// Field of `δ̂` based at `base`, built from the transported product.
pub fn delta_hat_field(gauge: &ValidGauge, eps: f64, base: H1Point, q: H1Point) -> Result<H1Point> {
    let local = delta_hat(eps, transported_mul(gauge, transported_inv(base), q)?)?;
    transported_mul(gauge, base, local)
}

/// `max |δ̄_ε(p) − F⁻¹(δ̂_ε(F(p)))|`, componentwise.
pub fn conjugation_residual(gauge: &ValidGauge, eps: f64, p: H1Point) -> Result<f64> {
    let direct = delta_bar(gauge, eps, p)?;
    let conjugated = f_inv(gauge, delta_hat(eps, f_map(gauge, p)?)?)?;
    Ok(direct.max_abs_diff(&conjugated))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    use crate::test_gauges::{lin, osc};

    fn close(a: H1Point, b: H1Point, tol: f64) -> bool {
        a.max_abs_diff(&b) <= tol * 1f64.max(a.max_abs()).max(b.max_abs())
    }

    #[test]
    fn delta_std_examples() {
        let p = H1Point::new(2.0, 0.0, 4.0);
        assert_eq!(delta_std(1.0, p).unwrap(), p);
        assert_eq!(delta_std(0.5, p).unwrap(), H1Point::new(1.0, 0.0, 1.0));
        assert!(matches!(delta_std(0.0, p), Err(Error::Domain(_))));
        assert!(delta_std(-1.0, p).is_err());
        assert!(delta_std(f64::NAN, p).is_err());
    }

    #[test]
    fn delta_bar_examples() {
        let p = H1Point::new(2.0, 0.0, 6.0);
        assert!(close(delta_bar(&lin(), 1.0, p).unwrap(), p, 1e-15));
        assert!(close(delta_bar(&lin(), 0.5, p).unwrap(), H1Point::new(1.0, 0.0, 2.0), 1e-15));
        for g in [lin(), osc()] {
            assert_eq!(delta_bar(&g, 0.37, H1Point::identity()).unwrap(), H1Point::identity());
            assert!(delta_bar(&g, 0.0, p).is_err());
        }
        // x̄ = 0 stays on the plane
        assert_eq!(delta_bar(&osc(), 3.0, H1Point::new(1.0, -1.0, 0.0)).unwrap(), H1Point::new(3.0, -3.0, 0.0));
        // sign of the vertical part is kept
        let neg = delta_bar(&lin(), 0.5, H1Point::new(0.0, 0.0, -6.0)).unwrap();
        assert!((neg.xbar + 2.0).abs() < 1e-14);
    }

    #[test]
    fn delta_hat_examples() {
        let p = H1Point::new(2.0, 0.0, 6.0);
        assert_eq!(delta_hat(1.0, p).unwrap(), p);
        assert_eq!(delta_hat(0.5, p).unwrap(), H1Point::new(1.0, 0.0, 3.0));
        assert_eq!(
            delta_hat(0.25, delta_hat(8.0, p).unwrap()).unwrap(),
            delta_hat(2.0, p).unwrap()
        );
        assert!(delta_hat(-2.0, p).is_err());
    }

    #[test]
    fn field_examples() {
        let g = lin();
        let q = H1Point::new(0.3, -1.0, 2.0);
        assert_eq!(
            delta_bar_field(&g, 0.5, H1Point::identity(), q).unwrap(),
            delta_bar(&g, 0.5, q).unwrap()
        );
        let base = H1Point::new(1.0, 0.0, 0.0);
        assert!(close(delta_bar_field(&g, 0.5, base, base).unwrap(), base, 1e-12));
        let got = delta_bar_field(&g, 0.5, base, H1Point::new(1.0, 0.0, 6.0)).unwrap();
        assert!(close(got, H1Point::new(1.0, 0.0, 2.0), 1e-14), "{got}");
    }

    #[test]
    fn beta_bar_examples() {
        let g = lin();
        let p = H1Point::new(1.0, 0.0, 0.0);
        let q = H1Point::new(0.0, 1.0, 0.0);
        assert!(close(beta_bar(&g, 1.0, p, q).unwrap(), p * q, 1e-14));
        let got = beta_bar(&g, 0.5, p, q).unwrap();
        // g⁻¹(2 g(1/2)) with g(1/2) = (√3 − 1)/2
        let c = 3f64.sqrt() - 1.0;
        assert!(close(got, H1Point::new(1.0, 1.0, c + c * c), 1e-14), "{got}");
        assert!((got.xbar - 1.267_949_2).abs() < 1e-7);
        for g in [lin(), osc()] {
            assert_eq!(beta_bar(&g, 0.1, H1Point::identity(), H1Point::identity()).unwrap(), H1Point::identity());
        }
        assert!(beta_bar(&g, 0.0, p, q).is_err());
    }

    #[test]
    fn f_map_examples() {
        let g = lin();
        assert!(close(f_map(&g, H1Point::new(1.0, 0.0, 6.0)).unwrap(), H1Point::new(1.0, 0.0, 2.0), 1e-15));
        assert_eq!(f_map(&g, H1Point::identity()).unwrap(), H1Point::identity());
        assert_eq!(f_inv(&g, H1Point::new(1.0, 0.0, 2.0)).unwrap(), H1Point::new(1.0, 0.0, 6.0));
        assert_eq!(h(&g, -2.0).unwrap(), -6.0);
        assert_eq!(h(&osc(), 0.0).unwrap(), 0.0);
    }

    #[test]
    fn transported_examples() {
        let g = lin();
        let p = H1Point::new(0.5, -0.25, 3.0);
        assert!(close(transported_mul(&g, H1Point::identity(), p).unwrap(), p, 1e-14));
        let got = transported_mul(&g, H1Point::new(1.0, 0.0, 0.0), H1Point::new(0.0, 1.0, 0.0)).unwrap();
        assert!(close(got, H1Point::new(1.0, 1.0, 1.0), 1e-15), "{got}");
        let r = H1Point::new(3.0, 4.0, 5.0);
        assert_eq!(transported_inv(r), H1Point::new(-3.0, -4.0, -5.0));
        for g in [lin(), osc()] {
            let via_f = f_map(&g, f_inv(&g, r).unwrap().inv()).unwrap();
            assert!(close(via_f, transported_inv(r), 1e-14));
            let e = transported_mul(&g, r, transported_inv(r)).unwrap();
            assert!(close(e, H1Point::identity(), 1e-12));
        }
    }

    #[test]
    fn conjugation_examples() {
        let p = H1Point::new(2.0, 0.0, 6.0);
        for g in [lin(), osc()] {
            assert!(conjugation_residual(&g, 1.0, p).unwrap() <= 1e-12);
            assert_eq!(conjugation_residual(&g, 0.01, H1Point::identity()).unwrap(), 0.0);
        }
        assert!(conjugation_residual(&lin(), 0.5, p).unwrap() <= 1e-9);
    }

    #[test]
    fn euclidean_is_not_a_transported_automorphism() {
        // δ̂ = F δ̄ F⁻¹ and δ̄ is not an automorphism of H(1)
        let g = osc();
        let p = H1Point::new(0.0, 0.0, 1e-6);
        let lhs = delta_hat(0.01, transported_mul(&g, p, p).unwrap()).unwrap();
        let rhs = transported_mul(&g, delta_hat(0.01, p).unwrap(), delta_hat(0.01, p).unwrap()).unwrap();
        assert!(lhs.max_abs_diff(&rhs) > 1e-2 * lhs.xbar.abs(), "{lhs} vs {rhs}");
    }

    #[test]
    fn dilation_kind_dispatch() {
        let p = H1Point::new(1.0, 2.0, 3.0);
        assert_eq!(DilationKind::Intrinsic.apply(2.0, p).unwrap(), delta_std(2.0, p).unwrap());
        assert_eq!(DilationKind::Euclidean.apply(2.0, p).unwrap(), delta_hat(2.0, p).unwrap());
        assert_eq!(DilationKind::Gauge(lin()).apply(2.0, p).unwrap(), delta_bar(&lin(), 2.0, p).unwrap());
    }

    fn point() -> impl Strategy<Value = H1Point> {
        (-2.0..2.0f64, -2.0..2.0f64, -4.0..4.0f64).prop_map(|(a, b, c)| H1Point::new(a, b, c))
    }

    fn log_eps(lo: f64, hi: f64) -> impl Strategy<Value = f64> {
        (lo.log2()..hi.log2()).prop_map(f64::exp2)
    }

    proptest! {
        #[test]
        fn intrinsic_is_automorphism(p in point(), q in point(), e in log_eps(1e-3, 1e3)) {
            let lhs = delta_std(e, p * q).unwrap();
            let rhs = delta_std(e, p).unwrap() * delta_std(e, q).unwrap();
            prop_assert!(close(lhs, rhs, 1e-12));
        }

        #[test]
        fn gauge_semigroup(p in point(), a in log_eps(1e-4, 1e2), b in log_eps(1e-4, 1e2)) {
            for g in [lin(), osc()] {
                let lhs = delta_bar(&g, a, delta_bar(&g, b, p).unwrap()).unwrap();
                let rhs = delta_bar(&g, a * b, p).unwrap();
                prop_assert!(close(lhs, rhs, 1e-9));
                prop_assert!(close(delta_bar(&g, 1.0, p).unwrap(), p, 1e-12));
            }
        }

        #[test]
        fn field_fixes_base_and_is_equivariant(b in point(), q in point(), z in point(), e in log_eps(1e-3, 1.0)) {
            let g = osc();
            prop_assert!(close(delta_bar_field(&g, e, b, b).unwrap(), b, 1e-12));
            let lhs = z * delta_bar_field(&g, e, b, q).unwrap();
            let rhs = delta_bar_field(&g, e, z * b, z * q).unwrap();
            prop_assert!(close(lhs, rhs, 1e-9));
        }

        #[test]
        fn f_round_trip_and_homomorphism(p in point(), q in point()) {
            for g in [lin(), osc()] {
                prop_assert!(close(f_inv(&g, f_map(&g, p).unwrap()).unwrap(), p, 1e-9));
                let lhs = f_map(&g, p * q).unwrap();
                let rhs = transported_mul(&g, f_map(&g, p).unwrap(), f_map(&g, q).unwrap()).unwrap();
                prop_assert!(close(lhs, rhs, 1e-9));
            }
        }

        #[test]
        fn f_carries_gauge_field_to_euclidean_field(b in point(), q in point(), e in log_eps(1e-3, 1e3)) {
            for g in [lin(), osc()] {
                let lhs = f_map(&g, delta_bar_field(&g, e, b, q).unwrap()).unwrap();
                let rhs = delta_hat_field(&g, e, f_map(&g, b).unwrap(), f_map(&g, q).unwrap()).unwrap();
                prop_assert!(close(lhs, rhs, 1e-9));
            }
        }

        #[test]
        fn conjugation_holds(p in point(), e in log_eps(1e-6, 1e3)) {
            for g in [lin(), osc()] {
                let scale = 1f64.max(p.max_abs()).max(delta_bar(&g, e, p).unwrap().max_abs());
                prop_assert!(conjugation_residual(&g, e, p).unwrap() <= 1e-9 * scale);
            }
        }
    }
}
