//! The Heisenberg group H(1) = ℝ² × ℝ.
//!
//! Points are written `(x, x̄)` with `x ∈ ℝ²` the horizontal part and
//! `x̄ ∈ ℝ` the vertical part. The product twists the vertical part by the
//! canonical symplectic form:
//!
//! ```text
//! (x, x̄)(y, ȳ) = (x + y, x̄ + ȳ + 2 ω(x, y)),    ω(a, b) = a₁b₂ − a₂b₁
//! ```
//!
//! Since `ω(x, x) = 0` the inverse of `(x, x̄)` is `(−x, −x̄)` and the
//! identity is the origin.

use std::fmt;
use std::ops::Mul;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Canonical symplectic form on ℝ²: `a₁b₂ − a₂b₁`.
#[inline]
pub fn omega(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

/// Element of H(1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct H1Point {
    pub x: [f64; 2],
    pub xbar: f64,
}

impl H1Point {
    pub const IDENTITY: H1Point = H1Point { x: [0.0, 0.0], xbar: 0.0 };

    #[inline]
    pub const fn new(x1: f64, x2: f64, xbar: f64) -> Self {
        H1Point { x: [x1, x2], xbar }
    }

    /// Checked constructor for points coming from outside the crate.
    pub fn try_new(x1: f64, x2: f64, xbar: f64) -> Result<Self> {
        let p = H1Point::new(x1, x2, xbar);
        if p.is_finite() {
            Ok(p)
        } else {
            Err(Error::Domain(format!("non-finite point {p}")))
        }
    }

    #[inline]
    pub fn identity() -> Self {
        Self::IDENTITY
    }

    #[inline]
    pub fn inv(self) -> Self {
        H1Point::new(-self.x[0], -self.x[1], -self.xbar)
    }

    pub fn is_finite(&self) -> bool {
        self.x[0].is_finite() && self.x[1].is_finite() && self.xbar.is_finite()
    }

    /// Euclidean norm of the horizontal part.
    #[inline]
    pub fn horizontal_norm(&self) -> f64 {
        self.x[0].hypot(self.x[1])
    }

    #[inline]
    pub fn components(&self) -> [f64; 3] {
        [self.x[0], self.x[1], self.xbar]
    }

    #[inline]
    pub fn from_components(c: [f64; 3]) -> Self {
        H1Point::new(c[0], c[1], c[2])
    }

    /// Largest absolute component.
    pub fn max_abs(&self) -> f64 {
        self.components().iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Largest componentwise absolute difference.
    pub fn max_abs_diff(&self, other: &H1Point) -> f64 {
        let a = self.components();
        let b = other.components();
        (0..3).fold(0.0_f64, |m, i| m.max((a[i] - b[i]).abs()))
    }

    /// Parses `"x1,x2,xbar"`.
    pub fn parse_triplet(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 3 {
            return Err(Error::Parse(format!("expected x1,x2,xbar but got {s:?}")));
        }
        let mut c = [0.0; 3];
        for (slot, part) in c.iter_mut().zip(&parts) {
            *slot = part
                .parse::<f64>()
                .map_err(|e| Error::Parse(format!("{part:?}: {e}")))?;
        }
        H1Point::try_new(c[0], c[1], c[2])
    }
}

impl Default for H1Point {
    fn default() -> Self {
        Self::IDENTITY
    }
}

impl Mul for H1Point {
    type Output = H1Point;

    #[inline]
    fn mul(self, q: H1Point) -> H1Point {
        H1Point::new(
            self.x[0] + q.x[0],
            self.x[1] + q.x[1],
            self.xbar + q.xbar + 2.0 * omega(self.x, q.x),
        )
    }
}

impl fmt::Display for H1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(({}, {}), {})", self.x[0], self.x[1], self.xbar)
    }
}

/// Group product as a free function.
#[inline]
pub fn mul(p: H1Point, q: H1Point) -> H1Point {
    p * q
}

/// `sgn` with `sgn(0) = 0`.
#[inline]
pub(crate) fn sgn(t: f64) -> f64 {
    if t > 0.0 {
        1.0
    } else if t < 0.0 {
        -1.0
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn omega_examples() {
        assert_eq!(omega([1.0, 0.0], [0.0, 1.0]), 1.0);
        assert_eq!(omega([2.0, 3.0], [4.0, 5.0]), -2.0);
        assert_eq!(omega([0.3, -7.0], [0.3, -7.0]), 0.0);
    }

    #[test]
    fn product_examples() {
        let p = H1Point::new(1.0, 0.0, 0.0);
        let q = H1Point::new(0.0, 1.0, 0.0);
        assert_eq!(p * q, H1Point::new(1.0, 1.0, 2.0));
        assert_eq!(q * p, H1Point::new(1.0, 1.0, -2.0));
        let r = H1Point::new(-0.5, 3.0, 1.25);
        assert_eq!(H1Point::identity() * r, r);
        assert_eq!(r * H1Point::identity(), r);
    }

    #[test]
    fn inverse_examples() {
        assert_eq!(H1Point::identity().inv(), H1Point::identity());
        assert_eq!(H1Point::new(3.0, 4.0, 5.0).inv(), H1Point::new(-3.0, -4.0, -5.0));
        assert_eq!(H1Point::identity() * H1Point::identity(), H1Point::identity());
    }

    #[test]
    fn try_new_rejects_non_finite() {
        assert!(H1Point::try_new(f64::NAN, 0.0, 0.0).is_err());
        assert!(H1Point::try_new(0.0, 0.0, f64::INFINITY).is_err());
        assert!(H1Point::try_new(1.0, 2.0, 3.0).is_ok());
    }

    #[test]
    fn parse_triplet_accepts_and_rejects() {
        assert_eq!(H1Point::parse_triplet("1, 0,-2.5").unwrap(), H1Point::new(1.0, 0.0, -2.5));
        assert!(H1Point::parse_triplet("1,2").is_err());
        assert!(H1Point::parse_triplet("1,2,nan").is_err());
        assert!(H1Point::parse_triplet("1,a,2").is_err());
    }

    #[test]
    fn sgn_of_zero_is_zero() {
        assert_eq!(sgn(0.0), 0.0);
        assert_eq!(sgn(-0.0), 0.0);
        assert_eq!(sgn(-3.0), -1.0);
        assert_eq!(sgn(1e-300), 1.0);
    }

    fn point() -> impl Strategy<Value = H1Point> {
        (-4.0..4.0f64, -4.0..4.0f64, -8.0..8.0f64).prop_map(|(a, b, c)| H1Point::new(a, b, c))
    }

    proptest! {
        #[test]
        fn omega_antisymmetric(a in point(), b in point()) {
            prop_assert_eq!(omega(a.x, b.x), -omega(b.x, a.x));
        }

        #[test]
        fn inverse_is_involution_and_exact(p in point()) {
            prop_assert_eq!(p.inv().inv(), p);
            prop_assert_eq!(p * p.inv(), H1Point::identity());
            prop_assert_eq!(p.inv() * p, H1Point::identity());
        }

        #[test]
        fn associativity(p in point(), q in point(), r in point()) {
            let lhs = (p * q) * r;
            let rhs = p * (q * r);
            let scale = 1.0f64.max(lhs.max_abs());
            prop_assert!(lhs.max_abs_diff(&rhs) <= 1e-12 * scale);
        }
    }
}
