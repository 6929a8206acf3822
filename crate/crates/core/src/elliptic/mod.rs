//! Elliptic curves over `Q` in long Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6`.
//!
//! Everything here is exact: coefficients are big integers and points have
//! big rational coordinates.

mod point;
pub mod poly;
mod reduction;
mod torsion;

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::json;

pub use point::RationalPoint;
pub use reduction::{count_points_mod, good_reduction_at, Reduction, MAX_COUNT_PRIME};
pub use torsion::{
    has_point_of_order, torsion_points_by_division_polynomials, torsion_subgroup, TorsionGroup, MAX_TORSION_PRIME,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CurveError {
    #[error("singular Weierstrass equation (discriminant 0)")]
    Singular,
    #[error("{q} divides the discriminant; the reduction is not an elliptic curve")]
    BadReduction { q: u64 },
    #[error("{q} is not a prime")]
    NotPrime { q: u64 },
    #[error("prime {q} exceeds the point-counting bound {max}")]
    PrimeTooLarge { q: u64, max: u64 },
    #[error("no rational point of order {p} is possible for p > 13 (Kamienny–Mazur); p = {p} is not admissible")]
    InadmissibleOrder { p: u64 },
    #[error("internal error: {0}")]
    Internal(String),
}

/// Long Weierstrass model with its standard invariants.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EllipticCurve {
    #[serde(with = "json::big_int")]
    pub a1: BigInt,
    #[serde(with = "json::big_int")]
    pub a2: BigInt,
    #[serde(with = "json::big_int")]
    pub a3: BigInt,
    #[serde(with = "json::big_int")]
    pub a4: BigInt,
    #[serde(with = "json::big_int")]
    pub a6: BigInt,
    #[serde(with = "json::big_int")]
    pub b2: BigInt,
    #[serde(with = "json::big_int")]
    pub b4: BigInt,
    #[serde(with = "json::big_int")]
    pub b6: BigInt,
    #[serde(with = "json::big_int")]
    pub b8: BigInt,
    #[serde(with = "json::big_int")]
    pub c4: BigInt,
    #[serde(with = "json::big_int")]
    pub c6: BigInt,
    #[serde(with = "json::big_int")]
    pub delta: BigInt,
    #[serde(with = "json::rational")]
    pub j: BigRational,
}

impl EllipticCurve {
    pub fn new<T: Into<BigInt>>(coefficients: [T; 5]) -> Result<Self, CurveError> {
        let [a1, a2, a3, a4, a6]: [BigInt; 5] = coefficients.map(Into::into);
        let b2 = &a1 * &a1 + 4 * &a2;
        let b4 = 2 * &a4 + &a1 * &a3;
        let b6 = &a3 * &a3 + 4 * &a6;
        let b8 = &a1 * &a1 * &a6 + 4 * &a2 * &a6 - &a1 * &a3 * &a4 + &a2 * &a3 * &a3 - &a4 * &a4;
        let c4 = &b2 * &b2 - 24 * &b4;
        let c6: BigInt = 36 * &b2 * &b4 - 216 * &b6 - &b2 * &b2 * &b2;
        let delta: BigInt = 9 * &b2 * &b4 * &b6 - &b2 * &b2 * &b8 - 8 * &b4 * &b4 * &b4 - 27 * &b6 * &b6;
        if delta.is_zero() {
            return Err(CurveError::Singular);
        }
        let j = BigRational::new(&c4 * &c4 * &c4, delta.clone());
        Ok(EllipticCurve { a1, a2, a3, a4, a6, b2, b4, b6, b8, c4, c6, delta, j })
    }

    pub fn coefficients(&self) -> [&BigInt; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    /// Coefficients `(A, B)` of the integral short model
    /// `Y^2 = X^3 - 27 c4 X - 54 c6`, reached by
    /// `(x, y) -> (36x + 3 b2, 108 (2y + a1 x + a3))`.
    pub fn short_model(&self) -> (BigInt, BigInt) {
        (-27 * &self.c4, -54 * &self.c6)
    }

    pub fn is_on_curve(&self, p: &RationalPoint) -> bool {
        point::is_on_curve(self, p)
    }

    pub fn negate(&self, p: &RationalPoint) -> RationalPoint {
        point::negate(self, p)
    }

    pub fn add(&self, p: &RationalPoint, q: &RationalPoint) -> RationalPoint {
        point::add(self, p, q)
    }

    pub fn multiply(&self, n: i64, p: &RationalPoint) -> RationalPoint {
        point::multiply(self, n, p)
    }

    /// Exact order of `p` if it is at most `bound`.
    pub fn order_up_to(&self, p: &RationalPoint, bound: u32) -> Option<u32> {
        let mut acc = p.clone();
        for k in 1..=bound {
            if acc.is_infinity() {
                return Some(k);
            }
            acc = self.add(&acc, p);
        }
        None
    }
}

/// Shorthand for [`EllipticCurve::new`].
pub fn invariants<T: Into<BigInt>>(a1: T, a2: T, a3: T, a4: T, a6: T) -> Result<EllipticCurve, CurveError> {
    EllipticCurve::new([a1, a2, a3, a4, a6])
}

impl fmt::Display for EllipticCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{},{},{},{}]", self.a1, self.a2, self.a3, self.a4, self.a6)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn invariants_11a1() {
        let e = invariants(0, -1, 1, -10, -20).unwrap();
        assert_eq!(e.delta, BigInt::from(-161051));
        assert_eq!(e.delta, -BigInt::from(11).pow(5));
        assert_eq!(e.c4, BigInt::from(496));
    }

    #[test]
    fn invariants_14a1() {
        let e = invariants(1, 0, 1, 4, -6).unwrap();
        assert_eq!(e.delta, BigInt::from(-21952));
        assert_eq!(e.delta, -(BigInt::from(2).pow(6) * BigInt::from(7).pow(3)));
    }

    #[test]
    fn invariants_1728() {
        let e = invariants(0, 0, 0, -1, 0).unwrap();
        assert_eq!(e.delta, BigInt::from(64));
        assert!(e.c6.is_zero());
        assert_eq!(e.j, BigRational::from_integer(1728.into()));
    }

    #[test]
    fn identities_hold() {
        for c in [[0, -1, 1, -10, -20], [1, 0, 1, 4, -6], [1, 1, 1, -10, -10], [0, 0, 1, -1, 0], [1, -1, 1, -1, -14]] {
            let e = EllipticCurve::new(c).unwrap();
            assert_eq!(4 * &e.b8, &e.b2 * &e.b6 - &e.b4 * &e.b4);
            assert_eq!(1728 * &e.delta, &e.c4 * &e.c4 * &e.c4 - &e.c6 * &e.c6);
        }
    }

    #[test]
    fn singular_rejected() {
        assert_eq!(invariants(0, 0, 0, 0, 0), Err(CurveError::Singular));
        // y^2 = x^3 - 3x + 2 has a node at (1, 0)
        assert_eq!(invariants(0, 0, 0, -3, 2), Err(CurveError::Singular));
    }
}
