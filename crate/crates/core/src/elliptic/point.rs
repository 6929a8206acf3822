use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use super::EllipticCurve;
use crate::json;

/// A point of `E(Q)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RationalPoint {
    Infinity,
    Affine {
        #[serde(with = "json::rational")]
        x: BigRational,
        #[serde(with = "json::rational")]
        y: BigRational,
    },
}

impl RationalPoint {
    pub fn affine(x: BigRational, y: BigRational) -> Self {
        RationalPoint::Affine { x, y }
    }

    pub fn integral<T: Into<BigInt>>(x: T, y: T) -> Self {
        RationalPoint::Affine {
            x: BigRational::from_integer(x.into()),
            y: BigRational::from_integer(y.into()),
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, RationalPoint::Infinity)
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RationalPoint::Infinity => write!(f, "O"),
            RationalPoint::Affine { x, y } => {
                write!(f, "({}, {})", json::format_rational(x), json::format_rational(y))
            }
        }
    }
}

fn q(n: &BigInt) -> BigRational {
    BigRational::from_integer(n.clone())
}

pub(super) fn is_on_curve(e: &EllipticCurve, p: &RationalPoint) -> bool {
    match p {
        RationalPoint::Infinity => true,
        RationalPoint::Affine { x, y } => {
            let lhs = y * y + q(&e.a1) * x * y + q(&e.a3) * y;
            let rhs = x * x * x + q(&e.a2) * x * x + q(&e.a4) * x + q(&e.a6);
            lhs == rhs
        }
    }
}

pub(super) fn negate(e: &EllipticCurve, p: &RationalPoint) -> RationalPoint {
    match p {
        RationalPoint::Infinity => RationalPoint::Infinity,
        RationalPoint::Affine { x, y } => RationalPoint::Affine {
            x: x.clone(),
            y: -y - q(&e.a1) * x - q(&e.a3),
        },
    }
}

pub(super) fn add(e: &EllipticCurve, p: &RationalPoint, r: &RationalPoint) -> RationalPoint {
    let (x1, y1, x2, y2) = match (p, r) {
        (RationalPoint::Infinity, _) => return r.clone(),
        (_, RationalPoint::Infinity) => return p.clone(),
        (RationalPoint::Affine { x: x1, y: y1 }, RationalPoint::Affine { x: x2, y: y2 }) => (x1, y1, x2, y2),
    };
    let (a1, a2, a3, a4, a6) = (q(&e.a1), q(&e.a2), q(&e.a3), q(&e.a4), q(&e.a6));
    let (lambda, nu) = if x1 != x2 {
        let dx = x2 - x1;
        ((y2 - y1) / &dx, (y1 * x2 - y2 * x1) / &dx)
    } else {
        let denom = y1 + y2 + &a1 * x2 + &a3;
        if denom.is_zero() {
            return RationalPoint::Infinity;
        }
        // x1 == x2 and not inverse forces y1 == y2: tangent
        let two = BigRational::from_integer(2.into());
        let three = BigRational::from_integer(3.into());
        let denom = &two * y1 + &a1 * x1 + &a3;
        let lambda = (&three * x1 * x1 + &two * &a2 * x1 + &a4 - &a1 * y1) / &denom;
        let nu = (-(x1 * x1 * x1) + &a4 * x1 + &two * &a6 - &a3 * y1) / &denom;
        (lambda, nu)
    };
    let x3 = &lambda * &lambda + &a1 * &lambda - &a2 - x1 - x2;
    let y3 = -(&lambda + &a1) * &x3 - nu - a3;
    RationalPoint::Affine { x: x3, y: y3 }
}

pub(super) fn multiply(e: &EllipticCurve, n: i64, p: &RationalPoint) -> RationalPoint {
    let base = if n < 0 { negate(e, p) } else { p.clone() };
    let mut k = n.unsigned_abs();
    let mut acc = RationalPoint::Infinity;
    let mut cur = base;
    while k > 0 {
        if k & 1 == 1 {
            acc = add(e, &acc, &cur);
        }
        k >>= 1;
        if k > 0 {
            cur = add(e, &cur, &cur);
        }
    }
    acc
}
