use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{CurveError, EllipticCurve};
use crate::arith;

/// Point counts are done by enumerating all of `F_q`.
pub const MAX_COUNT_PRIME: u64 = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Reduction {
    Good,
    Bad,
    /// `p` in `{2, 3}` divides the discriminant of a model not known to be minimal.
    Indeterminate,
}

/// Reduction type at `p` from the integral model.
///
/// For `p >= 5` the model is rescaled by `u = p` while `p^4 | c4` and
/// `p^12 | delta`, which yields a `p`-minimal model. At 2 and 3 that test is
/// not sufficient, so a bad-looking discriminant is only reported as bad
/// when the caller vouches that the model is minimal.
pub fn good_reduction_at(e: &EllipticCurve, p: u64, model_is_minimal: bool) -> Reduction {
    let bp = BigInt::from(p);
    if !(&e.delta % &bp).is_zero() {
        return Reduction::Good;
    }
    if p <= 3 {
        return if model_is_minimal { Reduction::Bad } else { Reduction::Indeterminate };
    }
    let mut vd = arith::valuation(&e.delta, p);
    let mut vc = if e.c4.is_zero() { u32::MAX } else { arith::valuation(&e.c4, p) };
    while vc >= 4 && vd >= 12 {
        vc = vc.saturating_sub(4);
        vd -= 12;
    }
    if vd == 0 {
        Reduction::Good
    } else {
        Reduction::Bad
    }
}

fn residue(n: &BigInt, q: u64) -> u64 {
    n.mod_floor(&BigInt::from(q)).to_u64().expect("residue below q")
}

/// `#E(F_q)` by enumeration, including the point at infinity.
pub fn count_points_mod(e: &EllipticCurve, q: u64) -> Result<u64, CurveError> {
    if !arith::is_prime(q) {
        return Err(CurveError::NotPrime { q });
    }
    if q > MAX_COUNT_PRIME {
        return Err(CurveError::PrimeTooLarge { q, max: MAX_COUNT_PRIME });
    }
    if (&e.delta % BigInt::from(q)).is_zero() {
        return Err(CurveError::BadReduction { q });
    }
    let [a1, a2, a3, a4, a6] = e.coefficients().map(|c| residue(c, q));
    // number of y with y^2 = t, per residue t
    let mut roots = vec![0u64; q as usize];
    for y in 0..q {
        roots[(y * y % q) as usize] += 1;
    }
    let mut count = 1;
    for x in 0..q {
        let rhs = (((x + a2) * x % q + a4) * x % q + a6) % q;
        let lin = (a1 * x + a3) % q;
        if q == 2 {
            // y^2 + lin y = rhs over F_2, by hand
            count += (0..2).filter(|&y| (y * y + lin * y) % 2 == rhs).count() as u64;
        } else {
            // (2y + lin)^2 = lin^2 + 4 rhs
            let t = (lin * lin + 4 * rhs) % q;
            count += roots[t as usize];
        }
    }
    Ok(count)
}
