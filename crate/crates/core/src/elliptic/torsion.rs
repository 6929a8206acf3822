use std::collections::BTreeSet;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::poly::{division_polynomials, integer_roots, Poly};
use super::reduction::count_points_mod;
use super::{CurveError, EllipticCurve, RationalPoint};
use crate::arith;

/// Largest prime order a rational torsion point can have.
pub const MAX_TORSION_PRIME: u64 = 13;

/// Largest order of a rational torsion point (Mazur).
const MAX_TORSION_ORDER: u32 = 12;

/// Above this many candidate `Y` values the divisor search is abandoned in
/// favour of division polynomials.
const MAX_SQUARE_DIVISORS: u64 = 1_000_000;

const FACTOR_BUDGET: u64 = 2_000_000;

/// `E(Q)_tors` as `Z/n` or `Z/2 x Z/2m`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionGroup {
    /// `[n]` for cyclic groups (`[]` when trivial), `[2, 2m]` otherwise.
    pub divisors: Vec<u32>,
    pub generators: Vec<RationalPoint>,
    /// Every torsion point, including the point at infinity, sorted.
    pub points: Vec<RationalPoint>,
}

impl TorsionGroup {
    pub fn order(&self) -> u32 {
        self.divisors.iter().product()
    }

    pub fn describe(&self) -> String {
        if self.divisors.is_empty() {
            return "trivial".to_string();
        }
        self.divisors.iter().map(|d| format!("Z/{d}Z")).collect::<Vec<_>>().join(" x ")
    }

    /// Whether the structure is one of the fifteen groups of Mazur's theorem.
    pub fn is_mazur(&self) -> bool {
        match self.divisors.as_slice() {
            [] => true,
            [n] => (2..=10).contains(n) || *n == 12,
            [2, m] => m % 2 == 0 && (2..=8).contains(m),
            _ => false,
        }
    }
}

/// Maps an integral point of the short model back to the long model.
fn from_short_model(e: &EllipticCurve, x_short: &BigInt, y_short: &BigInt) -> RationalPoint {
    let q = |n: &BigInt| BigRational::from_integer(n.clone());
    let x = (q(x_short) - q(&(3 * &e.b2))) / q(&BigInt::from(36));
    let y = (q(y_short) / q(&BigInt::from(108)) - q(&e.a1) * &x - q(&e.a3)) / q(&BigInt::from(2));
    RationalPoint::affine(x, y)
}

/// Integer `X` with `X^3 + A X + (B - Y^2) = 0`.
fn cubic_roots(a: &BigInt, b: &BigInt, y: &BigInt) -> Vec<BigInt> {
    let p = Poly::new(vec![b - y * y, a.clone(), BigInt::zero(), BigInt::one()]);
    integer_roots(&p)
}

/// Positive `Y` with `Y^2 | n`, from the factorisation of `n`.
fn square_divisors(factors: &[(BigUint, u32)]) -> Vec<BigInt> {
    let mut out = vec![BigInt::one()];
    for (p, e) in factors {
        let p = BigInt::from(p.clone());
        let mut next = Vec::with_capacity(out.len() * (*e as usize / 2 + 1));
        for base in &out {
            let mut cur = base.clone();
            for _ in 0..=e / 2 {
                next.push(cur.clone());
                cur *= &p;
            }
        }
        out = next;
    }
    out.sort();
    out
}

/// Nagell–Lutz on the short model: candidate points from `Y = 0` and from
/// `Y^2 | 4A^3 + 27B^2`. `None` when the search would be too large.
fn nagell_lutz_candidates(e: &EllipticCurve) -> Option<Vec<RationalPoint>> {
    let (a, b) = e.short_model();
    let disc = 4 * &a * &a * &a + 27 * &b * &b;
    let factors = arith::factor_bigint(&disc, FACTOR_BUDGET)?;
    let count: u64 = factors.iter().map(|(_, k)| (*k as u64) / 2 + 1).try_fold(1u64, |acc, k| acc.checked_mul(k))?;
    if count > MAX_SQUARE_DIVISORS {
        return None;
    }
    let mut ys = vec![BigInt::zero()];
    for y in square_divisors(&factors) {
        ys.push(-&y);
        ys.push(y);
    }
    let mut out = Vec::new();
    for y in &ys {
        for x in cubic_roots(&a, &b, y) {
            out.push(from_short_model(e, &x, y));
        }
    }
    Some(out)
}

/// Multiple of `#E(Q)_tors`: gcd of `#E(F_q)` over several odd primes of
/// good reduction, into each of which the torsion injects.
fn reduction_bound(e: &EllipticCurve) -> u64 {
    let mut g = 0u64;
    let mut used = 0;
    let mut q = 3u64;
    while used < 8 && q < super::MAX_COUNT_PRIME {
        if arith::is_prime(q) && !(&e.delta % BigInt::from(q)).is_zero() {
            let n = count_points_mod(e, q).expect("good odd prime below the bound");
            g = g.gcd(&n);
            used += 1;
        }
        q += 2;
    }
    g
}

/// Torsion candidates through integral roots of division polynomials on the
/// short model, restricted to orders dividing the reduction bound. An
/// independent route to the same point set as the Nagell–Lutz search.
pub fn torsion_points_by_division_polynomials(e: &EllipticCurve) -> Vec<RationalPoint> {
    let bound = reduction_bound(e);
    let (a, b) = e.short_model();
    let cubic = Poly::new(vec![b.clone(), a.clone(), BigInt::zero(), BigInt::one()]);
    let mut candidates = Vec::new();
    if bound % 2 == 0 {
        for x in cubic_roots(&a, &b, &BigInt::zero()) {
            candidates.push(from_short_model(e, &x, &BigInt::zero()));
        }
    }
    let orders: Vec<usize> = (3..=MAX_TORSION_ORDER as usize).filter(|n| bound % *n as u64 == 0).collect();
    if let Some(&max) = orders.last() {
        let psi = division_polynomials(&a, &b, max);
        for n in orders {
            for x in integer_roots(&psi[n]) {
                let rhs = cubic.eval(&x);
                if let Some(y) = arith::exact_sqrt(&rhs) {
                    candidates.push(from_short_model(e, &x, &y));
                    candidates.push(from_short_model(e, &x, &-y));
                }
            }
        }
    }
    finalize_points(e, candidates)
}

fn finalize_points(e: &EllipticCurve, candidates: Vec<RationalPoint>) -> Vec<RationalPoint> {
    let mut set: BTreeSet<RationalPoint> = BTreeSet::from([RationalPoint::Infinity]);
    for p in candidates {
        debug_assert!(e.is_on_curve(&p));
        if e.order_up_to(&p, MAX_TORSION_ORDER).is_some() {
            set.insert(p);
        }
    }
    set.into_iter().collect()
}

fn assemble(e: &EllipticCurve, points: Vec<RationalPoint>) -> Result<TorsionGroup, CurveError> {
    let n = points.len() as u32;
    let orders: Vec<u32> = points
        .iter()
        .map(|p| e.order_up_to(p, MAX_TORSION_ORDER).expect("torsion point"))
        .collect();
    let max = *orders.iter().max().expect("contains infinity");
    let (divisors, generators) = if n == 1 {
        (vec![], vec![])
    } else if max == n {
        let g = orders.iter().position(|&o| o == n).unwrap();
        (vec![n], vec![points[g].clone()])
    } else {
        let g = &points[orders.iter().position(|&o| o == max).unwrap()];
        let cyclic: BTreeSet<RationalPoint> = (0..max as i64).map(|k| e.multiply(k, g)).collect();
        let t = points
            .iter()
            .zip(&orders)
            .find(|(p, &o)| o == 2 && !cyclic.contains(*p))
            .map(|(p, _)| p.clone())
            .ok_or_else(|| CurveError::Internal(format!("{n} torsion points but no complement of order 2")))?;
        (vec![2, max], vec![t, g.clone()])
    };
    let group = TorsionGroup { divisors, generators, points };
    if group.order() != n || !group.is_mazur() {
        return Err(CurveError::Internal(format!(
            "torsion structure {:?} with {n} points is impossible",
            group.divisors
        )));
    }
    Ok(group)
}

/// `E(Q)_tors` with generators.
pub fn torsion_subgroup(e: &EllipticCurve) -> Result<TorsionGroup, CurveError> {
    let points = match nagell_lutz_candidates(e) {
        Some(c) => finalize_points(e, c),
        None => torsion_points_by_division_polynomials(e),
    };
    assemble(e, points)
}

/// A point of exact order `p` in `E(Q)`, if any.
pub fn has_point_of_order(e: &EllipticCurve, p: u64) -> Result<Option<RationalPoint>, CurveError> {
    if p > MAX_TORSION_PRIME {
        return Err(CurveError::InadmissibleOrder { p });
    }
    let t = torsion_subgroup(e)?;
    Ok(t.points.into_iter().find(|q| e.order_up_to(q, MAX_TORSION_ORDER) == Some(p as u32)))
}
