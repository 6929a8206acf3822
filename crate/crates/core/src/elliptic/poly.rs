//! Dense integer polynomials: exact integer-root finding and the division
//! polynomials of a short Weierstrass curve.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::sign_of;

/// Coefficients in ascending degree, without trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly(Vec<BigInt>);

impl Poly {
    pub fn new(mut coeffs: Vec<BigInt>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly(coeffs)
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Poly::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> Self {
        Poly(Vec::new())
    }

    pub fn constant(c: BigInt) -> Self {
        Poly::new(vec![c])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(self.0.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + other.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.0.len().max(other.0.len());
        let get = |v: &Vec<BigInt>, i: usize| v.get(i).cloned().unwrap_or_default();
        Poly::new((0..n).map(|i| get(&self.0, i) - get(&other.0, i)).collect())
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::constant(BigInt::one()), |acc, _| acc.mul(self))
    }

    /// Exact division of every coefficient by `d`.
    fn div_exact(&self, d: &BigInt) -> Poly {
        Poly::new(
            self.0
                .iter()
                .map(|c| {
                    let (q, r) = c.div_rem(d);
                    assert!(r.is_zero(), "inexact coefficient division");
                    q
                })
                .collect(),
        )
    }

    /// Cauchy bound: every complex root has modulus below this integer.
    fn root_bound(&self) -> BigInt {
        let lead = self.0.last().expect("nonzero polynomial").abs();
        let max = self.0[..self.0.len() - 1].iter().map(|c| c.abs()).max().unwrap_or_default();
        BigInt::one() + max.div_ceil(&lead)
    }
}

/// Sorted integers splitting `[-bound, bound]` into pieces on which `p` is
/// monotone, except for unit pieces `[k, k+1]` (which hold no interior integer).
fn monotone_breakpoints(p: &Poly, bound: &BigInt) -> Vec<BigInt> {
    let mut points = vec![-bound.clone(), bound.clone()];
    if p.degree().unwrap_or(0) >= 2 {
        let dp = p.derivative();
        let inner = monotone_breakpoints(&dp, bound);
        for w in inner.windows(2) {
            let (lo, hi) = (&w[0], &w[1]);
            if hi - lo == BigInt::one() {
                // p' need not be monotone here, so it may hide two roots
                points.push(lo.clone());
                points.push(hi.clone());
                continue;
            }
            let (slo, shi) = (sign_of(&dp.eval(lo)), sign_of(&dp.eval(hi)));
            if slo == 0 {
                points.push(lo.clone());
            }
            if shi == 0 {
                points.push(hi.clone());
            }
            if slo * shi < 0 {
                let k = bisect_sign_change(&dp, lo.clone(), hi.clone(), slo);
                points.push(k.clone());
                points.push(k + 1);
            }
        }
    }
    points.sort();
    points.dedup();
    points
}

/// For `sign(p(lo)) = slo != sign(p(hi))`, finds `k` with the sign change in `[k, k+1]`.
fn bisect_sign_change(p: &Poly, mut lo: BigInt, mut hi: BigInt, slo: i32) -> BigInt {
    while &hi - &lo > BigInt::one() {
        let mid: BigInt = (&lo + &hi).div_floor(&BigInt::from(2));
        let s = sign_of(&p.eval(&mid));
        if s == 0 {
            return mid;
        }
        if s == slo {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// All integer roots of a nonzero polynomial, ascending and without repetition.
pub fn integer_roots(p: &Poly) -> Vec<BigInt> {
    match p.degree() {
        None => panic!("integer roots of the zero polynomial"),
        Some(0) => return Vec::new(),
        _ => {}
    }
    let bound = p.root_bound();
    let breaks = monotone_breakpoints(p, &bound);
    let mut roots = Vec::new();
    for w in breaks.windows(2) {
        let (lo, hi) = (&w[0], &w[1]);
        let (slo, shi) = (sign_of(&p.eval(lo)), sign_of(&p.eval(hi)));
        if slo == 0 {
            roots.push(lo.clone());
        }
        if shi == 0 {
            roots.push(hi.clone());
        }
        if slo * shi < 0 {
            let k = bisect_sign_change(p, lo.clone(), hi.clone(), slo);
            if p.eval(&k).is_zero() {
                roots.push(k);
            } else if p.eval(&(&k + 1)).is_zero() {
                roots.push(k + 1);
            }
        }
    }
    roots.sort();
    roots.dedup();
    roots
}

/// Division polynomials of `y^2 = x^3 + A x + B` with the factor `y`
/// removed from the even ones: `psi_n = f_n` for odd `n` and `psi_n = y f_n`
/// for even `n`. Returns `f_0, ..., f_max`.
pub fn division_polynomials(a: &BigInt, b: &BigInt, max: usize) -> Vec<Poly> {
    let big = |n: i64| BigInt::from(n);
    let cubic = Poly::new(vec![b.clone(), a.clone(), BigInt::zero(), BigInt::one()]);
    let cubic_sq = cubic.mul(&cubic);
    let mut f = vec![
        Poly::zero(),
        Poly::constant(big(1)),
        Poly::constant(big(2)),
        Poly::new(vec![-(a * a), 12 * b, 6 * a, BigInt::zero(), big(3)]),
        Poly::new(vec![
            4 * (-8 * b * b - a * a * a),
            4 * (-4 * a * b),
            4 * (-5 * a * a),
            4 * (20 * b),
            4 * (5 * a),
            BigInt::zero(),
            big(4),
        ]),
    ];
    for n in 5..=max {
        let m = n / 2;
        let next = if n % 2 == 1 {
            let left = f[m + 2].mul(&f[m].pow(3));
            let right = f[m - 1].mul(&f[m + 1].pow(3));
            if m % 2 == 0 {
                cubic_sq.mul(&left).sub(&right)
            } else {
                left.sub(&cubic_sq.mul(&right))
            }
        } else {
            let inner = f[m + 2].mul(&f[m - 1].pow(2)).sub(&f[m - 2].mul(&f[m + 1].pow(2)));
            f[m].mul(&inner).div_exact(&big(2))
        };
        f.push(next);
    }
    f.truncate(max + 1);
    f
}
