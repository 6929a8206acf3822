//! Imaginary quadratic fields `K = Q(sqrt(d))` at the level of their
//! discriminant: unit groups, Kronecker symbols, splitting of rational
//! primes, the "little ramification" condition and the Kummer criterion.

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith;

/// Inputs are bounded to `|d| < 10^12` so that trial division stays instant.
pub const MAX_ABS_D: i64 = 1_000_000_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuadFieldError {
    #[error("{0} is not negative; only imaginary quadratic fields are supported")]
    NotNegative(i64),
    #[error("{0} is not squarefree")]
    NotSquarefree(i64),
    #[error("{0} is a discriminant of a non-maximal order, not a fundamental discriminant")]
    NonFundamental(i64),
    #[error("|{0}| exceeds the supported bound 10^12")]
    OutOfRange(i64),
}

/// A negative fundamental discriminant `D`, together with the squarefree
/// `d` such that `K = Q(sqrt(d))`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Discriminant {
    #[serde(rename = "D")]
    value: i64,
    #[serde(rename = "d")]
    radicand: i64,
}

impl Discriminant {
    /// Normalises a squarefree negative `d` to the discriminant of `Q(sqrt(d))`.
    pub fn from_squarefree(d: i64) -> Result<Self, QuadFieldError> {
        if d >= 0 {
            return Err(QuadFieldError::NotNegative(d));
        }
        if d.unsigned_abs() >= MAX_ABS_D as u64 {
            return Err(QuadFieldError::OutOfRange(d));
        }
        if !arith::is_squarefree(d.unsigned_abs()) {
            return Err(QuadFieldError::NotSquarefree(d));
        }
        let value = if d.rem_euclid(4) == 1 { d } else { 4 * d };
        Ok(Discriminant { value, radicand: d })
    }

    /// Validates `D` as a negative fundamental discriminant.
    pub fn new(disc: i64) -> Result<Self, QuadFieldError> {
        if disc >= 0 {
            return Err(QuadFieldError::NotNegative(disc));
        }
        if disc.unsigned_abs() >= 4 * MAX_ABS_D as u64 {
            return Err(QuadFieldError::OutOfRange(disc));
        }
        match disc.rem_euclid(4) {
            1 if arith::is_squarefree(disc.unsigned_abs()) => Ok(Discriminant { value: disc, radicand: disc }),
            0 => {
                let d = disc / 4;
                if matches!(d.rem_euclid(4), 2 | 3) && arith::is_squarefree(d.unsigned_abs()) {
                    Ok(Discriminant { value: disc, radicand: d })
                } else {
                    Err(QuadFieldError::NonFundamental(disc))
                }
            }
            _ => Err(QuadFieldError::NonFundamental(disc)),
        }
    }

    /// Accepts either a fundamental discriminant or a squarefree radicand.
    ///
    /// The two readings never disagree: a squarefree `n ≡ 1 (mod 4)` is its
    /// own discriminant, and any other fundamental `D` is divisible by 4 and
    /// hence not squarefree.
    pub fn parse_either(n: i64) -> Result<Self, QuadFieldError> {
        match Self::new(n) {
            Ok(d) => Ok(d),
            Err(QuadFieldError::NonFundamental(_)) if n < 0 && arith::is_squarefree(n.unsigned_abs()) => {
                Self::from_squarefree(n)
            }
            Err(e) => Err(e),
        }
    }

    /// The discriminant `D`.
    pub fn value(&self) -> i64 {
        self.value
    }

    /// The squarefree radicand `d`.
    pub fn radicand(&self) -> i64 {
        self.radicand
    }

    pub fn abs(&self) -> u64 {
        self.value.unsigned_abs()
    }

    /// Distinct primes dividing `D`, ascending.
    pub fn prime_divisors(&self) -> Vec<u64> {
        arith::factor_u64(self.abs()).into_iter().map(|(p, _)| p).collect()
    }

    /// Iterates the fundamental discriminants in `[lo, hi]`, ordered by `|D|`.
    pub fn in_range(lo: i64, hi: i64) -> impl Iterator<Item = Discriminant> {
        let hi = hi.min(-1);
        (lo..=hi).rev().filter_map(|n| Discriminant::new(n).ok())
    }
}

impl fmt::Display for Discriminant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// Shorthand for [`Discriminant::from_squarefree`].
pub fn fundamental_discriminant(d: i64) -> Result<Discriminant, QuadFieldError> {
    Discriminant::from_squarefree(d)
}

/// Number of roots of unity in `O_K`.
pub fn unit_root_count(disc: Discriminant) -> u32 {
    match disc.value() {
        -3 => 6,
        -4 => 4,
        _ => 2,
    }
}

/// Jacobi symbol `(a | n)` for odd positive `n`.
fn jacobi(a: i64, n: u64) -> i32 {
    debug_assert!(n % 2 == 1);
    let mut a = a.rem_euclid(n as i64) as u64;
    let mut n = n;
    let mut result = 1;
    while a != 0 {
        while a % 2 == 0 {
            a /= 2;
            if matches!(n % 8, 3 | 5) {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a % 4 == 3 && n % 4 == 3 {
            result = -result;
        }
        a %= n;
    }
    if n == 1 {
        result
    } else {
        0
    }
}

/// Kronecker symbol `(D | n)` for `n >= 1`.
pub fn kronecker_symbol(disc: i64, n: u64) -> i32 {
    assert!(n >= 1, "kronecker symbol needs n >= 1");
    let twos = n.trailing_zeros();
    let odd = n >> twos;
    let at_two = if disc % 2 == 0 {
        0
    } else if matches!(disc.rem_euclid(8), 1 | 7) {
        1
    } else {
        -1
    };
    let two_part = if twos == 0 { 1 } else if twos % 2 == 0 { at_two * at_two } else { at_two };
    two_part * jacobi(disc, odd)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SplittingKind {
    Split,
    Inert,
    Ramified,
}

/// Decomposition of a rational prime in `O_K`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplittingType {
    pub kind: SplittingKind,
    /// Ramification index.
    pub e: u32,
    /// Residue degree.
    pub f: u32,
}

impl SplittingType {
    /// Number of primes of `O_K` above `p`.
    pub fn prime_count(&self) -> u32 {
        2 / (self.e * self.f)
    }
}

pub fn splitting_type(disc: Discriminant, p: u64) -> SplittingType {
    debug_assert!(arith::is_prime(p));
    if disc.value() % p as i64 == 0 {
        return SplittingType { kind: SplittingKind::Ramified, e: 2, f: 1 };
    }
    match kronecker_symbol(disc.value(), p) {
        1 => SplittingType { kind: SplittingKind::Split, e: 1, f: 1 },
        _ => SplittingType { kind: SplittingKind::Inert, e: 1, f: 2 },
    }
}

/// Whether every prime of `O_K` above `p` has ramification index `e < p - 1`.
pub fn is_peu_ramifie(disc: Discriminant, p: u64) -> bool {
    let e = splitting_type(disc, p).e as u64;
    p >= 3 && e < p - 1
}

/// Whether the Kummer isomorphism `H^1(S, mu_p) = Pic(O_K)[p]` applies:
/// `p >= 3` and `O_K^x` has no `p`-torsion, which excludes `Q(sqrt(-3))`.
pub fn kummer_criterion(disc: Discriminant, p: u64) -> bool {
    p >= 3 && disc.value() != -3
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    #[test]
    fn normalisation() {
        assert_eq!(fundamental_discriminant(-23).unwrap().value(), -23);
        assert_eq!(fundamental_discriminant(-1).unwrap().value(), -4);
        assert_eq!(fundamental_discriminant(-47).unwrap().value(), -47);
        assert_eq!(fundamental_discriminant(-5).unwrap().value(), -20);
        assert_eq!(fundamental_discriminant(-2).unwrap().value(), -8);
        assert_eq!(fundamental_discriminant(5), Err(QuadFieldError::NotNegative(5)));
        assert_eq!(fundamental_discriminant(-12), Err(QuadFieldError::NotSquarefree(-12)));
        assert_eq!(fundamental_discriminant(0), Err(QuadFieldError::NotNegative(0)));
    }

    #[test]
    fn non_fundamental_rejected() {
        assert_eq!(Discriminant::new(-12), Err(QuadFieldError::NonFundamental(-12)));
        assert_eq!(Discriminant::new(-16), Err(QuadFieldError::NonFundamental(-16)));
        assert_eq!(Discriminant::new(-27), Err(QuadFieldError::NonFundamental(-27)));
        assert_eq!(Discriminant::new(-2), Err(QuadFieldError::NonFundamental(-2)));
        assert_eq!(Discriminant::parse_either(-2).unwrap().value(), -8);
        assert_eq!(Discriminant::parse_either(-8).unwrap().radicand(), -2);
        assert!(Discriminant::parse_either(-12).is_err());
    }

    #[test]
    fn roots_of_unity() {
        assert_eq!(unit_root_count(disc(-3)), 6);
        assert_eq!(unit_root_count(disc(-4)), 4);
        assert_eq!(unit_root_count(disc(-23)), 2);
    }

    /// Torsion units are the algebraic integers of norm 1. Writing them as
    /// `(x + y sqrt(D)) / 2` with `x ≡ y D (mod 2)` the norm equation is
    /// `x^2 - D y^2 = 4`; count solutions directly.
    #[test]
    fn unit_count_brute_force() {
        for d in [-3, -4, -7, -8, -11, -15, -20, -23, -47, -84] {
            let disc = disc(d);
            let mut count = 0;
            for x in -3i64..=3 {
                for y in -3i64..=3 {
                    if (x - y * d).rem_euclid(2) == 0 && x * x - d * y * y == 4 {
                        count += 1;
                    }
                }
            }
            assert_eq!(count, unit_root_count(disc), "D = {d}");
        }
    }

    #[test]
    fn kronecker_examples() {
        assert_eq!(kronecker_symbol(-23, 3), 1);
        assert_eq!(kronecker_symbol(-47, 11), -1);
        assert_eq!(kronecker_symbol(-23, 1), 1);
        assert_eq!(kronecker_symbol(-47, 1), 1);
        assert_eq!(kronecker_symbol(-4, 2), 0);
        assert_eq!(kronecker_symbol(-23, 2), 1);
        assert_eq!(kronecker_symbol(-3, 2), -1);
    }

    #[test]
    fn kronecker_multiplicative() {
        for d in [-3i64, -4, -8, -23, -47, -84, -163] {
            for m in 1u64..=1000 {
                for n in (1u64..=1000).step_by(7) {
                    assert_eq!(
                        kronecker_symbol(d, m * n),
                        kronecker_symbol(d, m) * kronecker_symbol(d, n),
                        "D={d} m={m} n={n}"
                    );
                }
            }
        }
    }

    #[test]
    fn kronecker_matches_residues() {
        let odd_primes = (3u64..1000).filter(|&p| arith::is_prime(p));
        for p in odd_primes {
            let squares: std::collections::HashSet<i64> = (0..p as i64).map(|x| x * x % p as i64).collect();
            for d in [-3i64, -4, -7, -23, -47, -56, -431] {
                if d % p as i64 == 0 {
                    continue;
                }
                let residue = squares.contains(&d.rem_euclid(p as i64));
                assert_eq!(kronecker_symbol(d, p) == 1, residue, "D={d} p={p}");
            }
        }
    }

    #[test]
    fn splitting_examples() {
        assert_eq!(splitting_type(disc(-47), 11).kind, SplittingKind::Inert);
        assert_eq!(splitting_type(disc(-3), 3).kind, SplittingKind::Ramified);
        assert_eq!(splitting_type(disc(-23), 3).kind, SplittingKind::Split);
        assert_eq!(splitting_type(disc(-23), 2).kind, SplittingKind::Split);
        assert_eq!(splitting_type(disc(-3), 2).kind, SplittingKind::Inert);
    }

    #[test]
    fn splitting_partition() {
        for d in Discriminant::in_range(-300, -1) {
            for p in (2u64..60).filter(|&p| arith::is_prime(p)) {
                let s = splitting_type(d, p);
                assert_eq!(s.e * s.f * s.prime_count(), 2);
                assert_eq!(s.kind == SplittingKind::Ramified, d.value() % p as i64 == 0);
                assert_eq!(s.kind == SplittingKind::Ramified, s.e == 2);
                assert_eq!(s.kind == SplittingKind::Inert, s.f == 2);
            }
        }
    }

    #[test]
    fn little_ramification() {
        assert!(is_peu_ramifie(disc(-23), 5));
        assert!(!is_peu_ramifie(disc(-3), 3));
        assert!(is_peu_ramifie(disc(-23), 3));
        assert!(!is_peu_ramifie(disc(-23), 2));
        assert!(is_peu_ramifie(disc(-15), 5));
    }

    #[test]
    fn kummer() {
        assert!(kummer_criterion(disc(-23), 3));
        assert!(!kummer_criterion(disc(-3), 3));
        assert!(!kummer_criterion(disc(-47), 2));
        for d in Discriminant::in_range(-200, -1) {
            for p in [2u64, 3, 5, 7, 11, 13] {
                if kummer_criterion(d, p) {
                    assert_ne!(unit_root_count(d) as u64 % p, 0);
                }
            }
        }
    }

    proptest! {
        #[test]
        fn normalised_discriminants_are_fundamental(d in -1_000_000i64..0) {
            prop_assume!(arith::is_squarefree(d.unsigned_abs()));
            let disc = fundamental_discriminant(d).unwrap();
            let v = disc.value();
            prop_assert!(v < 0);
            prop_assert!(matches!(v.rem_euclid(4), 0 | 1));
            prop_assert_eq!(Discriminant::new(v), Ok(disc));
        }
    }
}
