use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use super::ClassGroupError;
use crate::quadfield::Discriminant;

/// A positive-definite primitive binary quadratic form `a x^2 + b xy + c y^2`.
///
/// Arithmetic is carried out in `i128`; coefficients of reduced forms of
/// supported discriminants fit comfortably in `i64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticForm {
    a: i64,
    b: i64,
    c: i64,
}

impl QuadraticForm {
    pub fn new(a: i64, b: i64, c: i64) -> Result<Self, ClassGroupError> {
        let disc = b as i128 * b as i128 - 4 * a as i128 * c as i128;
        if a <= 0 || disc >= 0 {
            return Err(ClassGroupError::NotPositiveDefinite(a, b, c));
        }
        if a.gcd(&b).gcd(&c) != 1 {
            return Err(ClassGroupError::NotPrimitive(a, b, c));
        }
        Ok(QuadraticForm { a, b, c })
    }

    /// The form `(a, b, (b^2 - D) / 4a)`, when that is integral.
    pub fn from_a_b(a: i64, b: i64, disc: Discriminant) -> Result<Self, ClassGroupError> {
        let num = b as i128 * b as i128 - disc.value() as i128;
        let den = 4 * a as i128;
        if a <= 0 || num % den != 0 {
            return Err(ClassGroupError::NoSuchForm(a, b, disc.value()));
        }
        Self::new(a, b, (num / den) as i64)
    }

    pub(crate) fn raw(a: i64, b: i64, c: i64) -> Self {
        QuadraticForm { a, b, c }
    }

    pub fn a(&self) -> i64 {
        self.a
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn discriminant(&self) -> i128 {
        self.b as i128 * self.b as i128 - 4 * self.a as i128 * self.c as i128
    }

    pub fn is_reduced(&self) -> bool {
        let (a, b, c) = (self.a, self.b, self.c);
        b.abs() <= a && a <= c && (b >= 0 || (b.abs() != a && a != c))
    }

    /// The class inverse `(a, -b, c)`, reduced.
    pub fn inverse(&self) -> Self {
        reduce(&QuadraticForm { a: self.a, b: -self.b, c: self.c })
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.a, self.b, self.c)
    }
}

/// The identity `(1, 0, -D/4)` or `(1, 1, (1 - D)/4)`.
pub fn principal_form(disc: Discriminant) -> QuadraticForm {
    let d = disc.value();
    if d.rem_euclid(4) == 0 {
        QuadraticForm { a: 1, b: 0, c: -d / 4 }
    } else {
        QuadraticForm { a: 1, b: 1, c: (1 - d) / 4 }
    }
}

/// Gauss reduction to the unique reduced representative.
pub fn reduce(form: &QuadraticForm) -> QuadraticForm {
    let (mut a, mut b, mut c) = (form.a as i128, form.b as i128, form.c as i128);
    loop {
        if !(-a < b && b <= a) {
            // b <- b mod 2a into (-a, a]
            let two_a = 2 * a;
            let mut q = b.div_euclid(two_a);
            let mut r = b.rem_euclid(two_a);
            if r > a {
                r -= two_a;
                q += 1;
            }
            c -= (b + r) / 2 * q;
            b = r;
        }
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b < 0 {
            b = -b;
        }
        break;
    }
    QuadraticForm { a: a as i64, b: b as i64, c: c as i64 }
}

fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    // returns (g, x, y) with a x + b y = g >= 0
    let (mut old_r, mut r) = (a, b);
    let (mut old_s, mut s) = (1i128, 0i128);
    let (mut old_t, mut t) = (0i128, 1i128);
    while r != 0 {
        let q = old_r.div_euclid(r);
        (old_r, r) = (r, old_r - q * r);
        (old_s, s) = (s, old_s - q * s);
        (old_t, t) = (t, old_t - q * t);
    }
    if old_r < 0 {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

/// Dirichlet composition followed by reduction.
pub fn compose(f: &QuadraticForm, g: &QuadraticForm) -> Result<QuadraticForm, ClassGroupError> {
    let disc = f.discriminant();
    if disc != g.discriminant() {
        return Err(ClassGroupError::DiscriminantMismatch(disc, g.discriminant()));
    }
    let (f, g) = if f.a > g.a { (g, f) } else { (f, g) };
    let (a1, b1) = (f.a as i128, f.b as i128);
    let (a2, b2, c2) = (g.a as i128, g.b as i128, g.c as i128);

    let s = (b1 + b2) / 2;
    let n = b2 - s;
    // u a2 + v a1 = d
    let (d, y1) = if a2 % a1 == 0 {
        (a1, 0)
    } else {
        let (d, u, _v) = ext_gcd(a2, a1);
        (d, u)
    };
    // x2 s + y2 d = d1
    let (d1, x2, y2) = if s % d == 0 {
        (d, 0, -1)
    } else {
        let (d1, x2, y2) = ext_gcd(s, d);
        (d1, x2, -y2)
    };
    let v1 = a1 / d1;
    let v2 = a2 / d1;
    let r = (y1 * y2 * n - x2 * c2).rem_euclid(v1);
    let b3 = b2 + 2 * v2 * r;
    let a3 = v1 * v2;
    let c3 = (b3 * b3 - disc) / (4 * a3);
    debug_assert_eq!(b3 * b3 - 4 * a3 * c3, disc);
    Ok(reduce(&QuadraticForm::raw(a3 as i64, b3 as i64, c3 as i64)))
}

/// `f^n` under composition, by square-and-multiply.
pub fn power(f: &QuadraticForm, mut n: u64, identity: QuadraticForm) -> QuadraticForm {
    let mut acc = identity;
    let mut base = reduce(f);
    while n > 0 {
        if n & 1 == 1 {
            acc = compose(&acc, &base).expect("same discriminant");
        }
        n >>= 1;
        if n > 0 {
            base = compose(&base, &base).expect("same discriminant");
        }
    }
    acc
}

/// All primitive reduced forms of discriminant `D`, ordered by `a`, then
/// `|b|`, then positive `b` before its negative.
pub fn enumerate_reduced(disc: Discriminant) -> Vec<QuadraticForm> {
    let d = disc.value() as i128;
    let abs = -d;
    let parity = d.rem_euclid(2);
    let mut out = Vec::new();
    let mut a: i128 = 1;
    while 3 * a * a <= abs {
        let mut b = parity;
        while b <= a {
            let num = b * b - d;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c >= a && a.gcd(&b).gcd(&c) == 1 {
                    out.push(QuadraticForm::raw(a as i64, b as i64, c as i64));
                    if b != 0 && b != a && a != c {
                        out.push(QuadraticForm::raw(a as i64, -b as i64, c as i64));
                    }
                }
            }
            b += 2;
        }
        a += 1;
    }
    out
}

pub fn class_number(disc: Discriminant) -> u64 {
    enumerate_reduced(disc).len() as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    fn form(a: i64, b: i64, c: i64) -> QuadraticForm {
        QuadraticForm::new(a, b, c).unwrap()
    }

    #[test]
    fn principal() {
        assert_eq!(principal_form(disc(-4)), form(1, 0, 1));
        assert_eq!(principal_form(disc(-23)), form(1, 1, 6));
        assert_eq!(principal_form(disc(-47)), form(1, 1, 12));
        assert!(principal_form(disc(-47)).is_reduced());
    }

    #[test]
    fn reduction_examples() {
        assert_eq!(reduce(&form(1, 0, 5)), form(1, 0, 5));
        assert_eq!(reduce(&form(3, 4, 2)), form(1, 0, 2));
        assert_eq!(reduce(&form(6, 1, 1)), form(1, 1, 6));
        // tie rules
        assert_eq!(reduce(&form(2, -2, 3)), form(2, 2, 3));
        assert_eq!(reduce(&form(3, -1, 3)), form(3, 1, 3));
    }

    /// Brute-force equivalence oracle: act by a box of SL2(Z) matrices and
    /// collect every reduced form that is hit.
    #[test]
    fn reduction_agrees_with_unimodular_search() {
        let start = form(3, 4, 2);
        let mut hits = std::collections::HashSet::new();
        for p in -4i64..=4 {
            for q in -4i64..=4 {
                for r in -4i64..=4 {
                    for s in -4i64..=4 {
                        if p * s - q * r != 1 {
                            continue;
                        }
                        let (a, b, c) = (start.a, start.b, start.c);
                        let na = a * p * p + b * p * r + c * r * r;
                        let nb = 2 * a * p * q + b * (p * s + q * r) + 2 * c * r * s;
                        let nc = a * q * q + b * q * s + c * s * s;
                        let g = QuadraticForm::raw(na, nb, nc);
                        if g.is_reduced() {
                            hits.insert(g);
                        }
                    }
                }
            }
        }
        assert_eq!(hits.into_iter().collect::<Vec<_>>(), vec![form(1, 0, 2)]);
    }

    #[test]
    fn enumerations() {
        assert_eq!(enumerate_reduced(disc(-23)), vec![form(1, 1, 6), form(2, 1, 3), form(2, -1, 3)]);
        assert_eq!(
            enumerate_reduced(disc(-47)),
            vec![form(1, 1, 12), form(2, 1, 6), form(2, -1, 6), form(3, 1, 4), form(3, -1, 4)]
        );
        assert_eq!(enumerate_reduced(disc(-4)), vec![form(1, 0, 1)]);
        assert_eq!(enumerate_reduced(disc(-3)), vec![form(1, 1, 1)]);
        assert_eq!(enumerate_reduced(disc(-20)), vec![form(1, 0, 5), form(2, 2, 3)]);
    }

    #[test]
    fn class_numbers() {
        assert_eq!(class_number(disc(-23)), 3);
        assert_eq!(class_number(disc(-47)), 5);
        assert_eq!(class_number(disc(-20)), 2);
        assert_eq!(class_number(disc(-84)), 4);
        assert_eq!(class_number(disc(-163)), 1);
    }

    #[test]
    fn composition_examples() {
        let g = form(2, 1, 3);
        assert_eq!(compose(&g, &g).unwrap(), form(2, -1, 3));
        assert_eq!(compose(&g, &form(2, -1, 3)).unwrap(), form(1, 1, 6));
        assert_eq!(compose(&principal_form(disc(-23)), &form(6, 1, 1)).unwrap(), form(1, 1, 6));
        assert!(matches!(
            compose(&g, &form(1, 1, 12)),
            Err(ClassGroupError::DiscriminantMismatch(..))
        ));
    }

    #[test]
    fn composition_is_associative_and_commutative() {
        for d in Discriminant::in_range(-500, -1) {
            let forms = enumerate_reduced(d);
            for f in &forms {
                for g in &forms {
                    let fg = compose(f, g).unwrap();
                    assert_eq!(fg, compose(g, f).unwrap());
                    for h in forms.iter().step_by(3) {
                        assert_eq!(compose(&fg, h).unwrap(), compose(f, &compose(g, h).unwrap()).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn invalid_forms() {
        assert!(matches!(QuadraticForm::new(-1, 0, -1), Err(ClassGroupError::NotPositiveDefinite(..))));
        assert!(matches!(QuadraticForm::new(1, 4, 1), Err(ClassGroupError::NotPositiveDefinite(..))));
        assert!(matches!(QuadraticForm::new(2, 2, 2), Err(ClassGroupError::NotPrimitive(..))));
        assert!(QuadraticForm::from_a_b(2, 0, disc(-23)).is_err());
    }

    proptest! {
        #[test]
        fn reduce_is_idempotent(a in 1i64..200, b in -400i64..400, x in -20i64..20, y in -20i64..20) {
            // random positive definite primitive form, moved around by a shear and swap
            let c_min = (b * b) / (4 * a) + 1;
            let f = QuadraticForm::raw(a, b, c_min);
            prop_assume!(a.gcd(&b).gcd(&c_min) == 1);
            let sheared = QuadraticForm::raw(f.a, f.b + 2 * f.a * x, f.a * x * x + f.b * x + f.c);
            let swapped = QuadraticForm::raw(sheared.c, -sheared.b, sheared.a);
            let moved = QuadraticForm::raw(
                swapped.a,
                swapped.b + 2 * swapped.a * y,
                swapped.a * y * y + swapped.b * y + swapped.c,
            );
            let r = reduce(&moved);
            prop_assert!(r.is_reduced());
            prop_assert_eq!(r.discriminant(), f.discriminant());
            prop_assert_eq!(r.a.gcd(&r.b).gcd(&r.c), 1);
            prop_assert_eq!(reduce(&r), r);
            prop_assert_eq!(r, reduce(&f));
        }
    }
}
