//! Binary fixed-point reals and complexes over `BigInt`: a value is
//! `mant / 2^bits` with every operand of an operation at the same `bits`.
//! Only what the q-expansion of `j` needs: ring ops, division, square
//! root, `pi`, `exp`, `sin`/`cos`.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed {
    mant: BigInt,
    bits: u32,
}

fn round_shift(n: BigInt, by: u32) -> BigInt {
    if by == 0 {
        return n;
    }
    (n + (BigInt::one() << (by - 1))) >> by
}

fn round_div(n: BigInt, d: &BigInt) -> BigInt {
    // nearest, ties away from -inf
    let two = BigInt::from(2);
    let (q, r) = n.div_mod_floor(d);
    if (r * &two).abs() >= d.abs() {
        if d.is_positive() {
            q + 1
        } else {
            q - 1
        }
    } else {
        q
    }
}

impl Fixed {
    pub fn zero(bits: u32) -> Self {
        Fixed { mant: BigInt::zero(), bits }
    }

    pub fn from_int(n: impl Into<BigInt>, bits: u32) -> Self {
        Fixed { mant: n.into() << bits, bits }
    }

    pub fn from_ratio(num: impl Into<BigInt>, den: impl Into<BigInt>, bits: u32) -> Self {
        Fixed { mant: round_div(num.into() << bits, &den.into()), bits }
    }

    pub fn from_mantissa(mant: BigInt, bits: u32) -> Self {
        Fixed { mant, bits }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mant
    }

    /// Same value at another precision.
    pub fn with_bits(&self, bits: u32) -> Self {
        let mant = if bits >= self.bits {
            &self.mant << (bits - self.bits)
        } else {
            round_shift(self.mant.clone(), self.bits - bits)
        };
        Fixed { mant, bits }
    }

    fn check(&self, other: &Fixed) {
        debug_assert_eq!(self.bits, other.bits, "precision mismatch");
    }

    pub fn add(&self, other: &Fixed) -> Fixed {
        self.check(other);
        Fixed { mant: &self.mant + &other.mant, bits: self.bits }
    }

    pub fn sub(&self, other: &Fixed) -> Fixed {
        self.check(other);
        Fixed { mant: &self.mant - &other.mant, bits: self.bits }
    }

    pub fn neg(&self) -> Fixed {
        Fixed { mant: -&self.mant, bits: self.bits }
    }

    pub fn mul(&self, other: &Fixed) -> Fixed {
        self.check(other);
        Fixed { mant: round_shift(&self.mant * &other.mant, self.bits), bits: self.bits }
    }

    pub fn mul_int(&self, n: &BigInt) -> Fixed {
        Fixed { mant: &self.mant * n, bits: self.bits }
    }

    pub fn div(&self, other: &Fixed) -> Fixed {
        self.check(other);
        assert!(!other.mant.is_zero(), "fixed-point division by zero");
        Fixed { mant: round_div(&self.mant << self.bits, &other.mant), bits: self.bits }
    }

    pub fn div_int(&self, n: &BigInt) -> Fixed {
        Fixed { mant: round_div(self.mant.clone(), n), bits: self.bits }
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn abs(&self) -> Fixed {
        Fixed { mant: self.mant.abs(), bits: self.bits }
    }

    /// Nearest integer.
    pub fn round(&self) -> BigInt {
        round_shift(self.mant.clone(), self.bits)
    }

    pub fn to_f64(&self) -> f64 {
        // keep 64 significant bits so the conversion never overflows needlessly
        let excess = (self.mant.bits() as i64 - 64).max(0) as u32;
        let top = (&self.mant >> excess).to_f64().unwrap_or(f64::NAN);
        top * 2f64.powi(excess as i32 - self.bits as i32)
    }

    /// Number of bits in the integer part, at least 1.
    pub fn int_bits(&self) -> u32 {
        ((self.mant.bits() as i64) - self.bits as i64).max(1) as u32
    }

    pub fn sqrt(&self) -> Fixed {
        assert!(!self.mant.is_negative(), "square root of a negative number");
        Fixed { mant: (&self.mant << self.bits).sqrt(), bits: self.bits }
    }

    pub fn cmp_abs(&self, other: &Fixed) -> Ordering {
        self.mant.abs().cmp(&other.mant.abs())
    }
}

/// `atan(1/n)` by its alternating series.
fn atan_inv(n: u64, bits: u32) -> BigInt {
    let n = BigInt::from(n);
    let n2 = &n * &n;
    let mut power = (BigInt::one() << bits) / &n; // 1 / n^(2k+1)
    let mut sum = BigInt::zero();
    let mut k = 0u64;
    while !power.is_zero() {
        let term = &power / BigInt::from(2 * k + 1);
        if k % 2 == 0 {
            sum += term;
        } else {
            sum -= term;
        }
        power /= &n2;
        k += 1;
    }
    sum
}

/// `pi` by Machin's formula.
pub fn pi(bits: u32) -> Fixed {
    let guard = 16;
    let w = bits + guard;
    let v = 16 * atan_inv(5, w) - 4 * atan_inv(239, w);
    Fixed { mant: v, bits: w }.with_bits(bits)
}

/// `e^x` with relative error around `2^-bits`.
pub fn exp(x: &Fixed) -> Fixed {
    let bits = x.bits();
    if x.is_negative() {
        let one = Fixed::from_int(1, bits);
        return one.div(&exp(&x.neg()));
    }
    // e^x = (e^(x / 2^s))^(2^s) with x / 2^s < 2^-10
    let s = x.int_bits() + 10;
    let w = bits + s + 16 + x.int_bits() * 2;
    let r = Fixed { mant: x.with_bits(w).mant >> s, bits: w };
    let one = Fixed::from_int(1, w);
    let mut sum = one.clone();
    let mut term = one;
    let mut k = 1u64;
    loop {
        term = term.mul(&r).div_int(&BigInt::from(k));
        if term.mant.is_zero() {
            break;
        }
        sum = sum.add(&term);
        k += 1;
    }
    for _ in 0..s {
        sum = sum.mul(&sum);
    }
    sum.with_bits(bits)
}

/// `(sin x, cos x)`, after exact-ish reduction into `[-pi, pi]`.
pub fn sin_cos(x: &Fixed) -> (Fixed, Fixed) {
    let bits = x.bits();
    let w = bits + 32 + x.int_bits();
    let xw = x.with_bits(w);
    let two_pi = pi(w).mul_int(&BigInt::from(2));
    let k = xw.div(&two_pi).round();
    let r = xw.sub(&two_pi.mul_int(&k));
    let r2 = r.mul(&r);
    let mut sin = r.clone();
    let mut cos = Fixed::from_int(1, w);
    let mut term_s = r;
    let mut term_c = Fixed::from_int(1, w);
    let mut n = 1u64;
    loop {
        term_c = term_c.mul(&r2).div_int(&BigInt::from((2 * n - 1) * (2 * n))).neg();
        term_s = term_s.mul(&r2).div_int(&BigInt::from((2 * n) * (2 * n + 1))).neg();
        if term_c.mant.is_zero() && term_s.mant.is_zero() {
            break;
        }
        cos = cos.add(&term_c);
        sin = sin.add(&term_s);
        n += 1;
    }
    (sin.with_bits(bits), cos.with_bits(bits))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixedComplex {
    pub re: Fixed,
    pub im: Fixed,
}

impl FixedComplex {
    pub fn new(re: Fixed, im: Fixed) -> Self {
        FixedComplex { re, im }
    }

    pub fn zero(bits: u32) -> Self {
        FixedComplex { re: Fixed::zero(bits), im: Fixed::zero(bits) }
    }

    pub fn one(bits: u32) -> Self {
        FixedComplex { re: Fixed::from_int(1, bits), im: Fixed::zero(bits) }
    }

    pub fn from_real(re: Fixed) -> Self {
        let bits = re.bits();
        FixedComplex { re, im: Fixed::zero(bits) }
    }

    pub fn bits(&self) -> u32 {
        self.re.bits()
    }

    pub fn with_bits(&self, bits: u32) -> Self {
        FixedComplex { re: self.re.with_bits(bits), im: self.im.with_bits(bits) }
    }

    pub fn add(&self, o: &FixedComplex) -> FixedComplex {
        FixedComplex { re: self.re.add(&o.re), im: self.im.add(&o.im) }
    }

    pub fn sub(&self, o: &FixedComplex) -> FixedComplex {
        FixedComplex { re: self.re.sub(&o.re), im: self.im.sub(&o.im) }
    }

    pub fn neg(&self) -> FixedComplex {
        FixedComplex { re: self.re.neg(), im: self.im.neg() }
    }

    pub fn conj(&self) -> FixedComplex {
        FixedComplex { re: self.re.clone(), im: self.im.neg() }
    }

    pub fn mul(&self, o: &FixedComplex) -> FixedComplex {
        // exact products, one rounding per component
        let bits = self.bits();
        let re = &self.re.mant * &o.re.mant - &self.im.mant * &o.im.mant;
        let im = &self.re.mant * &o.im.mant + &self.im.mant * &o.re.mant;
        FixedComplex {
            re: Fixed { mant: round_shift(re, bits), bits },
            im: Fixed { mant: round_shift(im, bits), bits },
        }
    }

    pub fn mul_int(&self, n: &BigInt) -> FixedComplex {
        FixedComplex { re: self.re.mul_int(n), im: self.im.mul_int(n) }
    }

    pub fn norm_sqr(&self) -> Fixed {
        self.re.mul(&self.re).add(&self.im.mul(&self.im))
    }

    pub fn div(&self, o: &FixedComplex) -> FixedComplex {
        let bits = self.bits();
        let num_re = &self.re.mant * &o.re.mant + &self.im.mant * &o.im.mant;
        let num_im = &self.im.mant * &o.re.mant - &self.re.mant * &o.im.mant;
        let den = &o.re.mant * &o.re.mant + &o.im.mant * &o.im.mant;
        assert!(!den.is_zero(), "complex division by zero");
        FixedComplex {
            re: Fixed { mant: round_div(num_re << bits, &den), bits },
            im: Fixed { mant: round_div(num_im << bits, &den), bits },
        }
    }

    /// `e^(2 pi i z)`.
    pub fn exp_2pi_i(&self) -> FixedComplex {
        let bits = self.bits();
        let two_pi = pi(bits).mul_int(&BigInt::from(2));
        let modulus = exp(&self.im.mul(&two_pi).neg());
        let (s, c) = sin_cos(&self.re.mul(&two_pi));
        FixedComplex { re: modulus.mul(&c), im: modulus.mul(&s) }
    }

    pub fn to_f64(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}
