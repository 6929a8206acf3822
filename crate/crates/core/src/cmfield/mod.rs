//! The Hilbert class field `K'` of `K`, represented by its class polynomial
//! `H_D = prod (x - j(tau))` over the CM points of discriminant `D`.
//!
//! `j` is evaluated as `1728 E4^3 / (E4^3 - E6^2)` from the integer
//! q-expansions of the Eisenstein series, in binary fixed point.

pub mod fixed;

use num_bigint::BigInt;
use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::classgroup::{enumerate_reduced, QuadraticForm};
use crate::json;
use crate::quadfield::Discriminant;
use fixed::{Fixed, FixedComplex};

/// Largest class number accepted by [`hilbert_class_polynomial`].
pub const MAX_CM_CLASS_NUMBER: u64 = 100;
pub const MIN_PRECISION_BITS: u32 = 64;
/// Retries after the first attempt, each at twice the previous precision.
pub const MAX_DOUBLINGS: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CmError {
    #[error("precision of {0} bits is below the minimum of 64")]
    PrecisionTooLow(u32),
    #[error("tau is not in the upper half plane")]
    NotInUpperHalfPlane,
    #[error("class number {h} exceeds the supported bound {max}")]
    ClassNumberTooLarge { h: u64, max: u64 },
    #[error("class polynomial of {disc} did not round to integers after {attempts} attempts (last at {bits} bits)")]
    NoConvergence { disc: i64, attempts: u32, bits: u32 },
}

/// The CM point `(-b + sqrt(D)) / 2a` of a reduced form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeegnerPoint {
    pub form: QuadraticForm,
}

impl HeegnerPoint {
    pub fn tau(&self, bits: u32) -> FixedComplex {
        let two_a = BigInt::from(2 * self.form.a());
        let re = Fixed::from_ratio(-self.form.b(), two_a.clone(), bits);
        let abs_d = -self.form.discriminant();
        let im = Fixed::from_int(abs_d, bits).sqrt().div_int(&two_a);
        FixedComplex::new(re, im)
    }

    pub fn approx(&self) -> (f64, f64) {
        let a = self.form.a() as f64;
        let abs_d = -(self.form.discriminant() as f64);
        (-(self.form.b() as f64) / (2.0 * a), abs_d.sqrt() / (2.0 * a))
    }
}

/// One CM point per reduced form, in the order of [`enumerate_reduced`].
pub fn heegner_points(disc: Discriminant) -> Vec<HeegnerPoint> {
    enumerate_reduced(disc).into_iter().map(|form| HeegnerPoint { form }).collect()
}

/// Moves `tau` into the closed standard fundamental domain.
fn reduce_tau(mut tau: FixedComplex) -> FixedComplex {
    let bits = tau.bits();
    let one = Fixed::from_int(1, bits);
    for _ in 0..10_000 {
        let shift = tau.re.round();
        tau.re = tau.re.sub(&Fixed::from_int(shift, bits));
        let n = tau.norm_sqr();
        if n.cmp_abs(&one).is_ge() {
            break;
        }
        // -1/tau = -conj(tau)/|tau|^2
        tau = FixedComplex::new(tau.re.neg().div(&n), tau.im.div(&n));
    }
    tau
}

/// Bits gained per q-series term and the number of terms for `w` bits.
fn truncation(y: f64, w: u32) -> (u32, usize) {
    let rate = (2.0 * std::f64::consts::PI * y / std::f64::consts::LN_2).max(7.85);
    let mut n = 1usize;
    while (n as f64) * rate - 6.0 * ((n + 1) as f64).log2() - 16.0 < w as f64 {
        n += 1;
    }
    (rate.ceil() as u32, n)
}

/// `sigma_k(n)` for `n <= max`.
fn divisor_sums(k: u32, max: usize) -> Vec<u128> {
    let mut s = vec![0u128; max + 1];
    for d in 1..=max {
        let dk = (d as u128).pow(k);
        for m in (d..=max).step_by(d) {
            s[m] += dk;
        }
    }
    s
}

fn eval_series(lead: i64, coeffs: &[u128], q: &FixedComplex) -> FixedComplex {
    // 1 + lead * sum_{n >= 1} coeffs[n] q^n
    let bits = q.bits();
    let lead = BigInt::from(lead);
    let mut acc = FixedComplex::zero(bits);
    for c in coeffs.iter().skip(1).rev() {
        let c = FixedComplex::from_real(Fixed::from_int(&lead * BigInt::from(*c), bits));
        acc = acc.add(&c).mul(q);
    }
    acc.add(&FixedComplex::one(bits))
}

/// `j(tau)` to an absolute error of roughly `2^-bits`.
pub fn j_value(tau: &FixedComplex, bits: u32) -> Result<FixedComplex, CmError> {
    if bits < MIN_PRECISION_BITS {
        return Err(CmError::PrecisionTooLow(bits));
    }
    if !tau.im.mantissa().is_positive() {
        return Err(CmError::NotInUpperHalfPlane);
    }
    let tau = reduce_tau(tau.with_bits(tau.bits().max(bits) + 64));
    let (rate, _) = truncation(tau.im.to_f64(), bits);
    // E4^3 - E6^2 is about 1728 q, so roughly 2 log|1/q| bits cancel
    let w = (bits + 2 * rate + 48).max(tau.bits());
    let (_, terms) = truncation(tau.im.to_f64(), w);
    let tau = tau.with_bits(w);
    let q = tau.exp_2pi_i();
    let e4 = eval_series(240, &divisor_sums(3, terms), &q);
    let e6 = eval_series(-504, &divisor_sums(5, terms), &q);
    let e4_cubed = e4.mul(&e4).mul(&e4);
    let delta = e4_cubed.sub(&e6.mul(&e6));
    let j = e4_cubed.mul_int(&BigInt::from(1728)).div(&delta);
    Ok(j.with_bits(bits))
}

/// `H_D`, monic, coefficients ascending from the constant term.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertClassPolynomial {
    #[serde(rename = "D")]
    pub disc: Discriminant,
    #[serde(with = "json::big_int_vec")]
    pub coefficients: Vec<BigInt>,
    pub precision_bits: u32,
}

impl HilbertClassPolynomial {
    pub fn degree(&self) -> usize {
        self.coefficients.len() - 1
    }
}

/// Starting precision `ceil(pi sqrt|D| h / ln 2) + 64`.
pub fn initial_precision(disc: Discriminant, h: u64) -> u32 {
    let est = std::f64::consts::PI * (disc.abs() as f64).sqrt() * h as f64 / std::f64::consts::LN_2;
    (est.ceil() as u32).saturating_add(64)
}

pub fn hilbert_class_polynomial(disc: Discriminant) -> Result<HilbertClassPolynomial, CmError> {
    let h = enumerate_reduced(disc).len() as u64;
    hilbert_class_polynomial_from(disc, initial_precision(disc, h))
}

/// As [`hilbert_class_polynomial`], starting from `bits` instead of the heuristic.
pub fn hilbert_class_polynomial_from(disc: Discriminant, bits: u32) -> Result<HilbertClassPolynomial, CmError> {
    if bits < MIN_PRECISION_BITS {
        return Err(CmError::PrecisionTooLow(bits));
    }
    let points = heegner_points(disc);
    let h = points.len() as u64;
    if h > MAX_CM_CLASS_NUMBER {
        return Err(CmError::ClassNumberTooLarge { h, max: MAX_CM_CLASS_NUMBER });
    }
    let mut prec = bits;
    for _ in 0..=MAX_DOUBLINGS {
        if let Some(coefficients) = attempt(&points, prec)? {
            return Ok(HilbertClassPolynomial { disc, coefficients, precision_bits: prec });
        }
        prec = prec.saturating_mul(2);
    }
    Err(CmError::NoConvergence { disc: disc.value(), attempts: MAX_DOUBLINGS + 1, bits: prec / 2 })
}

/// Expands the product at `bits` and rounds; `None` if rounding is not trusted.
fn attempt(points: &[HeegnerPoint], bits: u32) -> Result<Option<Vec<BigInt>>, CmError> {
    let js: Vec<FixedComplex> =
        // tau carries extra bits since dj/dtau is about 2 pi j
        points.par_iter().map(|pt| j_value(&pt.tau(2 * bits), bits)).collect::<Result<_, _>>()?;
    // the relative rounding test alone lets large coefficients through at low
    // precision; also require the propagated absolute error to sit below 2^-32
    let magnitude: u64 = js.iter().map(|j| u64::from(j.re.int_bits().max(j.im.int_bits()) + 1)).sum();
    let h = js.len() as u64;
    if u64::from(bits) < magnitude + 2 * h + 40 {
        return Ok(None);
    }
    let mut poly = vec![FixedComplex::one(bits)];
    for j in &js {
        // multiply by (x - j)
        let mut next = vec![FixedComplex::zero(bits); poly.len() + 1];
        for (i, c) in poly.iter().enumerate() {
            next[i + 1] = next[i + 1].add(c);
            next[i] = next[i].sub(&c.mul(j));
        }
        poly = next;
    }
    let unit = BigInt::one() << bits;
    let mut out = Vec::with_capacity(poly.len());
    for c in &poly {
        let n = c.re.round();
        let dist = c.re.sub(&Fixed::from_int(n.clone(), bits)).abs();
        let scale = unit.clone().max(n.abs() << bits);
        if (dist.mantissa() << 32u32) > scale {
            return Ok(None);
        }
        // conjugate CM points pair up, so the imaginary parts cancel
        let im_scale = unit.clone().max(c.re.mantissa().abs());
        if (c.im.mantissa().abs() << (bits / 2)) > im_scale {
            return Ok(None);
        }
        out.push(n);
    }
    if out.last() != Some(&BigInt::one()) {
        return Ok(None);
    }
    Ok(Some(out))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::classgroup::class_number;

    fn disc(d: i64) -> Discriminant {
        Discriminant::new(d).unwrap()
    }

    fn ints(v: &[&str]) -> Vec<BigInt> {
        v.iter().map(|s| s.parse().unwrap()).collect()
    }

    fn close(a: &FixedComplex, b: &FixedComplex, tol: f64) -> bool {
        let d = a.sub(b);
        let (re, im) = d.to_f64();
        re.abs() < tol && im.abs() < tol
    }

    #[test]
    fn heegner_points_match_forms() {
        let pts = heegner_points(disc(-4));
        assert_eq!(pts.len(), 1);
        assert_eq!(pts[0].approx(), (0.0, 1.0));
        let pts = heegner_points(disc(-3));
        let (re, im) = pts[0].approx();
        assert_eq!(re, -0.5);
        assert!((im - 3f64.sqrt() / 2.0).abs() < 1e-15);
        let forms: Vec<(i64, i64, i64)> =
            heegner_points(disc(-23)).iter().map(|p| (p.form.a(), p.form.b(), p.form.c())).collect();
        assert_eq!(forms, vec![(1, 1, 6), (2, 1, 3), (2, -1, 3)]);
        for pt in heegner_points(disc(-9995)) {
            assert!(pt.approx().1 >= 0.5);
        }
    }

    #[test]
    fn j_classical_values() {
        let i = heegner_points(disc(-4))[0].tau(128);
        let j = j_value(&i, 128).unwrap();
        let expected = FixedComplex::from_real(Fixed::from_int(1728, 128));
        assert!(close(&j, &expected, 1e-30));
        let j2 = j_value(&i.with_bits(256), 256).unwrap();
        assert!(close(&j.with_bits(256), &j2, 1e-30));

        let rho = heegner_points(disc(-3))[0].tau(128);
        let j = j_value(&rho, 128).unwrap();
        assert!(close(&j, &FixedComplex::zero(128), 1e-30));
    }

    #[test]
    fn j_is_modular() {
        let bits = 160;
        let tau = FixedComplex::new(Fixed::from_ratio(3, 10, bits), Fixed::from_ratio(11, 10, bits));
        let j = j_value(&tau, bits).unwrap();
        let shifted = tau.add(&FixedComplex::one(bits));
        assert!(close(&j, &j_value(&shifted, bits).unwrap(), 1e-35));
        // j(-1/tau) = j(tau), evaluated from outside the fundamental domain
        let inv = FixedComplex::one(bits).div(&tau).neg();
        assert!(close(&j, &j_value(&inv, bits).unwrap(), 1e-30));
        // 1728 kleinj(0.3 + 1.1i) from mpmath
        let (re, im) = j.to_f64();
        assert!((re - 356.647_911_758_732_24).abs() < 1e-9, "{re}");
        assert!((im + 781.103_812_490_053_13).abs() < 1e-9, "{im}");
    }

    #[test]
    fn j_rejects_low_precision_and_lower_half_plane() {
        let i = heegner_points(disc(-4))[0].tau(128);
        assert_eq!(j_value(&i, 32), Err(CmError::PrecisionTooLow(32)));
        assert_eq!(j_value(&i.conj(), 128), Err(CmError::NotInUpperHalfPlane));
    }

    #[test]
    fn small_class_polynomials() {
        let h3 = hilbert_class_polynomial(disc(-3)).unwrap();
        assert_eq!(h3.coefficients, ints(&["0", "1"]));
        let h4 = hilbert_class_polynomial(disc(-4)).unwrap();
        assert_eq!(h4.coefficients, ints(&["-1728", "1"]));
        assert_eq!(hilbert_class_polynomial(disc(-7)).unwrap().coefficients, ints(&["3375", "1"]));
        assert_eq!(hilbert_class_polynomial(disc(-8)).unwrap().coefficients, ints(&["-8000", "1"]));
    }

    // independent values computed with mpmath at 400 digits
    #[test]
    fn class_polynomials_match_reference() {
        let cases: &[(i64, &[&str])] = &[
            (-15, &["-121287375", "191025", "1"]),
            (-20, &["-681472000", "-1264000", "1"]),
            (-23, &["12771880859375", "-5151296875", "3491750", "1"]),
            (
                -47,
                &[
                    "16042929600623870849609375",
                    "-14982472850828613281250",
                    "5115161850595703125",
                    "-9987963828125",
                    "2257834125",
                    "1",
                ],
            ),
            (
                -71,
                &[
                    "737707086760731113357714241006081263",
                    "-425319473946139603274605151187659",
                    "5138800366453976780323726329446",
                    "-823534263439730779968091389",
                    "98394038810047812049302",
                    "-3091990138604570",
                    "313645809715",
                    "1",
                ],
            ),
            (
                -84,
                &[
                    "-5133201653210986057826304",
                    "88821246589810089394176",
                    "-5663679223085309952",
                    "-3196800946944",
                    "1",
                ],
            ),
        ];
        for &(d, coeffs) in cases {
            let h = hilbert_class_polynomial(disc(d)).unwrap();
            assert_eq!(h.coefficients, ints(coeffs), "D = {d}");
        }
    }

    #[test]
    fn stable_under_doubling() {
        for d in [-3, -4, -23, -47, -71, -143] {
            let a = hilbert_class_polynomial(disc(d)).unwrap();
            let b = hilbert_class_polynomial_from(disc(d), 2 * a.precision_bits).unwrap();
            assert_eq!(a.coefficients, b.coefficients, "D = {d}");
            assert_eq!(b.precision_bits, 2 * a.precision_bits);
        }
    }

    #[test]
    fn degree_is_class_number() {
        for d in Discriminant::in_range(-500, -1) {
            let h = class_number(d);
            let poly = hilbert_class_polynomial(d).unwrap();
            assert_eq!(poly.degree() as u64, h, "D = {d}");
            assert_eq!(poly.coefficients.last(), Some(&BigInt::one()));
        }
    }

    #[test]
    fn too_low_start_precision_is_retried() {
        // 64 bits cannot pin the coefficients of H_-71; doubling recovers them
        let a = hilbert_class_polynomial(disc(-71)).unwrap();
        let b = hilbert_class_polynomial_from(disc(-71), 64).unwrap();
        assert_eq!(a.coefficients, b.coefficients);
        assert!(b.precision_bits > 64);
    }

    #[test]
    fn conjugate_forms_give_conjugate_j() {
        let bits = 192;
        for d in [-23, -47, -71, -95, -191] {
            let pts = heegner_points(disc(d));
            for p in &pts {
                let mirror = pts.iter().find(|q| q.form.a() == p.form.a() && q.form.b() == -p.form.b());
                if let Some(m) = mirror {
                    let j = j_value(&p.tau(2 * bits), bits).unwrap();
                    let k = j_value(&m.tau(2 * bits), bits).unwrap();
                    assert!(close(&j, &k.conj(), 1e-40), "D = {d}, {}", p.form);
                }
            }
        }
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(24))]
        #[test]
        fn j_periodic(re in -2000i64..2000, im in 600i64..3000, k in -5i64..5) {
            let bits = 96;
            let tau = FixedComplex::new(Fixed::from_ratio(re, 1000, bits), Fixed::from_ratio(im, 1000, bits));
            let shifted = tau.add(&FixedComplex::from_real(Fixed::from_int(k, bits)));
            let a = j_value(&tau, bits).unwrap();
            let b = j_value(&shifted, bits).unwrap();
            let (mag, _) = a.to_f64();
            proptest::prop_assert!(close(&a, &b, 1e-18 * mag.abs().max(1.0)));
        }
    }
}
