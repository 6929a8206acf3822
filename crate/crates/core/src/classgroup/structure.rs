use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::form::{compose, enumerate_reduced, power, principal_form, reduce, QuadraticForm};
use super::ClassGroupError;
use crate::arith;
use crate::quadfield::{splitting_type, Discriminant, SplittingKind};

/// Largest class number for which the full structure is computed.
pub const MAX_CLASS_NUMBER: u64 = 1_000_000;

/// `Pic(O_K)` as an explicit abelian group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassGroupStructure {
    pub disc: Discriminant,
    pub reduced_forms: Vec<QuadraticForm>,
    pub class_number: u64,
    /// Invariant factors `d_1 | d_2 | ... | d_k`; empty for the trivial group.
    pub elementary_divisors: Vec<u64>,
    /// One generator per invariant factor, of exactly that order.
    pub generators: Vec<QuadraticForm>,
}

impl ClassGroupStructure {
    pub fn identity(&self) -> QuadraticForm {
        principal_form(self.disc)
    }

    /// `Z/3 x Z/6`-style rendering; `1` for the trivial group.
    pub fn describe(&self) -> String {
        describe_divisors(&self.elementary_divisors)
    }

    pub fn p_torsion(&self, p: u64) -> PTorsion {
        let identity = self.identity();
        let mut generators = Vec::new();
        for (&d, g) in self.elementary_divisors.iter().zip(&self.generators) {
            if d % p == 0 {
                generators.push(power(g, d / p, identity));
            }
        }
        PTorsion { p, rank: generators.len() as u32, generators }
    }
}

pub(crate) fn describe_divisors(divisors: &[u64]) -> String {
    if divisors.is_empty() {
        return "1".to_string();
    }
    divisors.iter().map(|d| format!("Z/{d}Z")).collect::<Vec<_>>().join(" x ")
}

/// The `p`-torsion subgroup `Pic(O_K)[p]`, elementary abelian of the given rank.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PTorsion {
    pub p: u64,
    pub rank: u32,
    pub generators: Vec<QuadraticForm>,
}

impl PTorsion {
    pub fn describe(&self) -> String {
        describe_divisors(&vec![self.p; self.rank as usize])
    }
}

/// Order of a class, using the prime factorisation of a known multiple.
pub fn order_of(form: &QuadraticForm, identity: QuadraticForm, multiple: u64) -> u64 {
    let mut order = multiple;
    for (p, _) in arith::factor_u64(multiple) {
        while order % p == 0 && power(form, order / p, identity) == identity {
            order /= p;
        }
    }
    order
}

/// Structure of `Pic(O_K)` from the full list of reduced forms.
///
/// Repeatedly picks an element of maximal order in the quotient by the
/// subgroup generated so far, then corrects it by an element of that
/// subgroup so that its order in the whole group equals its coset order.
pub fn group_structure(disc: Discriminant) -> Result<ClassGroupStructure, ClassGroupError> {
    let forms = enumerate_reduced(disc);
    let h = forms.len() as u64;
    if h > MAX_CLASS_NUMBER {
        return Err(ClassGroupError::TooLarge { h, max: MAX_CLASS_NUMBER });
    }
    let identity = principal_form(disc);

    // subgroup element -> coordinates w.r.t. the chosen generators
    let mut subgroup: HashMap<QuadraticForm, Vec<u64>> = HashMap::from([(identity, Vec::new())]);
    let mut gens: Vec<(QuadraticForm, u64)> = Vec::new();

    while (subgroup.len() as u64) < h {
        let quotient_order = h / subgroup.len() as u64;
        let mut best: Option<(QuadraticForm, u64)> = None;
        for f in &forms {
            if subgroup.contains_key(f) {
                continue;
            }
            let m = coset_order(f, &subgroup, identity, quotient_order);
            if best.map_or(true, |(_, bm)| m > bm) {
                best = Some((*f, m));
            }
            if m == quotient_order {
                break;
            }
        }
        let (x, m) = best.expect("proper subgroup has a complement element");

        let coords = &subgroup[&power(&x, m, identity)];
        let mut lifted = x;
        for (i, &e) in coords.iter().enumerate() {
            let (g, n) = gens[i];
            if e % m != 0 {
                return Err(ClassGroupError::Internal(format!(
                    "coset order {m} does not divide coordinate {e} for {x}"
                )));
            }
            let shift = (n - (e / m) % n) % n;
            lifted = compose(&lifted, &power(&g, shift, identity))?;
        }
        if power(&lifted, m, identity) != identity {
            return Err(ClassGroupError::Internal(format!("lift of {x} does not have order {m}")));
        }

        let old: Vec<(QuadraticForm, Vec<u64>)> = subgroup.iter().map(|(k, v)| (*k, v.clone())).collect();
        for (elem, c) in old.iter() {
            let mut cur = *elem;
            let mut padded = c.clone();
            padded.resize(gens.len(), 0);
            // coordinate 0 already present
            subgroup.insert(cur, [padded.clone(), vec![0]].concat());
            for j in 1..m {
                cur = compose(&cur, &lifted)?;
                subgroup.insert(cur, [padded.clone(), vec![j]].concat());
            }
        }
        gens.push((lifted, m));
    }

    gens.reverse();
    Ok(ClassGroupStructure {
        disc,
        class_number: h,
        elementary_divisors: gens.iter().map(|&(_, n)| n).collect(),
        generators: gens.iter().map(|&(g, _)| g).collect(),
        reduced_forms: forms,
    })
}

fn coset_order(
    f: &QuadraticForm,
    subgroup: &HashMap<QuadraticForm, Vec<u64>>,
    identity: QuadraticForm,
    quotient_order: u64,
) -> u64 {
    let mut order = quotient_order;
    for (p, _) in arith::factor_u64(quotient_order) {
        while order % p == 0 && subgroup.contains_key(&power(f, order / p, identity)) {
            order /= p;
        }
    }
    order
}

/// `Pic(O_K)[p]`.
pub fn p_torsion(disc: Discriminant, p: u64) -> Result<PTorsion, ClassGroupError> {
    Ok(group_structure(disc)?.p_torsion(p))
}

/// Class of a prime of `O_K` above the rational prime `q`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PrimeIdealClass {
    /// `(q)` stays prime; it is principal, so inverting it leaves `Pic` unchanged.
    Inert,
    Class(QuadraticForm),
}

pub fn prime_ideal_class(disc: Discriminant, q: u64) -> PrimeIdealClass {
    if splitting_type(disc, q).kind == SplittingKind::Inert {
        return PrimeIdealClass::Inert;
    }
    let d = disc.value() as i128;
    let q = q as i128;
    let modulus = 4 * q;
    let b = (0..=q)
        .find(|&b| (b * b - d).rem_euclid(modulus) == 0)
        .expect("split or ramified prime has a square root of D mod 4q");
    let c = (b * b - d) / modulus;
    PrimeIdealClass::Class(reduce(&QuadraticForm::raw(q as i64, b as i64, c as i64)))
}
