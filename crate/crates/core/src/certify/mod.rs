//! Checks every hypothesis of the non-vanishing theorem for a triple
//! `(p, D, E)` and records the outcome as a [`Certificate`].
//!
//! All checks always run, so a failed certificate lists every violated
//! hypothesis. Module errors never abort: they turn the verdict into
//! `indeterminate` with the error text as reason.

mod scan;

use serde::{Deserialize, Serialize};

use crate::arith;
use crate::classgroup::{group_structure, ClassGroupStructure, QuadraticForm};
use crate::cli::CurveRecord;
use crate::cmfield::{hilbert_class_polynomial, HilbertClassPolynomial};
use crate::elliptic::{good_reduction_at, torsion_subgroup, RationalPoint, Reduction, TorsionGroup};
use crate::quadfield::{is_peu_ramifie, kummer_criterion, splitting_type, Discriminant, SplittingKind};

pub use scan::{scan, ScanError, ADMISSIBLE_PRIMES, MAX_SCAN_WIDTH};

/// Rank statement carried into the rank-transfer record.
pub const RANK_TRANSFER: &str = "rk(B(S)) = rk(E(K'))";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PicCheck {
    pub holds: bool,
    pub p_rank: u32,
    pub class_number: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Capitulation {
    /// Every ideal of `K` becomes principal in its Hilbert class field.
    GuaranteedPrincipalIdealTheorem,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GoodReductionCheck {
    /// Reduction of the given model over `Q` at `p`.
    pub at_p: Reduction,
    /// Good reduction over `K'` at every prime above `p`, inferred from `at_p`.
    pub over_kprime: bool,
    pub inference: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TorsionCheck {
    /// A point of exact order `p` in `E(Q)`, hence in `E(K')`.
    pub point: Option<RationalPoint>,
    pub torsion_over_q: Option<TorsionGroup>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum RankOverKprime {
    AssertedZero { source: String },
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankTransfer {
    pub statement: String,
    /// Whether `B(S)` is known to be torsion, i.e. the rank over `K'` is asserted zero.
    pub b_is_torsion: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TargetGroup {
    pub structure: String,
    pub rank: u32,
    pub generators: Vec<QuadraticForm>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Reason {
    pub check: String,
    pub detail: String,
}

impl Reason {
    fn new(check: &str, detail: impl Into<String>) -> Self {
        Reason { check: check.to_string(), detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verdict {
    Certified,
    CertifiedConditional,
    Failed { reasons: Vec<Reason> },
    Indeterminate { reasons: Vec<Reason> },
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::Certified => "certified",
            Verdict::CertifiedConditional => "certified_conditional",
            Verdict::Failed { .. } => "failed",
            Verdict::Indeterminate { .. } => "indeterminate",
        }
    }

    pub fn reasons(&self) -> &[Reason] {
        match self {
            Verdict::Failed { reasons } | Verdict::Indeterminate { reasons } => reasons,
            _ => &[],
        }
    }

    /// Names of the violated checks.
    pub fn failed_checks(&self) -> Vec<&str> {
        self.reasons().iter().map(|r| r.check.as_str()).collect()
    }
}

/// Field order is the serialization order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Certificate {
    pub p: u64,
    #[serde(rename = "D")]
    pub disc: Discriminant,
    pub curve: CurveRecord,
    pub check_p_admissible: bool,
    pub check_pic_p: Option<PicCheck>,
    pub check_p_unramified_if_3: bool,
    pub check_peu_ramifie: bool,
    pub check_kummer_iso: bool,
    pub kprime: Option<HilbertClassPolynomial>,
    pub capitulation: Capitulation,
    pub check_good_reduction: GoodReductionCheck,
    pub check_torsion_point: TorsionCheck,
    pub rank_over_kprime: RankOverKprime,
    pub derived_dimension: Option<u64>,
    pub derived_rank_transfer: Option<RankTransfer>,
    pub derived_target_group: Option<TargetGroup>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DerivedFacts {
    pub dimension: u64,
    pub rank_transfer: RankTransfer,
    pub target_group: TargetGroup,
}

/// Dimension `[K':K] = h`, the rank transfer and `Pic(O_K)[p]`.
pub fn derived_facts(group: &ClassGroupStructure, p: u64, rank: &RankOverKprime) -> DerivedFacts {
    let torsion = group.p_torsion(p);
    DerivedFacts {
        dimension: group.class_number,
        rank_transfer: RankTransfer {
            statement: RANK_TRANSFER.to_string(),
            b_is_torsion: matches!(rank, RankOverKprime::AssertedZero { .. }),
        },
        target_group: TargetGroup { structure: torsion.describe(), rank: torsion.rank, generators: torsion.generators },
    }
}

const GOOD_REDUCTION_INFERENCE: &str =
    "a model over Z with good reduction at p stays smooth over the primes of K' above p";

/// `p` must be an odd prime for which a rational point of order `p` can exist.
pub fn p_admissible(p: u64) -> bool {
    p >= 3 && arith::is_prime(p) && p <= 13
}

pub fn check_hypotheses(p: u64, disc: Discriminant, curve: &CurveRecord, rank_assertion: Option<&str>) -> Certificate {
    let mut failed = Vec::new();
    let mut errors = Vec::new();

    let check_p_admissible = p_admissible(p);
    if !check_p_admissible {
        failed.push(Reason::new("p_admissible", format!("{p} is not an odd prime in {{3, 5, 7, 11, 13}}")));
    }

    let group = match group_structure(disc) {
        Ok(g) => Some(g),
        Err(e) => {
            errors.push(Reason::new("pic_p", e.to_string()));
            None
        }
    };
    // the splitting and reduction checks only make sense at a prime
    let usable = arith::is_prime(p);
    let check_pic_p = group.as_ref().map(|g| {
        let rank = if usable { g.p_torsion(p).rank } else { 0 };
        PicCheck { holds: rank > 0, p_rank: rank, class_number: g.class_number }
    });
    if let Some(c) = &check_pic_p {
        if !c.holds {
            failed.push(Reason::new("pic_p", format!("Pic(O_K)[{p}] = 0 (h = {})", c.class_number)));
        }
    }

    let check_p_unramified_if_3 = p != 3 || splitting_type(disc, 3).kind != SplittingKind::Ramified;
    if !check_p_unramified_if_3 {
        failed.push(Reason::new("p_unramified_if_3", format!("3 ramifies in Q(sqrt({}))", disc.radicand())));
    }

    let check_peu_ramifie = usable && is_peu_ramifie(disc, p);
    if !check_peu_ramifie {
        let e = if usable { splitting_type(disc, p).e } else { 0 };
        failed.push(Reason::new("peu_ramifie", format!("e = {e} is not below p - 1 = {}", p.saturating_sub(1))));
    }

    let check_kummer_iso = usable && kummer_criterion(disc, p);
    if !check_kummer_iso {
        let why = if disc.value() == -3 { "K = Q(sqrt(-3)) contains the cube roots of unity" } else { "p < 3" };
        failed.push(Reason::new("kummer_iso", why));
    }

    let kprime = match hilbert_class_polynomial(disc) {
        Ok(h) => Some(h),
        Err(e) => {
            errors.push(Reason::new("kprime", e.to_string()));
            None
        }
    };

    let at_p = if usable { good_reduction_at(&curve.model, p, false) } else { Reduction::Indeterminate };
    let check_good_reduction = GoodReductionCheck {
        at_p,
        over_kprime: at_p == Reduction::Good,
        inference: GOOD_REDUCTION_INFERENCE.to_string(),
    };
    match at_p {
        Reduction::Good => {}
        Reduction::Bad => failed.push(Reason::new("good_reduction", format!("bad reduction at {p}"))),
        Reduction::Indeterminate => failed.push(Reason::new(
            "good_reduction",
            format!("{p} divides the discriminant of a model not known to be minimal"),
        )),
    }

    let check_torsion_point = match torsion_subgroup(&curve.model) {
        Ok(t) => {
            let point = t.points.iter().find(|q| curve.model.order_up_to(q, p as u32) == Some(p as u32)).cloned();
            if point.is_none() {
                failed.push(Reason::new("torsion_point", format!("E(Q)_tors = {} has no point of order {p}", t.describe())));
            }
            TorsionCheck { point, torsion_over_q: Some(t) }
        }
        Err(e) => {
            errors.push(Reason::new("torsion_point", e.to_string()));
            TorsionCheck { point: None, torsion_over_q: None }
        }
    };

    let rank_over_kprime = match rank_assertion {
        Some(s) => RankOverKprime::AssertedZero { source: s.to_string() },
        None => RankOverKprime::Unknown,
    };

    let mut derived = None;
    if failed.is_empty() && errors.is_empty() {
        let group = group.as_ref().expect("no class group error");
        let facts = derived_facts(group, p, &rank_over_kprime);
        let degree = kprime.as_ref().map(|k| k.degree() as u64);
        if degree != Some(facts.dimension) || group.reduced_forms.len() as u64 != facts.dimension {
            errors.push(Reason::new(
                "internal",
                format!("dimension {} disagrees with deg H_D = {degree:?}", facts.dimension),
            ));
        } else {
            derived = Some(facts);
        }
    }

    let verdict = if !failed.is_empty() {
        failed.extend(errors);
        Verdict::Failed { reasons: failed }
    } else if !errors.is_empty() {
        Verdict::Indeterminate { reasons: errors }
    } else if matches!(rank_over_kprime, RankOverKprime::AssertedZero { .. }) {
        Verdict::Certified
    } else {
        Verdict::CertifiedConditional
    };

    let (derived_dimension, derived_rank_transfer, derived_target_group) = match derived {
        Some(f) => (Some(f.dimension), Some(f.rank_transfer), Some(f.target_group)),
        None => (None, None, None),
    };

    Certificate {
        p,
        disc,
        curve: curve.clone(),
        check_p_admissible,
        check_pic_p,
        check_p_unramified_if_3,
        check_peu_ramifie,
        check_kummer_iso,
        kprime,
        capitulation: Capitulation::GuaranteedPrincipalIdealTheorem,
        check_good_reduction,
        check_torsion_point,
        rank_over_kprime,
        derived_dimension,
        derived_rank_transfer,
        derived_target_group,
        verdict,
    }
}
