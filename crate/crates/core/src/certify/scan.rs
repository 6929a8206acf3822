use rayon::prelude::*;
use thiserror::Error;

use super::{check_hypotheses, Certificate, Verdict};
use crate::classgroup::class_number;
use crate::cli::CurveRecord;
use crate::elliptic::{good_reduction_at, torsion_subgroup, Reduction};
use crate::quadfield::Discriminant;

/// Primes a scan may target.
pub const ADMISSIBLE_PRIMES: [u64; 5] = [3, 5, 7, 11, 13];
/// Widest discriminant interval a single scan accepts.
pub const MAX_SCAN_WIDTH: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScanError {
    #[error("p = {0} is not one of 3, 5, 7, 11, 13")]
    InadmissiblePrime(u64),
    #[error("empty discriminant range [{0}, {1}]")]
    EmptyRange(i64, i64),
    #[error("discriminant range [{lo}, {hi}] is wider than {max}")]
    RangeTooWide { lo: i64, hi: i64, max: u64 },
}

/// Candidate certificates for all `p` in `primes`, fundamental `D` in
/// `[lo, hi]` and curves in `corpus`, ordered by `|D|`, then label, then `p`.
///
/// A triple is kept when its certificate is not failed. Rank over `K'` is
/// never asserted here, so survivors are conditional (or indeterminate).
pub fn scan(corpus: &[CurveRecord], lo: i64, hi: i64, primes: &[u64]) -> Result<Vec<Certificate>, ScanError> {
    if let Some(&p) = primes.iter().find(|p| !ADMISSIBLE_PRIMES.contains(p)) {
        return Err(ScanError::InadmissiblePrime(p));
    }
    let hi = hi.min(-1);
    if lo > hi {
        return Err(ScanError::EmptyRange(lo, hi));
    }
    if hi.abs_diff(lo) > MAX_SCAN_WIDTH {
        return Err(ScanError::RangeTooWide { lo, hi, max: MAX_SCAN_WIDTH });
    }

    let discs: Vec<(Discriminant, u64)> =
        Discriminant::in_range(lo, hi).collect::<Vec<_>>().into_par_iter().map(|d| (d, class_number(d))).collect();
    // curves are filtered once per p; a torsion failure leaves the curve to check_hypotheses
    let curve_ok = |c: &CurveRecord, p: u64| {
        good_reduction_at(&c.model, p, false) == Reduction::Good
            && torsion_subgroup(&c.model).map_or(true, |t| t.order() % p as u32 == 0)
    };

    let mut triples = Vec::new();
    for &p in primes {
        let curves: Vec<&CurveRecord> = corpus.iter().filter(|c| curve_ok(c, p)).collect();
        for &(d, h) in &discs {
            if h % p != 0 {
                continue;
            }
            for &c in &curves {
                triples.push((p, d, c));
            }
        }
    }

    let mut out: Vec<Certificate> = triples
        .into_par_iter()
        .map(|(p, d, c)| check_hypotheses(p, d, c, None))
        .filter(|cert| !matches!(cert.verdict, Verdict::Failed { .. }))
        .collect();
    out.sort_by(|a, b| {
        (a.disc.abs(), &a.curve.label, a.p).cmp(&(b.disc.abs(), &b.curve.label, b.p))
    });
    Ok(out)
}
