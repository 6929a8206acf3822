//! Curve corpus files: one `label a1 a2 a3 a4 a6` record per line, `#` for
//! comments.

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::elliptic::{CurveError, EllipticCurve};

/// A labelled Weierstrass model with nonzero discriminant.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveRecord {
    pub label: String,
    pub model: EllipticCurve,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("empty label")]
    EmptyLabel,
    #[error("label {0:?} contains whitespace")]
    LabelWhitespace(String),
    #[error("expected a label and 5 coefficients, found {0} fields")]
    FieldCount(usize),
    #[error("coefficient {0:?} is not an integer")]
    BadInteger(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
}

impl CurveRecord {
    pub fn new<T: Into<BigInt>>(label: &str, coefficients: [T; 5]) -> Result<Self, RecordError> {
        if label.is_empty() {
            return Err(RecordError::EmptyLabel);
        }
        if label.chars().any(char::is_whitespace) {
            return Err(RecordError::LabelWhitespace(label.to_string()));
        }
        Ok(CurveRecord { label: label.to_string(), model: EllipticCurve::new(coefficients)? })
    }

    /// Parses `label a1 a2 a3 a4 a6`.
    pub fn parse_line(line: &str) -> Result<Self, RecordError> {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(RecordError::FieldCount(fields.len()));
        }
        let coefficients = parse_coefficients(&fields[1..])?;
        CurveRecord::new(fields[0], coefficients)
    }
}

pub(crate) fn parse_coefficients(fields: &[&str]) -> Result<[BigInt; 5], RecordError> {
    let mut out: [BigInt; 5] = Default::default();
    if fields.len() != 5 {
        return Err(RecordError::FieldCount(fields.len() + 1));
    }
    for (slot, f) in out.iter_mut().zip(fields) {
        *slot = f.parse().map_err(|_| RecordError::BadInteger(f.to_string()))?;
    }
    Ok(out)
}

impl fmt::Display for CurveRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = &self.model;
        write!(f, "{} {} {} {} {} {}", self.label, m.a1, m.a2, m.a3, m.a4, m.a6)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LineError {
    /// 1-based.
    pub line: usize,
    pub error: RecordError,
}

impl fmt::Display for LineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.error)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Corpus {
    pub records: Vec<CurveRecord>,
    pub errors: Vec<LineError>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("no line of the corpus could be parsed ({} errors, first: {})", .0.len(), .0[0])]
pub struct UnparseableCorpus(pub Vec<LineError>);

/// Parses every record line. Bad lines are collected rather than fatal,
/// unless no line parses at all.
pub fn parse_corpus(text: &str) -> Result<Corpus, UnparseableCorpus> {
    let mut corpus = Corpus::default();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        match CurveRecord::parse_line(line) {
            Ok(r) => corpus.records.push(r),
            Err(error) => corpus.errors.push(LineError { line: i + 1, error }),
        }
    }
    if corpus.records.is_empty() && !corpus.errors.is_empty() {
        return Err(UnparseableCorpus(corpus.errors));
    }
    Ok(corpus)
}

/// A few small-conductor curves from Cremona's tables, addressable by label.
pub const BUILTIN_CURVES: &[(&str, [i64; 5])] = &[
    ("11a1", [0, -1, 1, -10, -20]),
    ("11a3", [0, -1, 1, 0, 0]),
    ("14a1", [1, 0, 1, 4, -6]),
    ("15a1", [1, 1, 1, -10, -10]),
    ("17a1", [1, -1, 1, -1, -14]),
    ("19a1", [0, 1, 1, -9, -15]),
    ("37a1", [0, 0, 1, -1, 0]),
];

/// Case-insensitive lookup in [`BUILTIN_CURVES`]; the record keeps the
/// lower-case label.
pub fn builtin_curve(label: &str) -> Option<CurveRecord> {
    let wanted = label.to_ascii_lowercase();
    BUILTIN_CURVES
        .iter()
        .find(|(l, _)| *l == wanted)
        .map(|(l, c)| CurveRecord::new(l, *c).expect("built-in curves are nonsingular"))
}
