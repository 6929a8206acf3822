//! Command-line front end. Every command writes JSON to stdout; `scan`
//! writes one certificate per line.
//!
//! Exit codes: `certify` maps its verdict to 0 (certified), 1 (conditional),
//! 2 (failed) or 3 (indeterminate); usage errors exit 64 and internal
//! errors 70.

mod corpus;

use std::ffi::OsString;
use std::io::Write;
use std::path::Path;

use clap::{Parser, Subcommand};
use num_bigint::BigInt;
use serde::Serialize;

use crate::arith::factor_bigint;
use crate::certify::{check_hypotheses, scan, Certificate, Verdict};
use crate::classgroup::{group_structure, QuadraticForm};
use crate::cmfield::{hilbert_class_polynomial, hilbert_class_polynomial_from, CmError};
use crate::elliptic::{good_reduction_at, torsion_subgroup, EllipticCurve, Reduction, TorsionGroup};
use crate::quadfield::Discriminant;

pub use corpus::{
    builtin_curve, parse_corpus, Corpus, CurveRecord, LineError, RecordError, UnparseableCorpus, BUILTIN_CURVES,
};

pub const EXIT_USAGE: i32 = 64;
pub const EXIT_INTERNAL: i32 = 70;

const FACTOR_BUDGET: u64 = 2_000_000;

#[derive(Debug, Parser)]
#[command(name = "classinv", version, about = "Hypothesis certificates for class-invariant non-vanishing")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Class group of an imaginary quadratic field.
    Classgroup {
        /// Fundamental discriminant D or squarefree d.
        #[arg(short = 'D', allow_negative_numbers = true)]
        disc: i64,
        /// Also report the p-torsion subgroup.
        #[arg(short)]
        p: Option<u64>,
    },
    /// Invariants, torsion and reduction of a curve given by a1 a2 a3 a4 a6.
    CurveInfo {
        #[arg(num_args = 5, allow_negative_numbers = true, value_names = ["A1", "A2", "A3", "A4", "A6"])]
        coefficients: Vec<String>,
    },
    /// Hilbert class polynomial H_D.
    HilbertPoly {
        #[arg(short = 'D', allow_negative_numbers = true)]
        disc: i64,
        /// Starting precision in bits (default: heuristic from |D| and h).
        #[arg(long)]
        precision_bits: Option<u32>,
    },
    /// Check every hypothesis for (p, D, curve).
    Certify {
        #[arg(short)]
        p: u64,
        #[arg(short = 'D', allow_negative_numbers = true)]
        disc: i64,
        /// Corpus file, "label a1 a2 a3 a4 a6", "a1 a2 a3 a4 a6" or a built-in label such as 11a1.
        #[arg(long, allow_hyphen_values = true)]
        curve: String,
        /// Provenance of the assertion that E(K') has rank zero.
        #[arg(long)]
        rank_zero_source: Option<String>,
    },
    /// Search a corpus and a discriminant range for candidate triples.
    Scan {
        #[arg(long)]
        curves: String,
        #[arg(long, allow_negative_numbers = true)]
        dmin: i64,
        #[arg(long, allow_negative_numbers = true)]
        dmax: i64,
        #[arg(short, value_delimiter = ',', required = true)]
        p: Vec<u64>,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

fn usage(e: impl ToString) -> Failure {
    Failure::Usage(e.to_string())
}

fn internal(e: impl ToString) -> Failure {
    Failure::Internal(e.to_string())
}

/// Exit code of `certify` for a verdict.
pub fn exit_code(verdict: &Verdict) -> i32 {
    match verdict {
        Verdict::Certified => 0,
        Verdict::CertifiedConditional => 1,
        Verdict::Failed { .. } => 2,
        Verdict::Indeterminate { .. } => 3,
    }
}

/// Runs the tool on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let target: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {m}");
            EXIT_USAGE
        }
        Err(Failure::Internal(m)) => {
            let _ = writeln!(err, "internal error: {m}");
            EXIT_INTERNAL
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Failure> {
    match command {
        Command::Classgroup { disc, p } => {
            let disc = Discriminant::parse_either(disc).map_err(usage)?;
            emit(out, &classgroup_report(disc, p)?)?;
            Ok(0)
        }
        Command::CurveInfo { coefficients } => {
            let fields: Vec<&str> = coefficients.iter().map(String::as_str).collect();
            let c = corpus::parse_coefficients(&fields).map_err(usage)?;
            let model = EllipticCurve::new(c).map_err(usage)?;
            emit(out, &curve_report(model)?)?;
            Ok(0)
        }
        Command::HilbertPoly { disc, precision_bits } => {
            let disc = Discriminant::parse_either(disc).map_err(usage)?;
            let h = match precision_bits {
                Some(b) => hilbert_class_polynomial_from(disc, b),
                None => hilbert_class_polynomial(disc),
            };
            let h = h.map_err(|e| match e {
                CmError::NoConvergence { .. } => internal(e),
                _ => usage(e),
            })?;
            emit(out, &h)?;
            Ok(0)
        }
        Command::Certify { p, disc, curve, rank_zero_source } => {
            if !crate::arith::is_prime(p) {
                return Err(usage(format!("p = {p} is not a prime")));
            }
            let disc = Discriminant::parse_either(disc).map_err(usage)?;
            let record = resolve_curve(&curve)?;
            let cert = check_hypotheses(p, disc, &record, rank_zero_source.as_deref());
            emit(out, &cert)?;
            Ok(exit_code(&cert.verdict))
        }
        Command::Scan { curves, dmin, dmax, p } => {
            let text = std::fs::read_to_string(&curves).map_err(|e| usage(format!("{curves}: {e}")))?;
            let corpus = parse_corpus(&text).map_err(usage)?;
            for e in &corpus.errors {
                let _ = writeln!(err, "{curves}: {e}");
            }
            let certs = scan(&corpus.records, dmin, dmax, &p).map_err(usage)?;
            for c in &certs {
                let line = serde_json::to_string(c).map_err(internal)?;
                writeln!(out, "{line}").map_err(internal)?;
            }
            Ok(0)
        }
    }
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).map_err(internal)?;
    writeln!(out, "{text}").map_err(internal)
}

/// Resolves the `--curve` argument: a file, an inline record, bare
/// coefficients, or a built-in label.
fn resolve_curve(arg: &str) -> Result<CurveRecord, Failure> {
    if Path::new(arg).is_file() {
        let text = std::fs::read_to_string(arg).map_err(|e| usage(format!("{arg}: {e}")))?;
        let corpus = parse_corpus(&text).map_err(usage)?;
        if let Some(e) = corpus.errors.first() {
            return Err(usage(format!("{arg}: {e}")));
        }
        return match corpus.records.as_slice() {
            [one] => Ok(one.clone()),
            other => Err(usage(format!("{arg}: expected exactly one curve, found {}", other.len()))),
        };
    }
    let fields: Vec<&str> = arg.split_whitespace().collect();
    match fields.len() {
        6 => CurveRecord::parse_line(arg).map_err(usage),
        5 => {
            let c = corpus::parse_coefficients(&fields).map_err(usage)?;
            CurveRecord::new("inline", c).map_err(usage)
        }
        1 => builtin_curve(fields[0]).ok_or_else(|| usage(format!("{arg:?} is neither a file nor a known label"))),
        _ => Err(usage(format!("cannot read a curve from {arg:?}"))),
    }
}

#[derive(Debug, Serialize)]
struct PTorsionReport {
    p: u64,
    rank: u32,
    structure: String,
    generators: Vec<QuadraticForm>,
}

#[derive(Debug, Serialize)]
struct ClassgroupReport {
    #[serde(rename = "D")]
    disc: Discriminant,
    class_number: u64,
    structure: String,
    elementary_divisors: Vec<u64>,
    generators: Vec<QuadraticForm>,
    reduced_forms: Vec<QuadraticForm>,
    p_torsion: Option<PTorsionReport>,
}

fn classgroup_report(disc: Discriminant, p: Option<u64>) -> Result<ClassgroupReport, Failure> {
    let g = group_structure(disc).map_err(usage)?;
    let p_torsion = match p {
        Some(p) if !crate::arith::is_prime(p) => return Err(usage(format!("p = {p} is not a prime"))),
        Some(p) => {
            let t = g.p_torsion(p);
            Some(PTorsionReport { p, rank: t.rank, structure: t.describe(), generators: t.generators })
        }
        None => None,
    };
    Ok(ClassgroupReport {
        disc,
        class_number: g.class_number,
        structure: g.describe(),
        elementary_divisors: g.elementary_divisors.clone(),
        generators: g.generators.clone(),
        reduced_forms: g.reduced_forms.clone(),
        p_torsion,
    })
}

#[derive(Debug, Serialize)]
struct PrimeReport {
    #[serde(with = "crate::json::big_int")]
    p: BigInt,
    reduction: Reduction,
}

#[derive(Debug, Serialize)]
struct CurveReport {
    model: EllipticCurve,
    torsion_structure: String,
    torsion: TorsionGroup,
    /// `None` when the discriminant could not be factored within budget.
    primes_dividing_delta: Option<Vec<PrimeReport>>,
}

fn curve_report(model: EllipticCurve) -> Result<CurveReport, Failure> {
    let torsion = torsion_subgroup(&model).map_err(internal)?;
    let primes = factor_bigint(&model.delta, FACTOR_BUDGET).map(|f| {
        f.into_iter()
            .map(|(p, _)| {
                let p = BigInt::from(p);
                // beyond u64 the model is minimal at p only if delta is not divisible by p^12
                let reduction = match u64::try_from(&p) {
                    Ok(small) => good_reduction_at(&model, small, false),
                    Err(_) => Reduction::Bad,
                };
                PrimeReport { p, reduction }
            })
            .collect()
    });
    Ok(CurveReport { torsion_structure: torsion.describe(), torsion, model, primes_dividing_delta: primes })
}

/// Serializes a certificate exactly as `certify` prints it.
pub fn certificate_json(cert: &Certificate) -> String {
    serde_json::to_string_pretty(cert).expect("certificates serialize")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("classinv").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn certify_exit_codes() {
        let (code, out, _) = run_args(&["certify", "-p", "5", "-D", "-47", "--curve", "11a1 0 -1 1 -10 -20", "--rank-zero-source", "tables"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["verdict"]["status"], "certified");
        assert_eq!(v["D"]["D"], -47);
        assert_eq!(v["D"]["d"], -47);
        let (code, _, _) = run_args(&["certify", "-p", "3", "-D", "-3", "--curve", "14a1 1 0 1 4 -6"]);
        assert_eq!(code, 2);
        let (code, _, _) = run_args(&["certify", "-p", "3", "-D", "-23", "--curve", "14A1"]);
        assert_eq!(code, 1);
    }

    #[test]
    fn radicand_is_accepted_and_echoed() {
        // K = Q(sqrt(-5)) has D = -20
        let (code, out, _) = run_args(&["classgroup", "-D", "-5"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["D"]["D"], -20);
        assert_eq!(v["D"]["d"], -5);
        assert_eq!(v["class_number"], 2);
    }

    #[test]
    fn classgroup_p_torsion() {
        let (code, out, _) = run_args(&["classgroup", "-D", "-23", "-p", "3"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["class_number"], 3);
        assert_eq!(v["p_torsion"]["rank"], 1);
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["classgroup", "-D", "-12"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["classgroup", "-D", "5"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bogus"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["certify", "-p", "3", "-D", "-23", "--curve", "0 0 0 0 0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["certify", "-p", "3", "-D", "-23", "--curve", "nosuch"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["curve-info", "1", "2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["certify", "-p", "9", "-D", "-23", "--curve", "14a1"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["scan", "--curves", "/nonexistent", "--dmin", "-10", "--dmax", "-1", "-p", "3"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["--help"]).0, 0);
        assert_eq!(run_args(&["--version"]).0, 0);
    }

    #[test]
    fn curve_info_reports_reduction() {
        let (code, out, _) = run_args(&["curve-info", "1", "0", "1", "4", "-6"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["torsion_structure"], "Z/6Z");
        assert_eq!(v["model"]["delta"], -21952);
        let primes = v["primes_dividing_delta"].as_array().unwrap();
        assert_eq!(primes.len(), 2);
        assert_eq!(primes[0]["p"], 2);
        assert_eq!(primes[0]["reduction"], "indeterminate");
        assert_eq!(primes[1]["reduction"], "bad");
    }

    #[test]
    fn hilbert_poly_command() {
        let (code, out, _) = run_args(&["hilbert-poly", "-D", "-23"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["coefficients"], serde_json::json!([12771880859375i64, -5151296875i64, 3491750, 1]));
        let (code, out, _) = run_args(&["hilbert-poly", "-D", "-23", "--precision-bits", "512"]);
        assert_eq!(code, 0);
        let w: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(w["coefficients"], v["coefficients"]);
        assert_eq!(w["precision_bits"], 512);
        assert_eq!(run_args(&["hilbert-poly", "-D", "-23", "--precision-bits", "10"]).0, EXIT_USAGE);
    }

    #[test]
    fn certificate_round_trip() {
        for (p, d, label, rank) in [(3, -23, "14a1", Some("tables")), (3, -3, "14a1", None), (5, -47, "11a1", None)] {
            let cert = check_hypotheses(p, Discriminant::new(d).unwrap(), &builtin_curve(label).unwrap(), rank);
            let text = certificate_json(&cert);
            let back: Certificate = serde_json::from_str(&text).unwrap();
            assert_eq!(back, cert);
            assert_eq!(exit_code(&back.verdict), exit_code(&cert.verdict));
        }
    }

    #[test]
    fn key_order_follows_field_list() {
        let cert = check_hypotheses(5, Discriminant::new(-47).unwrap(), &builtin_curve("11a1").unwrap(), None);
        let text = serde_json::to_string(&cert).unwrap();
        let keys = [
            "\"p\"", "\"D\"", "\"curve\"", "\"check_p_admissible\"", "\"check_pic_p\"", "\"check_p_unramified_if_3\"",
            "\"check_peu_ramifie\"", "\"check_kummer_iso\"", "\"kprime\"", "\"capitulation\"", "\"check_good_reduction\"",
            "\"check_torsion_point\"", "\"rank_over_kprime\"", "\"derived_dimension\"", "\"derived_rank_transfer\"",
            "\"derived_target_group\"", "\"verdict\"",
        ];
        let positions: Vec<usize> = keys.iter().map(|k| text.find(&format!("{k}:")).unwrap()).collect();
        assert!(positions.windows(2).all(|w| w[0] < w[1]), "{positions:?}");
    }
}
