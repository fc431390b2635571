//! `perfcong`: enumerate congruences of a Bruck-Reilly extension, classify
//! them as perfect or not, and cross-check on finite windows.
//!
//! Exit codes: 0 success, 1 spec or parse error, 2 validation failure,
//! 3 a window check found an uncovered class product.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use num_traits::{Signed, ToPrimitive};
use perfcong::classifier::{class_witnesses, Reason, WitnessError};
use perfcong::oracle::{scan_perfectness, Bounds, VerificationReport};
use perfcong::record::{ReportRecord, SpecRecord, VerdictRecord};
use perfcong::specfile::{parse_element, parse_group_spec, GroupSpec, ResolveError};
use perfcong::{catalog, classify, CongruenceKind, CongruenceSpec, Endo, PerfectVerdict, DEFAULT_NMAX};
use serde::Serialize;

const EXIT_SPEC: u8 = 1;
const EXIT_VALIDATION: u8 = 2;
const EXIT_FALSIFIED: u8 = 3;

/// Factor coordinates on `Z^r` never exceed this, whatever the matrix.
const MAX_FACTOR_NORM: u64 = 64;

#[derive(Parser)]
#[command(name = "perfcong", version, about = "Perfect congruences on Bruck-Reilly extensions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List idempotent-separating congruences and group congruences with period up to kmax
    Catalog {
        groupfile: PathBuf,
        #[arg(long)]
        kmax: u64,
        #[arg(long)]
        json: bool,
    },
    /// Decide whether a congruence is perfect
    Classify {
        groupfile: PathBuf,
        congruence: String,
        #[arg(long, default_value_t = DEFAULT_NMAX)]
        nmax: u64,
    },
    /// Check class products by brute force on a window of elements
    Verify {
        groupfile: PathBuf,
        congruence: String,
        #[arg(long, default_value_t = 4)]
        window: u64,
        /// Largest factor index; defaults to 2 * window + k
        #[arg(long)]
        bound: Option<u64>,
        #[arg(long)]
        json: bool,
    },
    /// Class members with a vanishing left or right index
    Witness {
        groupfile: PathBuf,
        congruence: String,
        element: String,
    },
}

/// A failure with its exit code; the message goes to stderr.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn spec(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_SPEC,
            message: message.into(),
        }
    }
}

type Outcome = Result<(String, u8), Failure>;

fn load(path: &Path) -> Result<GroupSpec, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::spec(format!("{}: {e}", path.display())))?;
    parse_group_spec(&text)
        .map_err(|e| Failure::spec(format!("{}:{}: {}", path.display(), e.line, e.reason)))
}

fn resolve(spec: &GroupSpec, text: &str) -> Result<CongruenceSpec, Failure> {
    spec.resolve(text).map_err(|e| match e {
        ResolveError::Syntax(e) => Failure::spec(e.to_string()),
        ResolveError::Validation(v) => Failure {
            code: EXIT_VALIDATION,
            message: format!("{text}: validation failed ({}): {v}", v.code()),
        },
    })
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("records serialize") + "\n"
}

fn describe(spec: &GroupSpec, c: &CongruenceSpec) -> String {
    let name = spec.name_of(c.normal_subgroup()).map(|n| format!(" [{n}]")).unwrap_or_default();
    match c.kind() {
        CongruenceKind::IdempotentSeparating { normal } => format!("is N={normal}{name}"),
        CongruenceKind::Group { normal, z, k } => format!("gc N={normal}{name} z={z} k={k}"),
    }
}

fn verdict_line(v: &PerfectVerdict) -> String {
    let status = if v.is_perfect() { "perfect" } else { "not perfect" };
    let reason = match v.reason {
        Reason::IdempotentSeparating => "idempotent-separating".to_string(),
        Reason::ZeroPeriod => "zero-period".to_string(),
        Reason::CosetsCovered => "cosets-covered".to_string(),
        Reason::CosetMissed => match &v.evidence {
            Some(gap) => format!("coset-missed: n={} x={}", gap.n, gap.x),
            None => "coset-missed".to_string(),
        },
    };
    format!("{status} ({reason})")
}

fn run_catalog(path: &Path, kmax: u64, as_json: bool, notes: &mut String) -> Outcome {
    let spec = load(path)?;
    let s = &spec.semigroup;
    let pool: Option<Vec<_>> = if s.group.is_finite() {
        None
    } else {
        Some(spec.subgroups.iter().map(|(_, h)| h.clone()).collect())
    };
    let cat = catalog(s, kmax, pool.as_deref()).map_err(|e| Failure::spec(e.to_string()))?;
    if pool.is_some() {
        let _ = writeln!(notes, "note: subgroups of Z^r are taken from the spec file only");
    }
    if cat.is_truncated() {
        let _ = writeln!(notes, "note: group congruences with period k > {kmax} are not listed");
    }
    let out = if as_json {
        json(&cat.specs.iter().map(SpecRecord::from).collect::<Vec<_>>())
    } else {
        cat.specs.iter().map(|c| describe(&spec, c) + "\n").collect()
    };
    Ok((out, 0))
}

fn run_classify(path: &Path, congruence: &str, nmax: u64) -> Outcome {
    let spec = load(path)?;
    let c = resolve(&spec, congruence)?;
    let verdict = classify(&spec.semigroup, &c, nmax).map_err(|e| Failure::spec(e.to_string()))?;
    Ok((verdict_line(&verdict) + "\n", 0))
}

/// Bounds for the CLI's window check. On `Z^r` pairs stay in the unit box
/// and factors may grow by the matrix norm raised to the window.
fn cli_bounds(spec: &GroupSpec, window: u64, bound: u64) -> Bounds {
    match &spec.semigroup.alpha {
        Endo::Table(_) => Bounds::new(window, bound, 0),
        Endo::Matrix(a) => {
            let row_sum = (0..a.rows())
                .map(|i| (0..a.cols()).map(|j| a.get(i, j).abs()).sum::<num_bigint::BigInt>())
                .max()
                .and_then(|m| m.to_u64())
                .unwrap_or(u64::MAX)
                .max(1);
            let grow = row_sum.checked_pow(window.min(64) as u32).unwrap_or(u64::MAX);
            Bounds::new(window, bound, 1).with_factor_norm(grow.saturating_add(1).min(MAX_FACTOR_NORM))
        }
    }
}

#[derive(Serialize)]
struct VerifyRecord {
    pairs_checked: usize,
    verdict: VerdictRecord,
    witness: Option<ReportRecord>,
}

fn report_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "uncovered pair: x = {}, y = {}", r.pair.0, r.pair.1);
    let _ = writeln!(
        out,
        "product class window {}, factor bound {}{}",
        r.window,
        r.bound,
        if r.bound_relative { " (bound-relative)" } else { " (exhaustive)" }
    );
    let _ = writeln!(out, "covered: {}", r.covered);
    let list: Vec<String> = r.uncovered.iter().map(ToString::to_string).collect();
    let _ = writeln!(out, "uncovered: {}", list.join(" "));
    out
}

fn run_verify(path: &Path, congruence: &str, window: u64, bound: Option<u64>, as_json: bool) -> Outcome {
    let spec = load(path)?;
    let c = resolve(&spec, congruence)?;
    let s = &spec.semigroup;
    let bound = bound.unwrap_or(2 * window + c.period().unwrap_or(0));
    let bounds = cli_bounds(&spec, window, bound);
    let summary = scan_perfectness(s, &c, bounds, true).map_err(|e| Failure::spec(e.to_string()))?;
    let verdict = classify(s, &c, DEFAULT_NMAX).map_err(|e| Failure::spec(e.to_string()))?;
    let code = if summary.witness.is_some() { EXIT_FALSIFIED } else { 0 };
    if as_json {
        let record = VerifyRecord {
            pairs_checked: summary.pairs_checked,
            verdict: (&verdict).into(),
            witness: summary.witness.as_ref().map(ReportRecord::from),
        };
        return Ok((json(&record), code));
    }
    let mut out = String::new();
    let _ = writeln!(out, "congruence: {}", describe(&spec, &c));
    let _ = writeln!(out, "classified: {}", verdict_line(&verdict));
    let _ = writeln!(out, "pairs checked: {} (window {window}, bound {bound})", summary.pairs_checked);
    match &summary.witness {
        None => {
            let _ = writeln!(out, "result: covered");
        }
        Some(r) => {
            let _ = writeln!(out, "result: falsified");
            out.push_str(&report_text(r));
        }
    }
    Ok((out, code))
}

fn run_witness(path: &Path, congruence: &str, element: &str) -> Outcome {
    let spec = load(path)?;
    let c = resolve(&spec, congruence)?;
    let x = parse_element(&spec.semigroup, element).map_err(|e| Failure::spec(e.to_string()))?;
    match class_witnesses(&spec.semigroup, &c, &x, DEFAULT_NMAX) {
        Ok((left, right)) => Ok((format!("left: {left}\nright: {right}\n"), 0)),
        Err(e @ (WitnessError::NotPositivePeriod | WitnessError::NotPerfect(_))) => Err(Failure {
            code: EXIT_VALIDATION,
            message: e.to_string(),
        }),
        Err(e) => Err(Failure::spec(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut notes = String::new();
    let outcome = match &cli.command {
        Command::Catalog { groupfile, kmax, json } => run_catalog(groupfile, *kmax, *json, &mut notes),
        Command::Classify {
            groupfile,
            congruence,
            nmax,
        } => run_classify(groupfile, congruence, *nmax),
        Command::Verify {
            groupfile,
            congruence,
            window,
            bound,
            json,
        } => run_verify(groupfile, congruence, *window, *bound, *json),
        Command::Witness {
            groupfile,
            congruence,
            element,
        } => run_witness(groupfile, congruence, element),
    };
    let _ = io::stderr().write_all(notes.as_bytes());
    match outcome {
        Ok((out, code)) => {
            let _ = io::stdout().write_all(out.as_bytes());
            ExitCode::from(code)
        }
        Err(f) => {
            let _ = writeln!(io::stderr(), "error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
