//! The `qmdetect` command line.
//!
//! Exit codes: 0 on success or a positive verdict, 1 when a certification or
//! scan is refuted (the witness is in the output), 2 on usage and input
//! errors. Relative `--output` paths are resolved against
//! `$QMDETECT_OUTPUT_DIR` when it is set.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use crate::algebra::{enumerate_characters, DirichletCharacter};
use crate::detector::{scan_detection, sign_changes, DetectionVerdict, Progression, ScanOptions};
use crate::eisenstein::{
    eisenstein_sign, finite_prime_check, prime_coefficient_polynomial, primes_in_progression, spanning_set,
    EisensteinSpec, FormSpec, FormTerm, HSpec, ParityPolicy, PrimeCheckCertificate, Verdict,
};
use crate::error::{Error, Result};
use crate::macmahon::{macmahon_table, verify_prime_identity};
use crate::qseries::{delta_series, CoefficientSource, QSeries};
use crate::wexpr::{certify_prime_detection, decompose, CertifyMode, PrimeCountPolicy, WExpression, WVerdict};

pub const OUTPUT_DIR_ENV: &str = "QMDETECT_OUTPUT_DIR";

#[derive(Parser, Debug)]
#[command(name = "qmdetect", version, about = "Exact prime-detecting Eisenstein and zeta-product identities")]
struct Cli {
    /// Output format; each command has its own default.
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,
    /// Write the artifact here instead of stdout.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Csv,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Emit {
    Series,
    Spec,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Kind {
    Twisted,
    E2,
    E2hat,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Series {
    Delta,
    E2,
    E2hat,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the Dirichlet characters mod M.
    Characters {
        #[arg(long = "modulus", visible_alias = "M")]
        modulus: u64,
    },
    /// q-expansion of one Eisenstein series, or of a form spec file.
    GenEisenstein(GenEisenstein),
    /// q-expansion of H_{k,l,chi,psi} for the class m mod M.
    GenH(GenH),
    /// Differences H_1 - H_2 spanning the forms detecting primes = m mod M at weight sum K.
    SpanningSet {
        #[arg(long = "K")]
        weight_sum: u32,
        #[arg(long = "M")]
        modulus: u64,
        #[arg(long = "m", allow_hyphen_values = true)]
        residue: i64,
        /// Drop parameter points whose constituents violate chi(-1)psi(-1) = (-1)^k.
        #[arg(long)]
        strict_parity: bool,
        /// Emit only the spec of the difference at this position.
        #[arg(long)]
        pick: Option<usize>,
    },
    /// Finite prime check of a form spec on a progression.
    Certify {
        #[arg(long)]
        spec: PathBuf,
        /// Residue class as m/M.
        #[arg(long)]
        progression: Progression,
        /// Comma-separated primes; defaults to the first r + 1 primes of the class.
        #[arg(long, value_delimiter = ',')]
        primes: Option<Vec<u64>>,
    },
    /// Write a zeta-product expression with Z_W = 1 as a combination of W_m.
    DecomposeW(WInput),
    /// Decide whether a(p) = 0 for every prime.
    CertifyW {
        #[command(flatten)]
        input: WInput,
        #[arg(long, default_value = "all")]
        mode: CertifyMode,
        /// Evaluate at R_W primes instead of R_W + 1.
        #[arg(long)]
        degree_primes: bool,
    },
    /// MacMahon's M_a(n), or the prime identity report.
    Macmahon {
        #[arg(long, default_value_t = 2)]
        a: u32,
        #[arg(long)]
        nmax: u64,
        #[arg(long)]
        verify_identity: bool,
    },
    /// Check vanishing at primes (and optionally non-vanishing elsewhere).
    Scan {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value = "0/1")]
        progression: Progression,
        /// Primes dividing the level are skipped; defaults to the level of the form.
        #[arg(long)]
        level: Option<u64>,
        #[arg(long)]
        bound: u64,
        #[arg(long)]
        strong: bool,
        #[arg(long, default_value_t = 20)]
        max_witnesses: usize,
    },
    /// Count sign changes of c(p) over primes p <= bound.
    SignChanges {
        #[arg(long, conflicts_with = "spec", required_unless_present = "spec")]
        series: Option<Series>,
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long, default_value = "0/1")]
        progression: Progression,
        #[arg(long)]
        bound: u64,
    },
}

#[derive(Args, Debug)]
struct GenEisenstein {
    #[arg(long, value_enum, default_value = "twisted", conflicts_with = "spec")]
    kind: Kind,
    #[arg(long)]
    k: Option<u32>,
    /// Character as M:index.
    #[arg(long, default_value = "1:0")]
    chi: String,
    #[arg(long, default_value = "1:0")]
    psi: String,
    #[arg(long, default_value_t = 0)]
    derivative: u32,
    #[arg(long, default_value_t = 1)]
    dilation: u64,
    /// Skip the parity requirement.
    #[arg(long)]
    formal: bool,
    /// Form spec file; excludes the inline parameters.
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long)]
    nmax: u64,
    #[arg(long, value_enum, default_value = "series")]
    emit: Emit,
}

#[derive(Args, Debug)]
struct GenH {
    #[arg(long)]
    k: u32,
    #[arg(long)]
    l: u32,
    #[arg(long = "M")]
    modulus: u64,
    #[arg(long = "m", allow_hyphen_values = true)]
    residue: i64,
    /// Index of chi among the characters mod M.
    #[arg(long, default_value_t = 0)]
    chi: u64,
    #[arg(long, default_value_t = 0)]
    psi: u64,
    #[arg(long)]
    nmax: u64,
    #[arg(long, value_enum, default_value = "series")]
    emit: Emit,
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct WInput {
    /// Terms as "A,l,k;A,l,k;...".
    #[arg(long, allow_hyphen_values = true)]
    terms: Option<String>,
    /// JSON file {"terms": [[A, l, k], ...]}.
    #[arg(long)]
    spec: Option<PathBuf>,
}

/// Result of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Artifact {
    code: i32,
    body: String,
}

/// Run with `args[0]` as the program name.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            return if code == 0 {
                Outcome { code, stdout: text, stderr: String::new() }
            } else {
                Outcome { code, stdout: String::new(), stderr: text }
            };
        }
    };
    let output = cli.output.clone();
    match execute(cli) {
        Ok(artifact) => match output {
            None => Outcome { code: artifact.code, stdout: artifact.body, stderr: String::new() },
            Some(path) => match write_output(&path, &artifact.body) {
                Ok(()) => Outcome { code: artifact.code, stdout: String::new(), stderr: String::new() },
                Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
            },
        },
        Err(e) => Outcome { code: 2, stdout: String::new(), stderr: format!("error: {e}\n") },
    }
}

fn write_output(path: &Path, body: &str) -> Result<()> {
    let path = match std::env::var_os(OUTPUT_DIR_ENV) {
        Some(dir) if path.is_relative() => Path::new(&dir).join(path),
        _ => path.to_path_buf(),
    };
    if let Some(parent) = path.parent() {
        std::fs::create_dir_all(parent).map_err(|e| Error::InvalidInput(format!("{}: {e}", parent.display())))?;
    }
    std::fs::write(&path, body).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn parse_character(text: &str) -> Result<DirichletCharacter> {
    let bad = || Error::Parse(format!("character {text:?}: expected M:index"));
    let (m, j) = text.split_once(':').ok_or_else(bad)?;
    let m: u64 = m.trim().parse().map_err(|_| bad())?;
    let j: u64 = j.trim().parse().map_err(|_| bad())?;
    DirichletCharacter::from_index(m, j)
}

fn positive(name: &str, value: u64) -> Result<()> {
    if value == 0 {
        return Err(Error::InvalidInput(format!("--{name} must be positive")));
    }
    Ok(())
}

fn unsupported(format: Format, what: &str) -> Error {
    Error::InvalidInput(format!("format {format:?} is not available for {what}").to_lowercase())
}

fn emit_series(series: &QSeries, format: Format) -> String {
    match format {
        Format::Json => to_json(series),
        Format::Text => series.to_text(),
        Format::Csv => {
            let mut out = String::from("n,value\n");
            for (n, c) in series.coeffs().iter().enumerate() {
                let _ = writeln!(out, "{n},{c}");
            }
            out
        }
    }
}

fn emit_form(form: &FormSpec, series: impl FnOnce() -> QSeries, emit: Emit, format: Format) -> Result<String> {
    match emit {
        Emit::Series => Ok(emit_series(&series(), format)),
        Emit::Spec if format == Format::Json => Ok(to_json(form)),
        Emit::Spec => Err(unsupported(format, "--emit spec")),
    }
}

#[derive(Serialize, Deserialize)]
pub struct CharacterRow {
    pub modulus: u64,
    pub index: u64,
    pub order: u32,
    pub conductor: u64,
    pub parity: i32,
    pub primitive: bool,
    pub real: bool,
    pub values: Vec<String>,
}

#[derive(Serialize, Deserialize)]
pub struct SpanningSetReport {
    pub weight_sum: u32,
    pub modulus: u64,
    pub residue: i64,
    pub strict_parity: bool,
    pub count: usize,
    pub forms: Vec<FormSpec>,
}

#[derive(Serialize, Deserialize)]
pub struct CertifyReport {
    pub certificate: PrimeCheckCertificate,
    pub eventual_sign: Option<i32>,
}

#[derive(Serialize, Deserialize)]
pub struct TableJson {
    pub a: u32,
    pub nmax: u64,
    pub values: Vec<String>,
}

#[derive(Serialize, Deserialize)]
pub struct DecomposeReport {
    pub verdict: WVerdict,
    pub decomposition: Option<Vec<(String, [i64; 4])>>,
    pub exponents: std::collections::BTreeMap<String, String>,
}

fn execute(cli: Cli) -> Result<Artifact> {
    let format = cli.format;
    let ok = |body: String| Ok(Artifact { code: 0, body });
    match cli.command {
        Command::Characters { modulus } => {
            positive("modulus", modulus)?;
            let rows: Vec<CharacterRow> = enumerate_characters(modulus)
                .into_iter()
                .map(|c| CharacterRow {
                    modulus: c.modulus(),
                    index: c.index(),
                    order: c.order(),
                    conductor: c.conductor(),
                    parity: c.parity(),
                    primitive: c.is_primitive(),
                    real: c.is_real(),
                    values: (0..modulus as i64).map(|n| c.value(n).to_string()).collect(),
                })
                .collect();
            match format.unwrap_or(Format::Json) {
                Format::Json => ok(to_json(&rows)),
                f => {
                    let sep = if f == Format::Csv { "," } else { "  " };
                    let mut out = ["index", "order", "conductor", "parity", "primitive", "values"].join(sep);
                    out.push('\n');
                    for r in rows {
                        let values = r.values.join(if f == Format::Csv { ";" } else { ", " });
                        let cells = [
                            r.index.to_string(),
                            r.order.to_string(),
                            r.conductor.to_string(),
                            r.parity.to_string(),
                            r.primitive.to_string(),
                            values,
                        ];
                        out.push_str(&cells.join(sep));
                        out.push('\n');
                    }
                    ok(out)
                }
            }
        }
        Command::GenEisenstein(g) => {
            positive("nmax", g.nmax)?;
            let form = match &g.spec {
                Some(path) => read_json::<FormSpec>(path)?,
                None => {
                    let base = match g.kind {
                        Kind::E2 => EisensteinSpec::e2(),
                        Kind::E2hat => EisensteinSpec::e2_hat(),
                        Kind::Twisted => {
                            let k = g.k.ok_or_else(|| Error::InvalidInput("--k is required for twisted series".into()))?;
                            let (chi, psi) = (parse_character(&g.chi)?, parse_character(&g.psi)?);
                            if g.formal {
                                EisensteinSpec::formal(k, chi, psi)?
                            } else {
                                EisensteinSpec::new(k, chi, psi)?
                            }
                        }
                    };
                    positive("dilation", g.dilation)?;
                    let spec = base.with_derivative(g.derivative).with_dilation(g.dilation);
                    FormSpec { terms: vec![FormTerm::Eisenstein { coeff: crate::algebra::CycValue::one(), eisenstein: spec }] }
                }
            };
            ok(emit_form(&form, || form.combination().qexp(g.nmax), g.emit, format.unwrap_or(Format::Json))?)
        }
        Command::GenH(g) => {
            positive("nmax", g.nmax)?;
            positive("M", g.modulus)?;
            let h = HSpec::new(
                g.k,
                g.l,
                DirichletCharacter::from_index(g.modulus, g.chi)?,
                DirichletCharacter::from_index(g.modulus, g.psi)?,
                g.residue,
                g.modulus,
            )?;
            let form = FormSpec { terms: vec![FormTerm::H { coeff: crate::algebra::CycValue::one(), h: h.clone() }] };
            ok(emit_form(&form, || h.qexp(g.nmax), g.emit, format.unwrap_or(Format::Json))?)
        }
        Command::SpanningSet { weight_sum, modulus, residue, strict_parity, pick } => {
            positive("M", modulus)?;
            let policy = if strict_parity { ParityPolicy::Strict } else { ParityPolicy::Formal };
            let pairs = spanning_set(weight_sum, modulus, residue, policy)?;
            let mut forms: Vec<FormSpec> = pairs.iter().map(|(a, b)| FormSpec::from_h_difference(a, b)).collect();
            if let Some(i) = pick {
                if i >= forms.len() {
                    return Err(Error::InvalidInput(format!("--pick {i}: only {} differences", forms.len())));
                }
                return match format.unwrap_or(Format::Json) {
                    Format::Json => ok(to_json(&forms.swap_remove(i))),
                    f => Err(unsupported(f, "--pick")),
                };
            }
            match format.unwrap_or(Format::Json) {
                Format::Json => ok(to_json(&SpanningSetReport {
                    weight_sum,
                    modulus,
                    residue,
                    strict_parity,
                    count: forms.len(),
                    forms,
                })),
                Format::Text => {
                    let mut out = String::new();
                    for (a, b) in &pairs {
                        let _ = writeln!(out, "{a} - {b}");
                    }
                    ok(out)
                }
                f => Err(unsupported(f, "spanning-set")),
            }
        }
        Command::Certify { spec, progression, primes } => {
            let form: FormSpec = read_json(&spec)?;
            let poly = prime_coefficient_polynomial(
                &form.combination(),
                progression.residue() as i64,
                progression.modulus(),
            )?;
            let primes = primes.unwrap_or_else(|| {
                primes_in_progression(progression.residue() as i64, progression.modulus(), poly.degree_bound() + 1)
            });
            let certificate = finite_prime_check(&poly, &primes)?;
            let code = if certificate.verdict == Verdict::Refuted { 1 } else { 0 };
            let report = CertifyReport { eventual_sign: eisenstein_sign(&poly).ok(), certificate };
            let body = match format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Text => {
                    let c = &report.certificate;
                    let mut out = format!("verdict: {:?}\n", c.verdict).to_lowercase();
                    let _ = writeln!(out, "degree bound: {}", c.polynomial.degree_bound());
                    let _ = writeln!(out, "primes: {:?}", c.primes);
                    if let Some(w) = &c.witness {
                        let _ = writeln!(out, "witness: c({}) = {}", w.prime, w.value);
                    }
                    out
                }
                f => return Err(unsupported(f, "certify")),
            };
            Ok(Artifact { code, body })
        }
        Command::DecomposeW(input) => {
            let w = read_w(&input)?;
            let exponents = w.zeta_exponents();
            let parts = match decompose(&w) {
                Ok(parts) => Some(parts),
                Err(Error::NonTrivialExponents) => None,
                Err(e) => return Err(e),
            };
            let report = DecomposeReport {
                verdict: if parts.is_some() { WVerdict::Detects } else { WVerdict::Refuted },
                decomposition: parts.as_ref().map(|p| {
                    p.iter().map(|(c, m)| (crate::algebra::rational_to_string(c), m.0)).collect()
                }),
                exponents: exponents.0.iter().map(|(m, b)| (m.to_string(), crate::algebra::rational_to_string(b))).collect(),
            };
            let code = if parts.is_some() { 0 } else { 1 };
            let body = match format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Text | Format::Csv => {
                    let mut out = String::new();
                    match &report.decomposition {
                        Some(parts) => {
                            for (c, m) in parts {
                                let _ = writeln!(out, "{c},{},{},{},{}", m[0], m[1], m[2], m[3]);
                            }
                        }
                        None => {
                            for (m, b) in &report.exponents {
                                let _ = writeln!(out, "exponent {m}: {b}");
                            }
                        }
                    }
                    out
                }
            };
            Ok(Artifact { code, body })
        }
        Command::CertifyW { input, mode, degree_primes } => {
            let w = read_w(&input)?;
            let policy = if degree_primes { PrimeCountPolicy::Degree } else { PrimeCountPolicy::DegreePlusOne };
            let cert = certify_prime_detection(&w, mode, policy)?;
            let code = if cert.verdict == WVerdict::Refuted { 1 } else { 0 };
            let body = match format.unwrap_or(Format::Json) {
                Format::Json => to_json(&cert),
                Format::Text => {
                    let mut out = format!("verdict: {:?}\n", cert.verdict).to_lowercase();
                    for (mode, v) in &cert.modes {
                        let _ = writeln!(out, "{mode}: {}", format!("{v:?}").to_lowercase());
                    }
                    if let Some(w) = &cert.witness {
                        let _ = writeln!(out, "witness: a({}) = {}", w.prime, w.value);
                    }
                    out
                }
                f => return Err(unsupported(f, "certify-w")),
            };
            Ok(Artifact { code, body })
        }
        Command::Macmahon { a, nmax, verify_identity } => {
            if verify_identity {
                let report = verify_prime_identity(nmax)?;
                let code = if report.holds() { 0 } else { 1 };
                let body = match format.unwrap_or(Format::Json) {
                    Format::Json => to_json(&report),
                    Format::Text => {
                        let mut out = format!(
                            "n = 2..{}: {} checked, {} mismatches\n",
                            report.nmax,
                            report.checked,
                            report.mismatches.len()
                        );
                        for m in &report.mismatches {
                            let _ = writeln!(out, "n = {}: {} vs {} (prime: {})", m.n, m.lhs, m.rhs, m.is_prime);
                        }
                        out
                    }
                    Format::Csv => {
                        let mut out = String::from("n,lhs,rhs,is_prime\n");
                        for m in &report.mismatches {
                            let _ = writeln!(out, "{},{},{},{}", m.n, m.lhs, m.rhs, m.is_prime);
                        }
                        out
                    }
                };
                return Ok(Artifact { code, body });
            }
            let table = macmahon_table(a, nmax)?;
            match format.unwrap_or(Format::Csv) {
                Format::Csv | Format::Text => ok(table.to_csv()),
                Format::Json => {
                    ok(to_json(&TableJson { a, nmax, values: table.values().iter().map(|v| v.to_string()).collect() }))
                }
            }
        }
        Command::Scan { spec, progression, level, bound, strong, max_witnesses } => {
            positive("bound", bound)?;
            let form: FormSpec = read_json(&spec)?;
            let combination = form.combination();
            let level = level.unwrap_or_else(|| combination.level());
            positive("level", level)?;
            let report = scan_detection(&combination, progression, level, bound, ScanOptions { strong, max_witnesses })?;
            let code = if report.verdict == DetectionVerdict::Fails { 1 } else { 0 };
            let body = match format.unwrap_or(Format::Json) {
                Format::Json => to_json(&report),
                Format::Text => {
                    let mut out = format!("verdict: {:?}\n", report.verdict).to_lowercase();
                    let _ = writeln!(out, "vacuous: {}", report.vacuous);
                    let _ = writeln!(out, "primes checked: {}", report.primes_checked);
                    for w in &report.witnesses {
                        let expected = format!("{:?}", w.expected).to_lowercase();
                        let _ = writeln!(out, "c({}) = {} (expected {expected})", w.n, w.value);
                    }
                    out
                }
                Format::Csv => {
                    let mut out = String::from("n,value,expected\n");
                    for w in &report.witnesses {
                        let _ = writeln!(out, "{},{},{}", w.n, w.value, format!("{:?}", w.expected).to_lowercase());
                    }
                    out.to_lowercase()
                }
            };
            Ok(Artifact { code, body })
        }
        Command::SignChanges { series, spec, progression, bound } => {
            positive("bound", bound)?;
            let report = match (series, spec) {
                (Some(Series::Delta), _) => sign_changes(&delta_series(bound), progression, bound)?,
                (Some(Series::E2), _) => sign_changes(&EisensteinSpec::e2(), progression, bound)?,
                (Some(Series::E2hat), _) => sign_changes(&EisensteinSpec::e2_hat(), progression, bound)?,
                (None, Some(path)) => {
                    let source: Box<dyn CoefficientSource> = Box::new(read_json::<FormSpec>(&path)?.combination());
                    sign_changes(source.as_ref(), progression, bound)?
                }
                (None, None) => return Err(Error::InvalidInput("one of --series or --spec is required".into())),
            };
            match format.unwrap_or(Format::Json) {
                Format::Json => ok(to_json(&report)),
                Format::Text => ok(format!(
                    "sign changes: {}\nprimes examined: {}\nnonzero: {}\n",
                    report.count, report.primes_examined, report.nonzero
                )),
                Format::Csv => {
                    let mut out = String::from("p\n");
                    for p in &report.positions {
                        let _ = writeln!(out, "{p}");
                    }
                    ok(out)
                }
            }
        }
    }
}

fn read_w(input: &WInput) -> Result<WExpression> {
    match (&input.terms, &input.spec) {
        (Some(t), None) => WExpression::parse_terms(t),
        (None, Some(path)) => read_json(path),
        _ => Err(Error::InvalidInput("exactly one of --terms or --spec is required".into())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("qmdetect").chain(args.iter().copied()))
    }

    #[test]
    fn certify_w_example() {
        let out = run_args(&["certify-w", "--terms", "1,0,3;1,1,1;-1,0,2;-1,1,2", "--mode", "all"]);
        assert_eq!(out.code, 0, "{}", out.stderr);
        let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(v["verdict"], "detects");
        let out = run_args(&["certify-w", "--terms", "1,0,1"]);
        assert_eq!(out.code, 1);
    }

    #[test]
    fn macmahon_csv() {
        let out = run_args(&["macmahon", "--a", "2", "--nmax", "10"]);
        assert_eq!(out.code, 0);
        assert!(out.stdout.lines().any(|l| l == "5,9"));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_args(&["gen-h", "--k", "4", "--l", "3", "--M", "1", "--nmax", "0"]).code, 2);
        assert_eq!(run_args(&["gen-h", "--k", "4", "--l", "3", "--M", "1", "--m", "1", "--nmax", "0"]).code, 2);
        assert_eq!(run_args(&["frobnicate"]).code, 2);
        assert_eq!(run_args(&["certify-w", "--terms", "1,0", "--mode", "all"]).code, 2);
        assert_eq!(run_args(&["--help"]).code, 0);
    }

    #[test]
    fn characters_listing() {
        let out = run_args(&["characters", "--modulus", "5"]);
        let rows: Vec<CharacterRow> = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(rows.len(), 4);
        let chars: Vec<DirichletCharacter> = serde_json::from_str(&out.stdout).unwrap();
        assert_eq!(chars, enumerate_characters(5));
    }
}
