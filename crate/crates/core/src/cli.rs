//! Command-line surface: argument parsing, the five subcommands, and the
//! JSON/CSV records they emit.
//!
//! Exit codes: 0 success, 1 a check failed, 2 parameter error, 3 formula
//! inapplicable (positive-dimensional Quot scheme), 4 internal verification
//! failure.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Pow, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::holla::{brute_force_degree, holla_degree, QuotParams, DEFAULT_BRUTE_FORCE_CAP};
use crate::numeric::{rel_err, ComplexSum};
use crate::poly::{all_ones, cyclotomic, ext_gcd, x_pow_minus_one, PolyQ};
use crate::polyp::{expected_support, fit_bound_polynomial, FIRST_NODE};
use crate::ring::{nontrivial_root_sum, nontrivial_roots_ring, trace_nontrivial};
use crate::versch::{self, bound_report, g2_comparison, odd_primes_up_to, VerschParams, DEFAULT_TOL};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_PARAM: i32 = 2;

/// Column order of `table` output.
pub const TABLE_COLUMNS: [&str; 7] = ["g", "p", "bound_exact", "quotF_degree", "trig_rel_err", "g2_exact", "gap"];

const DECIMAL_DIGITS: usize = 20;

#[derive(Debug, Parser)]
#[command(name = "quotdeg", version, about = "Exact Quot-scheme degrees and Verschiebung degree bounds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Degree of the zero-dimensional Quot scheme of maximal rank-r subbundles.
    Holla(HollaArgs),
    /// Bound on the generic degree of the rank-2 Verschiebung for (g, p).
    Versch(VerschArgs),
    /// The bound as an exact polynomial in p.
    Poly(PolyArgs),
    /// Run the invariant suites over a (g, p) grid.
    Verify(VerifyArgs),
    /// Tabulate bounds over (g, p) ranges as CSV or JSON.
    Table(TableArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output format.
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub format: ReportFormat,
    /// Write the report to this file instead of standard output.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct HollaArgs {
    #[arg(long)]
    pub n: i64,
    #[arg(long, allow_hyphen_values = true)]
    pub d: i64,
    #[arg(long)]
    pub r: i64,
    #[arg(long)]
    pub g: i64,
    /// Cross-check against direct complex summation.
    #[arg(long)]
    pub oracle: bool,
    /// Largest n accepted by the complex oracle.
    #[arg(long, default_value_t = DEFAULT_BRUTE_FORCE_CAP)]
    pub cap: i64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerschArgs {
    #[arg(long)]
    pub g: u64,
    #[arg(long)]
    pub p: u64,
    /// Relative tolerance for the sine-form cross-check.
    #[arg(long, env = "QUOTDEG_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct PolyArgs {
    #[arg(long)]
    pub g: u64,
    /// First interpolation node m.
    #[arg(long, default_value_t = FIRST_NODE)]
    pub first_node: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, default_value_t = 4)]
    pub g_max: u64,
    #[arg(long, default_value_t = 13)]
    pub p_max: u64,
    #[arg(long, env = "QUOTDEG_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Genus values: `N`, `LO-HI`, `LO..HI`, `LO..=HI`, or a comma list.
    #[arg(long, value_parser = parse_range)]
    pub g_range: ::std::vec::Vec<u64>,
    /// Characteristics, same syntax; non-primes and p = 2 are skipped.
    #[arg(long, value_parser = parse_range)]
    pub p_range: ::std::vec::Vec<u64>,
    #[arg(long, value_enum, default_value_t = TableFormat::Csv)]
    pub format: TableFormat,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads; defaults to the number of processors.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long, env = "QUOTDEG_TOL", default_value_t = DEFAULT_TOL)]
    pub tol: f64,
}

/// Parses an inclusive integer range or a comma-separated list.
pub fn parse_range(s: &str) -> std::result::Result<Vec<u64>, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("bad integer {t:?}: {e}"));
    let s = s.trim();
    if s.contains(',') {
        return s.split(',').map(num).collect();
    }
    let bounds = s
        .split_once("..=")
        .or_else(|| s.split_once(".."))
        .or_else(|| s.split_once('-'));
    match bounds {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi)?);
            Ok((lo..=hi).collect())
        }
        None => Ok(vec![num(s)?]),
    }
}

/// Exact rational rendered as strings.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExactValue {
    pub exact: String,
    pub num: String,
    pub den: String,
    /// Decimal expansion, truncated after 20 digits when not an integer.
    pub decimal: String,
}

impl From<&BigRational> for ExactValue {
    fn from(q: &BigRational) -> Self {
        ExactValue {
            exact: q.to_string(),
            num: q.numer().to_string(),
            den: q.denom().to_string(),
            decimal: decimal_string(q, DECIMAL_DIGITS),
        }
    }
}

impl From<&BigInt> for ExactValue {
    fn from(n: &BigInt) -> Self {
        Self::from(&BigRational::from_integer(n.clone()))
    }
}

impl From<i64> for ExactValue {
    fn from(n: i64) -> Self {
        Self::from(&BigInt::from(n))
    }
}

pub fn decimal_string(q: &BigRational, digits: usize) -> String {
    if q.is_integer() {
        return q.to_integer().to_string();
    }
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = (q.numer().abs() * &scale) / q.denom();
    let (int, frac) = scaled.div_rem(&scale);
    let sign = if q.is_negative() { "-" } else { "" };
    format!("{sign}{int}.{frac:0>digits$}")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum ResultValue {
    Exact(ExactValue),
    Float(f64),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status: if ok { Status::Pass } else { Status::Fail },
            detail: detail.into(),
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// One row of `table` output. Field names are the public column names.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TableRow {
    pub g: u64,
    pub p: u64,
    pub bound_exact: String,
    #[serde(rename = "quotF_degree")]
    pub quot_f_degree: String,
    pub trig_rel_err: f64,
    pub g2_exact: String,
    pub gap: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OutputRecord {
    pub command: String,
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub results: Option<BTreeMap<String, ResultValue>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rows: Option<Vec<TableRow>>,
    pub checks: Vec<Check>,
}

impl OutputRecord {
    fn new(command: &str) -> Self {
        OutputRecord {
            command: command.to_string(),
            params: BTreeMap::new(),
            results: Some(BTreeMap::new()),
            rows: None,
            checks: Vec::new(),
        }
    }

    fn param(&mut self, name: &str, value: impl ToString) {
        self.params.insert(name.to_string(), value.to_string());
    }

    fn exact(&mut self, name: &str, value: impl Into<ExactValue>) {
        self.results
            .get_or_insert_with(BTreeMap::new)
            .insert(name.to_string(), ResultValue::Exact(value.into()));
    }

    fn rel_err(&mut self, name: &str, value: f64) {
        debug_assert!(name.ends_with("_rel_err"));
        self.results
            .get_or_insert_with(BTreeMap::new)
            .insert(name.to_string(), ResultValue::Float(value));
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }
}

/// Human-readable lines collected while a command runs.
#[derive(Debug, Default)]
pub struct Text(Vec<String>);

impl Text {
    pub fn lines(&self) -> &[String] {
        &self.0
    }

    fn line(&mut self, s: impl Into<String>) {
        self.0.push(s.into());
    }

    fn checks(&mut self, checks: &[Check]) {
        let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
        for c in checks {
            let status = if c.passed() { "PASS" } else { "FAIL" };
            self.line(format!("  [{status}] {:<width$}  {}", c.name, c.detail));
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run_from_args<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli, out, err),
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARAM } else { EXIT_OK };
            let rendered = e.render().to_string();
            let _ = if e.use_stderr() { err.write_all(rendered.as_bytes()) } else { out.write_all(rendered.as_bytes()) };
            code
        }
    }
}

pub fn run(cli: &Cli, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let mut text = Text::default();
    let outcome = match &cli.command {
        Command::Holla(a) => cmd_holla(a, &mut text).map(|r| (r, &a.output)),
        Command::Versch(a) => cmd_versch(a, &mut text).map(|r| (r, &a.output)),
        Command::Poly(a) => cmd_poly(a, &mut text).map(|r| (r, &a.output)),
        Command::Verify(a) => cmd_verify(a, &mut text).map(|r| (r, &a.output)),
        Command::Table(a) => return finish_table(a, out, err),
    };
    match outcome {
        Ok((record, output)) => {
            if let Err(e) = emit_report(&record, &text, output, out) {
                let _ = writeln!(err, "error: {e}");
                return EXIT_PARAM;
            }
            if record.all_passed() {
                EXIT_OK
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            for line in &text.0 {
                let _ = writeln!(out, "{line}");
            }
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn emit_report(record: &OutputRecord, text: &Text, output: &OutputArgs, out: &mut dyn Write) -> io::Result<()> {
    let body = match output.format {
        ReportFormat::Json => serde_json::to_string_pretty(record).map_err(io::Error::other)? + "\n",
        ReportFormat::Text => text.0.iter().map(|l| format!("{l}\n")).collect(),
    };
    match &output.out {
        Some(path) => std::fs::write(path, body)
            .map_err(|e| io::Error::new(e.kind(), format!("cannot write {}: {e}", path.display()))),
        None => out.write_all(body.as_bytes()),
    }
}

pub fn cmd_holla(args: &HollaArgs, text: &mut Text) -> Result<OutputRecord> {
    let params = QuotParams::derive(args.n, args.d, args.r, args.g)?;
    let mut rec = OutputRecord::new("holla");
    for (k, v) in [("n", args.n), ("d", args.d), ("r", args.r), ("g", args.g)] {
        rec.param(k, v);
    }
    for (k, v) in [
        ("a", params.a()),
        ("b", params.b()),
        ("eps", params.eps()),
        ("e_max", params.e_max()),
        ("s_r", params.s_r()),
        ("quot_dim", params.quot_dim()),
    ] {
        rec.exact(k, v);
    }
    text.line(format!("Quot scheme for n={}, d={}, r={}, g={}", args.n, args.d, args.r, args.g));
    text.line(format!(
        "  a={}  b={}  eps={}  e_max={}  s_r={}  quot_dim={}",
        params.a(),
        params.b(),
        params.eps(),
        params.e_max(),
        params.s_r(),
        params.quot_dim()
    ));

    let degree = holla_degree(&params)?;
    rec.exact("degree", &degree);
    text.line(format!("  degree = {degree}"));
    rec.checks.push(Check::new("degree_positive", degree.is_positive(), degree.to_string()));

    if args.oracle {
        rec.param("cap", args.cap);
        let approx = brute_force_degree(&params, args.cap)?;
        let err = rel_err(approx, degree.to_f64().unwrap_or(f64::NAN));
        rec.rel_err("oracle_rel_err", err);
        text.line(format!("  complex oracle = {approx:.12e}  (rel err {err:.3e})"));
        rec.checks.push(Check::new("brute_force_oracle", err < 1e-6, format!("rel err {err:.3e} < 1e-6")));
    }
    text.checks(&rec.checks);
    Ok(rec)
}

pub fn cmd_versch(args: &VerschArgs, text: &mut Text) -> Result<OutputRecord> {
    let v = VerschParams::new(args.g, args.p)?;
    let report = bound_report(&v, args.tol)?;
    let mut rec = OutputRecord::new("versch");
    rec.param("g", args.g);
    rec.param("p", args.p);
    rec.param("tol", format!("{:e}", args.tol));

    rec.exact("bound_exact", &report.bound_exact);
    rec.exact("quotF_degree_bound", &report.quot_f_degree_bound);
    rec.rel_err("trig_rel_err", report.rel_err);
    rec.exact("deg_pushforward", report.lemma4.deg_pushforward);
    rec.exact("deg_hom", report.lemma4.deg_hom);
    rec.exact("euler_diff", report.lemma4.euler_diff);

    text.line(format!("Verschiebung bound for g={}, p={}", args.g, args.p));
    text.line(format!("  deg(Ver^2) <= {}", report.bound_exact));
    text.line(format!("  deg(Q^triv,F) <= {}  (= p^g * bound = Quot-scheme degree)", report.quot_f_degree_bound));
    text.line(format!("  sine form = {:.15e}  (rel err {:.3e})", report.trig_value, report.rel_err));
    text.line(format!(
        "  Riemann-Roch: deg F_*E = {}, deg Hom = {}, chi difference = {}",
        report.lemma4.deg_pushforward, report.lemma4.deg_hom, report.lemma4.euler_diff
    ));

    rec.checks.push(Check::new("cross_path_quot_degree", true, "p^g * bound equals the Quot-scheme degree"));
    rec.checks.push(Check::new(
        "trig_cross_check",
        report.trig_within_tol(),
        format!("rel err {:.3e} < tol {:e}", report.rel_err, args.tol),
    ));
    rec.checks.push(Check::new("euler_diff_zero", report.lemma4.euler_diff == 0, report.lemma4.euler_diff.to_string()));
    rec.checks.push(Check::new(
        "bound_integrality",
        report.bound_is_positive_integer(),
        format!("bound {} is a positive integer", report.bound_exact),
    ));

    if let Some(c) = &report.g2_comparison {
        rec.exact("g2_exact", &c.exact);
        rec.exact("g2_bound", &c.bound);
        rec.exact("g2_gap", &c.gap);
        text.line(format!("  genus 2: exact degree {}, bound {}, gap {}", c.exact, c.bound, c.gap));
        let p = BigInt::from(args.p);
        let law = BigRational::from_integer(&p * &p * &p - &p);
        rec.checks.push(Check::new("g2_gap_law", c.gap == law, format!("gap {} = p^3 - p", c.gap)));
    }
    text.checks(&rec.checks);
    Ok(rec)
}

pub fn cmd_poly(args: &PolyArgs, text: &mut Text) -> Result<OutputRecord> {
    let fit = fit_bound_polynomial(args.g, args.first_node)?;
    let mut rec = OutputRecord::new("poly");
    rec.param("g", args.g);
    rec.param("first_node", args.first_node);
    rec.exact("degree", fit.poly.degree().unwrap_or(0) as i64);
    for k in fit.poly.support() {
        rec.exact(&format!("p^{k}"), &fit.poly.coeff(k));
    }
    text.line(format!("Bound for g={} as a polynomial in p:", args.g));
    text.line(format!("  {}", fit.poly));
    text.line(format!("  interpolation nodes m = {:?}", fit.nodes));
    for c in &fit.checks {
        rec.checks.push(Check::new(
            format!("node_m={}", c.m),
            c.ok(),
            format!("B({}, {}) = {}, interpolant = {}", args.g, c.m, c.expected, c.interpolated),
        ));
    }
    rec.checks.push(Check::new(
        "support",
        fit.poly.support().iter().all(|k| expected_support(args.g).contains(k)),
        format!("{:?} within {:?}", fit.poly.support(), expected_support(args.g)),
    ));
    text.checks(&rec.checks);
    Ok(rec)
}

/// Outcome of one invariant suite: number of cases and the failures seen.
struct Suite {
    name: &'static str,
    cases: usize,
    failures: Vec<String>,
}

impl Suite {
    fn new(name: &'static str) -> Self {
        Suite { name, cases: 0, failures: Vec::new() }
    }

    fn case(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    fn result<T>(&mut self, r: Result<T>, ctx: impl FnOnce() -> String) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                self.cases += 1;
                self.failures.push(format!("{}: {e}", ctx()));
                None
            }
        }
    }

    fn into_check(self) -> Check {
        let detail = if self.failures.is_empty() {
            format!("{} cases", self.cases)
        } else {
            let shown: Vec<&str> = self.failures.iter().take(3).map(String::as_str).collect();
            format!("{}/{} failed; {}", self.failures.len(), self.cases, shown.join("; "))
        };
        Check::new(self.name, self.failures.is_empty(), detail)
    }
}

fn complex_root(n: u64, k: u64) -> Complex64 {
    Complex64::from_polar(1.0, std::f64::consts::TAU * (k % n) as f64 / n as f64)
}

/// Runs every invariant suite over genus `2..=g_max` and odd primes up to
/// `p_max`.
pub fn verification_checks(g_max: u64, p_max: u64, tol: f64) -> Vec<Check> {
    let n_max = (2 * p_max).max(2);
    let primes: Vec<u64> = odd_primes_up_to(p_max).collect();
    let grid: Vec<VerschParams> = (2..=g_max)
        .flat_map(|g| primes.iter().filter_map(move |&p| VerschParams::new(g, p).ok()))
        .collect();
    let mut checks = Vec::new();

    let mut s = Suite::new("cyclotomic_product");
    for n in 1..=n_max {
        let divisors: Vec<u64> = (1..=n).filter(|d| n % d == 0).collect();
        let product = divisors.iter().fold(PolyQ::one(), |acc, &d| &acc * &*cyclotomic(d));
        let phi = cyclotomic(n);
        let totient = (1..=n).filter(|k| k.gcd(&n) == 1).count();
        s.case(
            product == x_pow_minus_one(n) && phi.degree() == Some(totient) && phi.has_integer_coeffs(),
            || format!("n={n}"),
        );
    }
    checks.push(s.into_check());

    let mut s = Suite::new("all_ones_identity");
    for n in 2..=n_max {
        let lhs = &all_ones(n) * &PolyQ::from_ints(&[-1, 1]);
        s.case(lhs == x_pow_minus_one(n), || format!("n={n}"));
    }
    checks.push(s.into_check());

    let mut s = Suite::new("bezout_identity");
    for n in 2..=n_max {
        let phi = cyclotomic(n);
        let psi = all_ones(n);
        for (a, b) in [(&*phi, &PolyQ::from_ints(&[-1, 1])), (&psi, &PolyQ::from_ints(&[1, 0, 1]))] {
            if let Some((g, u, v)) = s.result(ext_gcd(a, b), || format!("n={n}")) {
                s.case(&(&u * a) + &(&v * b) == g && g.is_monic(), || format!("n={n}"));
            }
        }
    }
    checks.push(s.into_check());

    let mut s = Suite::new("trace_formula");
    for n in 2..=n_max {
        let ring = nontrivial_roots_ring(n);
        for k in 0..3 * n {
            let Some(exact) = s.result(trace_nontrivial(n, &ring.x_pow(k as usize)), || format!("n={n}, k={k}")) else {
                continue;
            };
            let mut acc = ComplexSum::default();
            (1..n).for_each(|t| acc.add(complex_root(n, t * k)));
            let approx = acc.value();
            let exact = exact.to_f64().unwrap();
            s.case((approx.re - exact).abs() < 1e-9 && approx.im.abs() < 1e-9, || {
                format!("n={n}, k={k}: exact {exact}, complex {approx}")
            });
        }
    }
    checks.push(s.into_check());

    let mut s = Suite::new("root_sum_vs_complex");
    for n in 2..=n_max {
        for g in 2..=g_max.max(2) {
            let Some(exact) = s.result(nontrivial_root_sum(n, g), || format!("n={n}, g={g}")) else {
                continue;
            };
            let mut acc = ComplexSum::default();
            for t in 1..n {
                let z = complex_root(n, t);
                acc.add(complex_root(n, t * (g - 1)) / (z - 1.0).powi(2 * g as i32 - 2));
            }
            let err = rel_err(acc.value().re, exact.to_f64().unwrap());
            s.case(err < tol, || format!("n={n}, g={g}: rel err {err:.3e}"));
        }
    }
    checks.push(s.into_check());

    let mut s = Suite::new("holla_vs_brute_force");
    let mut classical = Suite::new("classical_count_2^g");
    for n in 1..=n_max.min(10) as i64 {
        for r in 1..=n.min(2) {
            for g in 2..=g_max.max(2) as i64 {
                for d in 0..n {
                    let Ok(q) = QuotParams::derive(n, d, r, g) else { continue };
                    if !q.is_zero_dimensional() {
                        continue;
                    }
                    let ctx = || format!("(n,d,r,g)=({n},{d},{r},{g})");
                    let Some(exact) = s.result(holla_degree(&q), ctx) else { continue };
                    if let Some(approx) = s.result(brute_force_degree(&q, DEFAULT_BRUTE_FORCE_CAP), ctx) {
                        let err = rel_err(approx, exact.to_f64().unwrap());
                        s.case(err < 1e-6 && exact.is_positive(), || format!("{}: rel err {err:.3e}", ctx()));
                    }
                    if n == 2 && r == 1 {
                        let want = BigInt::from(2).pow(g as u32);
                        classical.case(exact == want, || format!("{}: {exact} != 2^{g}", ctx()));
                    }
                }
            }
        }
    }
    checks.push(s.into_check());
    checks.push(classical.into_check());

    let reports: Vec<(VerschParams, Result<versch::BoundReport>)> =
        grid.par_iter().map(|v| (*v, bound_report(v, tol))).collect();
    let mut cross = Suite::new("cross_path_quot_degree");
    let mut trig = Suite::new("trig_cross_check");
    let mut lemma = Suite::new("riemann_roch_identities");
    let mut integral = Suite::new("bound_integrality");
    for (v, r) in reports {
        let ctx = || format!("g={}, p={}", v.g(), v.p());
        let Some(rep) = cross.result(r, ctx) else { continue };
        cross.case(true, String::new);
        trig.case(rep.trig_within_tol(), || format!("{}: rel err {:.3e}", ctx(), rep.rel_err));
        lemma.case(rep.lemma4.euler_diff == 0, ctx);
        integral.case(rep.bound_is_positive_integer(), || format!("{}: bound {}", ctx(), rep.bound_exact));
    }
    checks.extend([cross, trig, lemma, integral].map(Suite::into_check));

    let mut s = Suite::new("g2_gap_law");
    for &p in &primes {
        match g2_comparison(p) {
            Ok(c) => s.case(c.gap > BigRational::zero(), || format!("p={p}: gap {}", c.gap)),
            Err(e) => s.case(false, || format!("p={p}: {e}")),
        }
    }
    checks.push(s.into_check());

    let mut s = Suite::new("bound_polynomial");
    for g in 2..=g_max {
        let Some(fit) = s.result(fit_bound_polynomial(g, FIRST_NODE), || format!("g={g}")) else { continue };
        for v in grid.iter().filter(|v| v.g() == g) {
            if let Some(b) = s.result(versch::bound_exact(v), || format!("g={g}, p={}", v.p())) {
                s.case(fit.poly.eval(v.p() as i64) == b, || format!("g={g}, p={}", v.p()));
            }
        }
        let closed = match g {
            2 => Some(PolyQ::from_coeffs(vec![
                BigRational::zero(),
                BigRational::new((-1).into(), 3.into()),
                BigRational::zero(),
                BigRational::new(4.into(), 3.into()),
            ])),
            3 => Some(PolyQ::from_coeffs(
                [0, 0, -11, 0, 40, 0, 16].iter().map(|&c| BigRational::new(c.into(), 45.into())).collect(),
            )),
            _ => None,
        };
        if let Some(want) = closed {
            s.case(fit.poly.poly() == &want, || format!("g={g}: closed form mismatch, got {}", fit.poly));
        }
    }
    checks.push(s.into_check());
    checks
}

pub fn cmd_verify(args: &VerifyArgs, text: &mut Text) -> Result<OutputRecord> {
    if args.g_max < 2 || args.p_max < 3 {
        return Err(Error::InvalidParams(format!(
            "verify needs --g-max >= 2 and --p-max >= 3, got {} and {}",
            args.g_max, args.p_max
        )));
    }
    if args.tol.is_nan() || args.tol <= 0.0 {
        return Err(Error::InvalidParams(format!("tolerance must be positive, got {}", args.tol)));
    }
    let mut rec = OutputRecord::new("verify");
    rec.results = None;
    rec.param("g_max", args.g_max);
    rec.param("p_max", args.p_max);
    rec.param("tol", format!("{:e}", args.tol));
    rec.checks = verification_checks(args.g_max, args.p_max, args.tol);
    let failed = rec.checks.iter().filter(|c| !c.passed()).count();
    text.line(format!("Invariant suites for g <= {}, p <= {}, tol {:e}", args.g_max, args.p_max, args.tol));
    text.checks(&rec.checks);
    text.line(format!("{} suites, {} failed", rec.checks.len(), failed));
    Ok(rec)
}

/// Builds table rows for every valid `(g, p)` pair, in `(g, p)` order.
/// Skipped pairs are described in the returned notes.
pub fn table_rows(gs: &[u64], ps: &[u64], tol: f64) -> Result<(Vec<TableRow>, Vec<Check>, Vec<String>)> {
    let mut pairs = Vec::new();
    let mut notes = Vec::new();
    for &g in gs {
        for &p in ps {
            match VerschParams::new(g, p) {
                Ok(v) => pairs.push(v),
                Err(e) => notes.push(format!("skipping g={g}, p={p}: {e}")),
            }
        }
    }
    let reports = pairs.par_iter().map(|v| bound_report(v, tol)).collect::<Result<Vec<_>>>()?;
    let mut rows = Vec::with_capacity(reports.len());
    let mut checks = Vec::new();
    for rep in reports {
        let (g, p) = (rep.params.g(), rep.params.p());
        checks.push(Check::new(
            format!("trig_cross_check g={g} p={p}"),
            rep.trig_within_tol(),
            format!("rel err {:.3e}", rep.rel_err),
        ));
        checks.push(Check::new(
            format!("bound_integrality g={g} p={p}"),
            rep.bound_is_positive_integer(),
            rep.bound_exact.to_string(),
        ));
        let (g2_exact, gap) = match &rep.g2_comparison {
            Some(c) => (c.exact.to_string(), c.gap.to_string()),
            None => (String::new(), String::new()),
        };
        rows.push(TableRow {
            g,
            p,
            bound_exact: rep.bound_exact.to_string(),
            quot_f_degree: rep.quot_f_degree_bound.to_string(),
            trig_rel_err: rep.rel_err,
            g2_exact,
            gap,
        });
    }
    Ok((rows, checks, notes))
}

pub fn write_csv(rows: &[TableRow], w: impl Write) -> io::Result<()> {
    let mut wtr = csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(w);
    wtr.write_record(TABLE_COLUMNS).map_err(io::Error::other)?;
    for row in rows {
        wtr.serialize(row).map_err(io::Error::other)?;
    }
    wtr.flush()
}

fn table_record(args: &TableArgs, rows: Vec<TableRow>, checks: Vec<Check>) -> OutputRecord {
    let join = |v: &[u64]| v.iter().map(u64::to_string).collect::<Vec<_>>().join(",");
    let mut rec = OutputRecord::new("table");
    rec.results = None;
    rec.param("g_range", join(&args.g_range));
    rec.param("p_range", join(&args.p_range));
    rec.param("tol", format!("{:e}", args.tol));
    rec.rows = Some(rows);
    rec.checks = checks;
    rec
}

fn write_table(args: &TableArgs, rec: &OutputRecord, w: &mut dyn Write) -> io::Result<()> {
    match args.format {
        TableFormat::Csv => write_csv(rec.rows.as_deref().unwrap_or_default(), w),
        TableFormat::Json => {
            serde_json::to_writer_pretty(&mut *w, rec).map_err(io::Error::other)?;
            writeln!(w)
        }
    }
}

fn finish_table(args: &TableArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(args.jobs.unwrap_or(0)).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(err, "error: cannot start worker pool: {e}");
            return EXIT_PARAM;
        }
    };
    let (rows, checks, notes) = match pool.install(|| table_rows(&args.g_range, &args.p_range, args.tol)) {
        Ok(v) => v,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return e.exit_code();
        }
    };
    for note in &notes {
        let _ = writeln!(err, "note: {note}");
    }
    let rec = table_record(args, rows, checks);
    let written = match &args.out {
        Some(path) => write_table_file(args, &rec, path),
        None => write_table(args, &rec, out),
    };
    if let Err(e) = written {
        let target = args.out.as_ref().map_or("stdout".into(), |p| p.display().to_string());
        let _ = writeln!(err, "error: cannot write table to {target}: {e}");
        return EXIT_PARAM;
    }
    if rec.all_passed() {
        EXIT_OK
    } else {
        for c in rec.checks.iter().filter(|c| !c.passed()) {
            let _ = writeln!(err, "check failed: {} ({})", c.name, c.detail);
        }
        EXIT_CHECK_FAILED
    }
}

fn write_table_file(args: &TableArgs, rec: &OutputRecord, path: &Path) -> io::Result<()> {
    let mut f = io::BufWriter::new(File::create(path)?);
    write_table(args, rec, &mut f)?;
    f.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        assert_eq!(parse_range("3").unwrap(), [3]);
        assert_eq!(parse_range("2-4").unwrap(), [2, 3, 4]);
        assert_eq!(parse_range("2..4").unwrap(), [2, 3, 4]);
        assert_eq!(parse_range("2..=4").unwrap(), [2, 3, 4]);
        assert_eq!(parse_range("3,5, 7").unwrap(), [3, 5, 7]);
        assert!(parse_range("5-3").unwrap().is_empty());
        assert!(parse_range("x").is_err());
    }

    #[test]
    fn decimals() {
        let q = BigRational::new((-4).into(), 3.into());
        assert_eq!(decimal_string(&q, 5), "-1.33333");
        assert_eq!(decimal_string(&BigRational::new(1.into(), 8.into()), 4), "0.1250");
        assert_eq!(decimal_string(&BigRational::from_integer(35.into()), 4), "35");
    }

    #[test]
    fn exact_value_fields() {
        let v = ExactValue::from(&BigRational::new(8.into(), 9.into()));
        assert_eq!((v.exact.as_str(), v.num.as_str(), v.den.as_str()), ("8/9", "8", "9"));
    }

    #[test]
    fn minimal_verify_grid_passes() {
        let checks = verification_checks(2, 3, DEFAULT_TOL);
        assert!(checks.iter().all(Check::passed), "{checks:?}");
    }
}
