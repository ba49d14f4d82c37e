//! Command-line front end. [`run`] parses arguments, writes data to `out`
//! and diagnostics to `err`, and returns the process exit code.

use std::io::Write;
use std::ops::RangeInclusive;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::edge::{self, AngleSlice};
use crate::error::Error;
use crate::metric::{self, MinorSpec, SymMatrix4};
use crate::simplex::{classify_realization, normalize_params, RealizationClass, SimplexParams};
use crate::solver::{self, Method, SolveReport, SolveStatus, SolverConfig};

pub const EXIT_SOLVED: i32 = 0;
pub const EXIT_NO_PROPER: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_DIVERGED: i32 = 3;
pub const EXIT_CHECK_FAILURE: i32 = 4;

/// Relative agreement required of the two sides of the minor identity.
pub const CHECK_REL_TOL: f64 = 1e-9;
/// Random matrices with `|det|` below this are skipped by `check`.
pub const CHECK_MIN_DET: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "simplex-edge", version, about = "Dihedral angles of hyperbolic F12 simplices")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Realization class, b_max and the realizability inequality.
    Classify {
        a: u32,
        b: u32,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve the edge conditions for one parameter pair.
    Solve {
        a: u32,
        b: u32,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Solve every pair b > a in the given ranges.
    Table {
        /// Range of a, e.g. `2..6` (inclusive) or `4`.
        #[arg(long)]
        a: IntRange,
        /// Range of b; defaults to `--b-upto bmax`.
        #[arg(long, conflicts_with = "b_upto")]
        b: Option<IntRange>,
        /// Upper end for b: `bmax` or a number.
        #[arg(long)]
        b_upto: Option<BUpto>,
        #[command(flatten)]
        solver: SolverArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Export f1, f2, d1, d2 on a grid over the search box, as CSV.
    Grid {
        a: u32,
        b: u32,
        #[arg(long, default_value_t = 100)]
        resolution: usize,
        #[arg(long)]
        degrees: bool,
    },
    /// Check the complementary-minor identity on seeded random matrices.
    Check {
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// Use the identity matrix for every trial.
        #[arg(long)]
        identity_only: bool,
        /// Replace the first N trials by singular matrices.
        #[arg(long, default_value_t = 0)]
        inject_singular: usize,
    },
}

#[derive(Debug, Clone, Args)]
pub struct SolverArgs {
    #[arg(long, default_value_t = 1e-11)]
    pub tol: f64,
    #[arg(long, default_value_t = 1e-12)]
    pub angle_tol: f64,
    #[arg(long, default_value_t = 200_000)]
    pub max_iter: usize,
    #[arg(long)]
    pub k1: Option<f64>,
    #[arg(long)]
    pub k2: Option<f64>,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    pub method: MethodArg,
    /// Grid resolution of the oracle.
    #[arg(long, default_value_t = 200)]
    pub resolution: usize,
}

impl SolverArgs {
    pub fn config(&self) -> SolverConfig {
        SolverConfig {
            tolerance: self.tol,
            angle_tolerance: self.angle_tol,
            max_iterations: self.max_iter,
            k1: self.k1,
            k2: self.k2,
            method: self.method.into(),
            oracle_resolution: self.resolution,
            ..SolverConfig::default()
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::JsonLines)]
    pub format: Format,
    /// Print angles in degrees.
    #[arg(long)]
    pub degrees: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Fixed,
    Newton,
    Oracle,
    Auto,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Fixed => Method::FixedPoint,
            MethodArg::Newton => Method::Newton,
            MethodArg::Oracle => Method::GridOracle,
            MethodArg::Auto => Method::Auto,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    JsonLines,
}

/// Inclusive integer range written `lo..hi` or as a single value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntRange(pub RangeInclusive<u32>);

impl FromStr for IntRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad bound {t:?}: {e}"));
        let range = match s.split_once("..") {
            Some((lo, hi)) => {
                let hi = hi.strip_prefix('=').unwrap_or(hi);
                parse(lo)?..=parse(hi)?
            }
            None => {
                let v = parse(s)?;
                v..=v
            }
        };
        if range.is_empty() {
            return Err(format!("empty range {s:?}"));
        }
        Ok(IntRange(range))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BUpto {
    Bmax,
    Value(u32),
}

impl FromStr for BUpto {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s.eq_ignore_ascii_case("bmax") {
            Ok(BUpto::Bmax)
        } else {
            s.parse().map(BUpto::Value).map_err(|e| format!("expected `bmax` or a number: {e}"))
        }
    }
}

/// One output row. Every field is always emitted, empty when not
/// applicable, so CSV headers and JSON keys keep a fixed order.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct OutputRecord {
    pub a: u32,
    pub b: u32,
    pub swapped: bool,
    pub class: Option<RealizationClass>,
    pub status: Option<SolveStatus>,
    pub b_max: Option<u32>,
    pub inequality_lhs: Option<f64>,
    pub inequality_rhs: Option<f64>,
    pub alpha1: Option<f64>,
    pub alpha2: Option<f64>,
    pub beta1: Option<f64>,
    pub beta2: Option<f64>,
    pub residual_f1: Option<f64>,
    pub residual_f2: Option<f64>,
    pub det_b: Option<f64>,
    pub signature: Option<String>,
    pub vertex_classes: Option<[String; 4]>,
    pub d01: Option<f64>,
    pub d02: Option<f64>,
    pub d03: Option<f64>,
    pub d13: Option<f64>,
    pub iterations: Option<usize>,
    pub contraction_norm: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Field {
    Int(u64),
    Float(f64),
    Str(String),
    Bool(bool),
    Null,
}

impl Field {
    fn float(x: Option<f64>) -> Self {
        x.map_or(Field::Null, Field::Float)
    }

    fn csv(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Float(x) => format_float(*x).unwrap_or_default(),
            Field::Str(s) => s.clone(),
            Field::Bool(b) => b.to_string(),
            Field::Null => String::new(),
        }
    }

    fn json(&self) -> String {
        match self {
            Field::Int(v) => v.to_string(),
            Field::Float(x) => format_float(*x).unwrap_or_else(|| "null".into()),
            Field::Str(s) => serde_json::to_string(s).expect("string serialization"),
            Field::Bool(b) => b.to_string(),
            Field::Null => "null".into(),
        }
    }
}

/// Plain decimal with 17 significant digits, enough to round-trip any
/// `f64`. Non-finite values have no representation.
pub fn format_float(x: f64) -> Option<String> {
    if !x.is_finite() {
        return None;
    }
    if x == 0.0 {
        return Some("0".into());
    }
    let exp = x.abs().log10().floor() as i32;
    let decimals = (16 - exp).max(0) as usize;
    Some(format!("{x:.decimals$}"))
}

impl OutputRecord {
    fn for_params(p: &SimplexParams) -> Self {
        Self {
            a: p.a(),
            b: p.b(),
            swapped: p.swapped(),
            ..Self::default()
        }
    }

    pub fn fields(&self) -> Vec<(&'static str, Field)> {
        let vc = |i: usize| {
            self.vertex_classes
                .as_ref()
                .map_or(Field::Null, |v| Field::Str(v[i].clone()))
        };
        vec![
            ("a", Field::Int(self.a.into())),
            ("b", Field::Int(self.b.into())),
            ("swapped", Field::Bool(self.swapped)),
            ("class", self.class.map_or(Field::Null, |c| Field::Str(c.as_str().into()))),
            ("status", self.status.map_or(Field::Null, |s| Field::Str(s.as_str().into()))),
            ("b_max", self.b_max.map_or(Field::Null, |v| Field::Int(v.into()))),
            ("inequality_lhs", Field::float(self.inequality_lhs)),
            ("inequality_rhs", Field::float(self.inequality_rhs)),
            ("alpha1", Field::float(self.alpha1)),
            ("alpha2", Field::float(self.alpha2)),
            ("beta1", Field::float(self.beta1)),
            ("beta2", Field::float(self.beta2)),
            ("residual_f1", Field::float(self.residual_f1)),
            ("residual_f2", Field::float(self.residual_f2)),
            ("det_b", Field::float(self.det_b)),
            ("signature", self.signature.clone().map_or(Field::Null, Field::Str)),
            ("vertex0", vc(0)),
            ("vertex1", vc(1)),
            ("vertex2", vc(2)),
            ("vertex3", vc(3)),
            ("d01", Field::float(self.d01)),
            ("d02", Field::float(self.d02)),
            ("d03", Field::float(self.d03)),
            ("d13", Field::float(self.d13)),
            ("iterations", self.iterations.map_or(Field::Null, |v| Field::Int(v as u64))),
            ("contraction_norm", Field::float(self.contraction_norm)),
        ]
    }

    pub fn header() -> Vec<&'static str> {
        Self::default().fields().into_iter().map(|(k, _)| k).collect()
    }

    pub fn to_json_line(&self) -> String {
        let body: Vec<String> = self
            .fields()
            .into_iter()
            .map(|(k, v)| format!("\"{k}\":{}", v.json()))
            .collect();
        format!("{{{}}}", body.join(","))
    }

    pub fn csv_row(&self) -> Vec<String> {
        self.fields().into_iter().map(|(_, v)| v.csv()).collect()
    }

    fn add_report(&mut self, r: &SolveReport, degrees: bool) {
        let conv = |x: f64| if degrees { x.to_degrees() } else { x };
        self.status = Some(r.status);
        if let Some(ang) = r.angles {
            self.alpha1 = Some(conv(ang.alpha1));
            self.alpha2 = Some(conv(ang.alpha2));
            self.beta1 = Some(conv(ang.beta1));
            self.beta2 = Some(conv(ang.beta2));
        }
        self.residual_f1 = Some(r.residual_f1).filter(|x| x.is_finite());
        self.residual_f2 = Some(r.residual_f2).filter(|x| x.is_finite());
        if let Some(v) = &r.verification {
            self.det_b = Some(v.det_b);
            self.signature = Some(v.signature.to_string());
            self.vertex_classes = Some(std::array::from_fn(|i| {
                v.vertex_classes[i].map_or_else(|| "Ambiguous".to_string(), |c| c.as_str().to_string())
            }));
            if let Some(e) = v.edge_lengths {
                self.d01 = Some(e.d01);
                self.d02 = Some(e.d02);
                self.d03 = Some(e.d03);
                self.d13 = Some(e.d13);
            }
        }
        self.iterations = Some(r.iterations);
        self.contraction_norm = Some(r.contraction_norm_estimate).filter(|x| x.is_finite());
    }
}

/// Classification record: class, b_max and the inequality sides.
pub fn classify_record(a: u32, b: u32) -> Result<OutputRecord, Error> {
    let p = normalize_params(a, b)?;
    let mut rec = OutputRecord::for_params(&p);
    let class = classify_realization(&p)?;
    rec.class = Some(class);
    if p.a() >= 2 {
        rec.b_max = edge::bmax(p.a())?.value();
    }
    if p.a() >= 2 && p.b() > p.a() {
        let ineq = edge::realizability_inequality(&p)?;
        rec.inequality_lhs = Some(ineq.lhs);
        rec.inequality_rhs = Some(ineq.rhs);
    }
    Ok(rec)
}

/// Full solve record. Parameter pairs outside the solver's classes give a
/// class-only record with no status.
pub fn solve_record(a: u32, b: u32, config: &SolverConfig, degrees: bool) -> Result<OutputRecord, Error> {
    let mut rec = classify_record(a, b)?;
    let p = normalize_params(a, b)?;
    match solver::solve(&p, config) {
        Ok(report) => rec.add_report(&report, degrees),
        Err(Error::InvalidClass(_)) => {}
        Err(e) => return Err(e),
    }
    Ok(rec)
}

pub fn exit_code(status: Option<SolveStatus>) -> i32 {
    match status {
        Some(SolveStatus::Solved) => EXIT_SOLVED,
        Some(SolveStatus::NoProperSolution | SolveStatus::BoundarySolution) => EXIT_NO_PROPER,
        Some(SolveStatus::Diverged) => EXIT_DIVERGED,
        None => EXIT_INVALID,
    }
}

/// Pass/fail tally of the minor-identity check.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CheckSummary {
    pub trials: usize,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckMode {
    Random,
    IdentityOnly,
}

fn random_symmetric(rng: &mut ChaCha8Rng) -> SymMatrix4 {
    let mut e = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in i..4 {
            e[i][j] = rng.gen_range(-2.0..=2.0);
        }
    }
    SymMatrix4::from_upper(e)
}

/// Rank-two symmetric matrix `uuᵀ + vvᵀ`.
fn singular_symmetric(rng: &mut ChaCha8Rng) -> SymMatrix4 {
    let u: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
    let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..=1.0));
    let mut e = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            e[i][j] = u[i] * u[j] + v[i] * v[j];
        }
    }
    SymMatrix4::from_upper(e)
}

fn random_minor(rng: &mut ChaCha8Rng) -> MinorSpec {
    let k = rng.gen_range(1..=3);
    let mut rows = sample(rng, 4, k).into_vec();
    let mut cols = sample(rng, 4, k).into_vec();
    rows.sort_unstable();
    cols.sort_unstable();
    MinorSpec::new(rows, cols).expect("sorted distinct indices")
}

pub fn identity_agrees(lhs: f64, rhs: f64, rel: f64) -> bool {
    (lhs - rhs).abs() <= rel * lhs.abs().max(rhs.abs()).max(1.0)
}

/// Runs the complementary-minor identity on `trials` seeded matrices.
/// Matrices with `|det| < 1e-6` are skipped and noted on `err`.
pub fn run_minor_check(
    trials: usize,
    seed: u64,
    mode: CheckMode,
    inject_singular: usize,
    err: &mut dyn Write,
) -> CheckSummary {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut s = CheckSummary {
        trials,
        ..CheckSummary::default()
    };
    for t in 0..trials {
        let m = if t < inject_singular {
            singular_symmetric(&mut rng)
        } else {
            match mode {
                CheckMode::IdentityOnly => SymMatrix4::identity(),
                CheckMode::Random => random_symmetric(&mut rng),
            }
        };
        let spec = random_minor(&mut rng);
        let det = metric::determinant(&m);
        if det.abs() < CHECK_MIN_DET {
            let e = Error::SingularMatrix {
                det: det.abs(),
                threshold: CHECK_MIN_DET,
            };
            let _ = writeln!(err, "trial {t}: skipped: {e}");
            s.skipped += 1;
            continue;
        }
        match metric::complementary_minor_identity(&m, &spec) {
            Ok((lhs, rhs)) if identity_agrees(lhs, rhs, CHECK_REL_TOL) => s.passed += 1,
            Ok((lhs, rhs)) => {
                let _ = writeln!(err, "trial {t}: {lhs} != {rhs} for {spec:?}");
                s.failed += 1;
            }
            Err(e @ Error::SingularMatrix { .. }) => {
                let _ = writeln!(err, "trial {t}: skipped: {e}");
                s.skipped += 1;
            }
            Err(e) => {
                let _ = writeln!(err, "trial {t}: {e}");
                s.failed += 1;
            }
        }
    }
    s
}

/// Parameter pairs of a table request, sorted by `(a, b)`.
pub fn table_pairs(a: &IntRange, b: Option<&IntRange>, upto: Option<BUpto>) -> Result<Vec<(u32, u32)>, Error> {
    let mut pairs = Vec::new();
    for a in a.0.clone() {
        if a < 2 {
            return Err(Error::InvalidParams(format!("table rows need a ≥ 2, got {a}")));
        }
        let bs: RangeInclusive<u32> = match (b, upto) {
            (Some(r), _) => r.0.clone(),
            (None, Some(BUpto::Value(hi))) => (a + 1)..=hi,
            (None, Some(BUpto::Bmax) | None) => match edge::bmax(a)?.value() {
                Some(hi) => (a + 1)..=hi,
                None => return Err(Error::InvalidParams(format!("b_max({a}) is unbounded"))),
            },
        };
        pairs.extend(bs.filter(|&b| b > a).map(|b| (a, b)));
    }
    if pairs.is_empty() {
        return Err(Error::InvalidParams("no pairs with b > a in the requested ranges".into()));
    }
    Ok(pairs)
}

fn write_records(records: &[OutputRecord], format: Format, out: &mut dyn Write) -> std::io::Result<()> {
    match format {
        Format::JsonLines => {
            for r in records {
                writeln!(out, "{}", r.to_json_line())?;
            }
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(out);
            w.write_record(OutputRecord::header())?;
            for r in records {
                w.write_record(r.csv_row())?;
            }
            w.flush()?;
        }
    }
    Ok(())
}

fn grid_rows(a: u32, b: u32, resolution: usize, degrees: bool, out: &mut dyn Write) -> Result<(), Error> {
    if resolution < 2 {
        return Err(Error::InvalidParams(format!("grid resolution must be at least 2, got {resolution}")));
    }
    let p = normalize_params(a, b)?;
    let domain = solver::domain_for(&p)?;
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| Error::InvalidParams(format!("write failed: {e}"));
    w.write_record(["alpha1", "beta1", "f1", "f2", "d1", "d2"]).map_err(io)?;
    let step = |lo: f64, hi: f64, k: usize| lo + (hi - lo) * k as f64 / (resolution - 1) as f64;
    for i in 0..resolution {
        let alpha1 = step(domain.alpha1_lo, domain.alpha1_hi, i);
        for j in 0..resolution {
            let beta1 = step(domain.beta1_lo, domain.beta1_hi, j);
            let s = AngleSlice::unchecked(alpha1, beta1, p);
            let conv = |x: f64| if degrees { x.to_degrees() } else { x };
            let row = [conv(alpha1), conv(beta1), edge::f1(&s), edge::f2(&s), edge::d1(&s), edge::d2(&s)]
                .map(|x| format_float(x).unwrap_or_default());
            w.write_record(&row).map_err(io)?;
        }
    }
    w.flush().map_err(|e| Error::InvalidParams(format!("write failed: {e}")))?;
    Ok(())
}

/// Entry point shared by the binary and the tests.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INVALID } else { EXIT_SOLVED };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
            } else {
                let _ = write!(out, "{text}");
            }
            return code;
        }
    };
    let fail = |err: &mut dyn Write, e: &dyn std::fmt::Display| {
        let _ = writeln!(err, "error: {e}");
        EXIT_INVALID
    };

    match cli.command {
        Command::Classify { a, b, output } => match classify_record(a, b) {
            Ok(rec) => {
                if let Err(e) = write_records(&[rec], output.format, out) {
                    return fail(err, &e);
                }
                EXIT_SOLVED
            }
            Err(e) => fail(err, &e),
        },
        Command::Solve { a, b, solver, output } => {
            let config = solver.config();
            if let Err(e) = config.validate() {
                return fail(err, &e);
            }
            match solve_record(a, b, &config, output.degrees) {
                Ok(rec) => {
                    if rec.status.is_none() {
                        if let Some(class) = rec.class {
                            let _ = writeln!(err, "error: class {class} is outside the solver's scope");
                        }
                    }
                    let code = exit_code(rec.status);
                    if let Err(e) = write_records(&[rec], output.format, out) {
                        return fail(err, &e);
                    }
                    code
                }
                Err(e) => fail(err, &e),
            }
        }
        Command::Table {
            a,
            b,
            b_upto,
            solver,
            output,
        } => {
            let config = solver.config();
            if let Err(e) = config.validate() {
                return fail(err, &e);
            }
            let pairs = match table_pairs(&a, b.as_ref(), b_upto) {
                Ok(p) => p,
                Err(e) => return fail(err, &e),
            };
            let results: Vec<Result<OutputRecord, Error>> = pairs
                .par_iter()
                .map(|&(a, b)| solve_record(a, b, &config, output.degrees))
                .collect();
            let mut records = Vec::with_capacity(results.len());
            for r in results {
                match r {
                    Ok(rec) => records.push(rec),
                    Err(e) => return fail(err, &e),
                }
            }
            if let Err(e) = write_records(&records, output.format, out) {
                return fail(err, &e);
            }
            if records.iter().any(|r| r.status == Some(SolveStatus::Diverged)) {
                EXIT_DIVERGED
            } else {
                EXIT_SOLVED
            }
        }
        Command::Grid {
            a,
            b,
            resolution,
            degrees,
        } => match grid_rows(a, b, resolution, degrees, out) {
            Ok(()) => EXIT_SOLVED,
            Err(e) => fail(err, &e),
        },
        Command::Check {
            trials,
            seed,
            identity_only,
            inject_singular,
        } => {
            if trials == 0 {
                return fail(err, &"trials must be at least 1");
            }
            let mode = if identity_only {
                CheckMode::IdentityOnly
            } else {
                CheckMode::Random
            };
            let s = run_minor_check(trials, seed, mode, inject_singular, err);
            let _ = writeln!(
                out,
                "trials={} passed={} failed={} skipped={}",
                s.trials, s.passed, s.failed, s.skipped
            );
            if s.failed == 0 {
                EXIT_SOLVED
            } else {
                EXIT_CHECK_FAILURE
            }
        }
    }
}
