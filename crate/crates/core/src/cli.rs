//! Command-line front end. Every run prints one report: JSON
//! `{config, rows, summary}`, or CSV with the config and summary as `#`
//! comment lines around the table. Exit status is 0 on success, 2 on
//! invalid input and 3 when a tolerance or verification check fails.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::arith::{is_fundamental, primes_up_to};
use crate::elliptic::{
    elliptic_table, enumerate_elliptic, gaussian_bracket, kottwitz_gl3, residue_split_check,
    verify_lfun_sum, KottwitzVariant, SplitConfig, ThetaModel,
};
use crate::error::Error;
use crate::gamma_afe::{afe_quadratic, decay_check, gamma_complex, stirling_gamma, AfeConfig, CutoffKernel, GammaShape};
use crate::lfunctions::{l_value_direct_tol, l_value_route, LRoute};
use crate::smoothing::{disc_map_gl_n, negative_control, probe_derivatives, probe_value_decay, Phi, SmoothProbeSpec};
use crate::VERSION;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_FAILED: i32 = 3;

/// Environment variable giving the default number of worker threads.
pub const THREADS_ENV: &str = "TRACE_AFE_THREADS";

#[derive(Debug, Parser)]
#[command(name = "trace-afe", version, about = "L-values, elliptic terms and identity checks")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Tolerance for numerical checks.
    #[arg(long, global = true, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for randomized sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Worker threads (0: all cores). Not part of the report.
    #[arg(long, global = true, env = THREADS_ENV)]
    #[serde(skip)]
    pub threads: Option<usize>,
    /// Write the report here instead of stdout. Not part of the report.
    #[arg(short, long, global = true)]
    #[serde(skip)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

fn parse_route(s: &str) -> Result<LRoute, String> {
    match s {
        "direct" => Ok(LRoute::Direct),
        "cnf" => Ok(LRoute::Cnf),
        "afe" => Ok(LRoute::Afe),
        _ => Err(format!("unknown route {s:?} (direct, cnf, afe)")),
    }
}

#[derive(Debug, Clone, Subcommand, Serialize)]
#[serde(rename_all = "lowercase", tag = "command")]
pub enum Command {
    /// L(s, chi_D) for a quadratic discriminant D.
    Lvalue(LvalueArgs),
    /// Table of GL(2) elliptic terms with determinant +-p^k.
    Elliptic(EllipticArgs),
    /// Run a verification suite.
    Verify(VerifyArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct LvalueArgs {
    /// Discriminant D (not a square).
    #[arg(short = 'D', allow_negative_numbers = true)]
    #[serde(rename = "D")]
    pub d: i64,
    #[arg(short, default_value_t = 1.0)]
    pub s: f64,
    /// direct, cnf (s = 1, fundamental D) or afe.
    #[arg(long, value_parser = parse_route, default_value = "direct")]
    pub route: LRoute,
    /// Balance parameter of the approximate functional equation.
    #[arg(short = 'X', default_value_t = 1.0)]
    #[serde(rename = "X")]
    pub x: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ThetaProfile {
    Bump,
    Indicator,
    Zero,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EllipticArgs {
    /// Prime p.
    #[arg(short)]
    pub p: u64,
    /// Exponent k >= 1.
    #[arg(short)]
    pub k: u32,
    /// Trace bound |m| <= M.
    #[arg(short = 'M')]
    #[serde(rename = "M")]
    pub m_max: i64,
    /// Keep classes whose delta is a square.
    #[arg(long)]
    pub include_squares: bool,
    #[arg(long, value_enum, default_value_t = ThetaProfile::Bump)]
    pub theta_profile: ThetaProfile,
    /// Support radius of theta in m / (2 p^(k/2)).
    #[arg(long, default_value_t = 1.0)]
    pub theta_radius: f64,
    /// Route for L(1, chi_D): direct, cnf or afe.
    #[arg(long, value_parser = parse_route, default_value = "direct")]
    pub route: LRoute,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Afe,
    Lfunsum,
    Split,
    Decay,
    Stirling,
    Smooth,
    Kottwitz,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    pub suite: Suite,
    /// lfunsum: largest prime.
    #[arg(long, default_value_t = 5)]
    pub pmax: u64,
    /// lfunsum: largest exponent.
    #[arg(long, default_value_t = 3)]
    pub kmax: u32,
    /// lfunsum: trace bound.
    #[arg(long, default_value_t = 30)]
    pub mmax: i64,
    /// split: number of random configurations.
    #[arg(long, default_value_t = 50)]
    pub configs: usize,
    /// decay: order m of the weight y^m.
    #[arg(short, default_value_t = 4.0)]
    pub m: f64,
    /// smooth: add the negative control, expected to fail.
    #[arg(long)]
    pub negative_control: bool,
}

/// Parses `args` (including the program name), runs the command and writes
/// the report to `out` (or the `--output` file). Returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            if e.use_stderr() {
                eprint!("{e}");
                return EXIT_INVALID;
            }
            let _ = write!(out, "{e}");
            return EXIT_OK;
        }
    };
    if !(cli.global.tol > 0.0) {
        eprintln!("error: --tol must be positive");
        return EXIT_INVALID;
    }
    let threads = cli.global.threads.unwrap_or(0);
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return EXIT_INVALID;
        }
    };
    eprintln!("threads: {}", pool.current_num_threads());
    let report = pool.install(|| execute(&cli));
    let report = match report {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            return exit_code(&e);
        }
    };
    let written = match &cli.global.output {
        Some(path) => File::create(path).and_then(|mut f| report.write(cli.global.format, &mut f)),
        None => report.write(cli.global.format, out),
    };
    if let Err(e) = written {
        eprintln!("error: {e}");
        return EXIT_INVALID;
    }
    report.exit
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Quadrature { .. } => EXIT_FAILED,
        _ => EXIT_INVALID,
    }
}

/// A finished run: resolved config, table rows and summary.
pub struct Report {
    pub config: Value,
    pub columns: Vec<String>,
    pub rows: Vec<Value>,
    pub csv_rows: Vec<Vec<String>>,
    pub summary: Value,
    pub exit: i32,
}

impl Report {
    fn new<R: Serialize>(config: Value, rows: &[R], summary: Value, exit: i32) -> Result<Self, Error> {
        let ser = |e: serde_json::Error| Error::InvalidArgument(e.to_string());
        let rows: Vec<Value> = rows.iter().map(serde_json::to_value).collect::<Result<_, _>>().map_err(ser)?;
        let columns: Vec<String> = match rows.first() {
            Some(Value::Object(m)) => m.keys().cloned().collect(),
            _ => Vec::new(),
        };
        let csv_rows = rows
            .iter()
            .map(|r| columns.iter().map(|c| csv_field(&r[c])).collect())
            .collect();
        Ok(Report { config, columns, rows, csv_rows, summary, exit })
    }

    pub fn write(&self, format: Format, out: &mut dyn Write) -> io::Result<()> {
        match format {
            Format::Json => {
                let doc = json!({ "config": self.config, "rows": self.rows, "summary": self.summary });
                serde_json::to_writer_pretty(&mut *out, &doc)?;
                writeln!(out)
            }
            Format::Csv => {
                writeln!(out, "# config {}", self.config)?;
                {
                    let mut w = csv::Writer::from_writer(&mut *out);
                    if !self.columns.is_empty() {
                        w.write_record(&self.columns)?;
                    }
                    for r in &self.csv_rows {
                        w.write_record(r)?;
                    }
                    w.flush()?;
                }
                writeln!(out, "# summary {}", self.summary)
            }
        }
    }
}

fn csv_field(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn config_of(cli: &Cli) -> Value {
    let mut cfg = json!({ "version": VERSION });
    let obj = cfg.as_object_mut().expect("object");
    if let Ok(Value::Object(g)) = serde_json::to_value(&cli.global) {
        obj.extend(g);
    }
    if let Ok(Value::Object(c)) = serde_json::to_value(&cli.command) {
        obj.extend(c);
    }
    cfg
}

fn execute(cli: &Cli) -> Result<Report, Error> {
    let config = config_of(cli);
    let g = &cli.global;
    match &cli.command {
        Command::Lvalue(a) => cmd_lvalue(config, g, a),
        Command::Elliptic(a) => cmd_elliptic(config, g, a),
        Command::Verify(a) => {
            let (rows, exit_rows) = match a.suite {
                Suite::Afe => suite_rows(afe_suite(g.tol)?),
                Suite::Lfunsum => suite_rows(lfunsum_suite(a.pmax, a.kmax, a.mmax, g.tol)?),
                Suite::Split => suite_rows(split_suite(a.configs, g.seed)?),
                Suite::Decay => suite_rows(decay_suite(a.m)?),
                Suite::Stirling => suite_rows(stirling_suite()?),
                Suite::Smooth => suite_rows(smooth_suite(a.negative_control)?),
                Suite::Kottwitz => suite_rows(kottwitz_suite()?),
            };
            let passed = exit_rows.iter().filter(|&&p| p).count();
            let failed = exit_rows.len() - passed;
            let summary = json!({
                "suite": a.suite,
                "cases": exit_rows.len(),
                "passed": passed,
                "failed": failed,
                "all_passed": failed == 0,
            });
            let exit = if failed == 0 { EXIT_OK } else { EXIT_FAILED };
            Report::new(config, &rows, summary, exit)
        }
    }
}

/// A row of a verification suite.
pub trait SuiteRow: Serialize {
    fn passed(&self) -> bool;
}

fn suite_rows<R: SuiteRow>(rows: Vec<R>) -> (Vec<Value>, Vec<bool>) {
    let flags = rows.iter().map(SuiteRow::passed).collect();
    let values = rows.iter().map(|r| serde_json::to_value(r).unwrap_or(Value::Null)).collect();
    (values, flags)
}

macro_rules! suite_row {
    ($t:ty) => {
        impl SuiteRow for $t {
            fn passed(&self) -> bool {
                self.passed
            }
        }
    };
}

#[derive(Debug, Clone, Serialize)]
struct LvalueRow {
    #[serde(rename = "D")]
    d: i64,
    s: f64,
    route: LRoute,
    value: f64,
    error_bound: f64,
    terms: u64,
}

fn cmd_lvalue(config: Value, g: &GlobalArgs, a: &LvalueArgs) -> Result<Report, Error> {
    let l = match a.route {
        LRoute::Afe => {
            if !is_fundamental(a.d) {
                return Err(Error::NotFundamental(a.d));
            }
            let v = afe_quadratic(a.d, a.s, a.x)?;
            crate::lfunctions::LValue { value: v.value, error_bound: v.error, terms: v.first.terms + v.second.terms }
        }
        route => l_value_route(a.d, a.s, route, g.tol)?,
    };
    let within = l.error_bound <= g.tol;
    let row = LvalueRow { d: a.d, s: a.s, route: a.route, value: l.value, error_bound: l.error_bound, terms: l.terms };
    let summary = json!({ "value": l.value, "error_bound": l.error_bound, "within_tolerance": within });
    Report::new(config, &[row], summary, if within { EXIT_OK } else { EXIT_FAILED })
}

/// Columns of the `elliptic` table.
#[derive(Debug, Clone, Serialize)]
pub struct EllipticRow {
    pub m: i64,
    pub sign: i8,
    pub delta: i64,
    pub s_gamma: Option<u64>,
    #[serde(rename = "D_E")]
    pub d_e: Option<i64>,
    pub volume: Option<f64>,
    pub padic_product: Option<String>,
    pub term: Option<f64>,
}

fn theta_for(profile: ThetaProfile, radius: f64) -> Result<ThetaModel, Error> {
    match profile {
        ThetaProfile::Bump => ThetaModel::bump(radius),
        ThetaProfile::Indicator => ThetaModel::indicator(radius),
        ThetaProfile::Zero => Ok(ThetaModel::zero()),
    }
}

fn cmd_elliptic(config: Value, g: &GlobalArgs, a: &EllipticArgs) -> Result<Report, Error> {
    let theta = theta_for(a.theta_profile, a.theta_radius)?;
    let table = elliptic_table(a.p, a.k, a.m_max, a.include_squares, &theta, a.route, g.tol)?;
    let rows: Vec<EllipticRow> = table
        .into_iter()
        .map(|t| EllipticRow {
            m: t.m,
            sign: t.sign,
            delta: t.delta,
            s_gamma: t.s_gamma,
            d_e: t.d_e,
            volume: t.volume,
            padic_product: t.padic_product,
            term: t.term,
        })
        .collect();
    let sum = rows.iter().filter_map(|r| r.term).collect::<crate::numeric::CompensatedSum>().value();
    let summary = json!({ "rows": rows.len(), "sum": sum });
    Report::new(config, &rows, summary, EXIT_OK)
}

#[derive(Debug, Clone, Serialize)]
pub struct AfeRow {
    #[serde(rename = "D")]
    pub d: i64,
    #[serde(rename = "X")]
    pub x: f64,
    pub afe: f64,
    pub direct: f64,
    pub difference: f64,
    pub afe_error: f64,
    pub passed: bool,
}
suite_row!(AfeRow);

/// AFE against direct summation at `s = 1` for fundamental `-200 < D < 200`
/// and `X` in {1/4, 1, 4}.
pub fn afe_suite(tol: f64) -> Result<Vec<AfeRow>, Error> {
    let ds: Vec<i64> = (-199..200).filter(|&d| d != 1 && is_fundamental(d)).collect();
    let rows: Vec<Vec<AfeRow>> = ds
        .par_iter()
        .map(|&d| -> Result<Vec<AfeRow>, Error> {
            let direct = l_value_direct_tol(d, 1.0, tol * 1e-2)?.value;
            [0.25, 1.0, 4.0]
                .iter()
                .map(|&x| {
                    let v = afe_quadratic(d, 1.0, x)?;
                    let difference = (v.value - direct).abs();
                    Ok(AfeRow { d, x, afe: v.value, direct, difference, afe_error: v.error, passed: difference < tol })
                })
                .collect()
        })
        .collect::<Result<_, _>>()?;
    Ok(rows.into_iter().flatten().collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct LfunRow {
    pub p: u64,
    pub k: u32,
    pub m: i64,
    pub sign: i8,
    pub delta: i64,
    pub s_gamma: u64,
    #[serde(rename = "D_E")]
    pub d_e: i64,
    /// The admissible `f`, separated by `;`.
    pub f: String,
    pub lhs: f64,
    pub rhs: f64,
    pub discrepancy: f64,
    pub unnormalized_ratio: f64,
    pub passed: bool,
}
suite_row!(LfunRow);

/// The summed-L identity for every elliptic class with `p <= pmax`,
/// `k <= kmax`, `|m| <= mmax`.
pub fn lfunsum_suite(pmax: u64, kmax: u32, mmax: i64, tol: f64) -> Result<Vec<LfunRow>, Error> {
    let mut classes = Vec::new();
    for p in primes_up_to(pmax) {
        for k in 1..=kmax {
            classes.extend(enumerate_elliptic(p, k, mmax)?);
        }
    }
    classes
        .par_iter()
        .map(|c| {
            let r = verify_lfun_sum(c, tol)?;
            Ok(LfunRow {
                p: c.p,
                k: c.k,
                m: c.m,
                sign: c.sign,
                delta: c.delta,
                s_gamma: r.s_gamma,
                d_e: r.d_e,
                f: r.admissible_f.iter().map(u64::to_string).collect::<Vec<_>>().join(";"),
                lhs: r.lhs,
                rhs: r.rhs,
                discrepancy: r.discrepancy,
                unnormalized_ratio: r.unnormalized_ratio,
                passed: r.passed,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct SplitRow {
    pub ell: u64,
    pub f: u64,
    pub p: u64,
    pub k: u32,
    pub sign: i8,
    #[serde(rename = "M")]
    pub m_max: i64,
    pub include_squares: bool,
    pub direct: f64,
    pub grouped: f64,
    pub discrepancy: f64,
    pub residues: usize,
    pub terms: usize,
    pub passed: bool,
}
suite_row!(SplitRow);

/// Random configurations with `l <= 5`, `f <= 4`, `M <= 400` a multiple of
/// `4 l f^2`, drawn from a seeded ChaCha8 stream.
pub fn split_configs(count: usize, seed: u64) -> Vec<SplitConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let primes = [2u64, 3, 5, 7];
    (0..count)
        .map(|_| {
            let ell = rng.gen_range(1..=5u64);
            let f = rng.gen_range(1..=4u64);
            let modulus = (4 * ell * f * f) as i64;
            let m_max = modulus * rng.gen_range(1..=(400 / modulus).max(1));
            SplitConfig {
                ell,
                f,
                p: primes[rng.gen_range(0..primes.len())],
                k: rng.gen_range(1..=3),
                sign: if rng.gen_bool(0.5) { 1 } else { -1 },
                m_max,
                include_squares: rng.gen_bool(0.5),
            }
        })
        .collect()
}

pub fn split_suite(count: usize, seed: u64) -> Result<Vec<SplitRow>, Error> {
    split_configs(count, seed)
        .par_iter()
        .map(|cfg| {
            let reach = (cfg.m_max + 1) as f64 / (2.0 * (cfg.p as f64).powf(cfg.k as f64 / 2.0));
            let theta = ThetaModel::bump(reach * 1.5)?;
            let r = residue_split_check(cfg, &theta, gaussian_bracket(cfg.ell, cfg.f, 0.4))?;
            Ok(SplitRow {
                ell: cfg.ell,
                f: cfg.f,
                p: cfg.p,
                k: cfg.k,
                sign: cfg.sign,
                m_max: cfg.m_max,
                include_squares: cfg.include_squares,
                direct: r.direct,
                grouped: r.grouped,
                discrepancy: r.discrepancy,
                residues: r.residues,
                terms: r.terms,
                passed: r.passed,
            })
        })
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct DecayRow {
    pub shape: String,
    pub check: String,
    pub y: f64,
    pub value: f64,
    pub bound: f64,
    pub passed: bool,
}
suite_row!(DecayRow);

/// For the odd and even quadratic shapes: `sup |V_1(y)| y^m` over `[1, 50]`
/// against the contour constant, `|V_1(50)| < 1e-6`, `|V_1(1e-3) - 1| < 1e-2`.
pub fn decay_suite(m: f64) -> Result<Vec<DecayRow>, Error> {
    let cfg = AfeConfig::new(1);
    let grid: Vec<f64> = (0..99).map(|i| 1.0 + 49.0 * i as f64 / 98.0).collect();
    let mut rows = Vec::new();
    for (name, shape) in [("odd", GammaShape::quadratic_odd()), ("even", GammaShape::quadratic_even())] {
        let r = decay_check(&shape, 1.0, m, &grid, &cfg)?;
        rows.push(DecayRow {
            shape: name.into(),
            check: format!("sup y^{m} |V_1(y)|"),
            y: r.sup_at,
            value: r.sup,
            bound: r.contour_constant,
            passed: r.passed,
        });
        let kernel = CutoffKernel::cutoff(&shape, 1.0, &cfg)?;
        let tail = kernel.eval(50.0).value.abs();
        rows.push(DecayRow { shape: name.into(), check: "|V_1(y)|".into(), y: 50.0, value: tail, bound: 1e-6, passed: tail < 1e-6 });
        let small = (kernel.eval(1e-3).value - 1.0).abs();
        rows.push(DecayRow {
            shape: name.into(),
            check: "|V_1(y) - 1|".into(),
            y: 1e-3,
            value: small,
            bound: 1e-2,
            passed: small < 1e-2,
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct StirlingRow {
    pub sigma: f64,
    pub t: f64,
    pub lanczos: f64,
    pub stirling: f64,
    pub relative_error: f64,
    pub bound: f64,
    pub passed: bool,
}
suite_row!(StirlingRow);

/// Relative error of the leading Stirling term against `|Gamma|` on 400
/// points with `|t|` in [10, 100] and `sigma` in {1/2, 1, 2, 3}.
pub fn stirling_suite() -> Result<Vec<StirlingRow>, Error> {
    let mut rows = Vec::new();
    for sigma in [0.5, 1.0, 2.0, 3.0] {
        for i in 0..100 {
            let at = 10.0 + 90.0 * i as f64 / 99.0;
            let t = if i % 2 == 0 { at } else { -at };
            let lanczos = gamma_complex(num_complex::Complex64::new(sigma, t))?.norm();
            let stirling = stirling_gamma(sigma, t)?;
            let relative_error = (stirling - lanczos).abs() / lanczos;
            let bound = 2.0 / at;
            rows.push(StirlingRow { sigma, t, lanczos, stirling, relative_error, bound, passed: relative_error <= bound });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct SmoothRow {
    pub case: String,
    pub n: usize,
    pub point: String,
    pub beta: f64,
    pub alpha: f64,
    pub phi: String,
    pub probe: String,
    pub finest: f64,
    pub threshold: f64,
    pub expected_order: Option<f64>,
    pub empirical_order: Option<f64>,
    pub passed: bool,
}
suite_row!(SmoothRow);

fn finite(x: f64) -> Option<f64> {
    x.is_finite().then_some(x)
}

fn point_label(p: &[f64]) -> String {
    p.iter().map(|t| t.to_string()).collect::<Vec<_>>().join(";")
}

/// Value and first-derivative probes for `n = 2` at `x = 2` and `n = 3` at
/// `(3, 3)` (`a_n = 1`), `beta` in {0, 0.3, 0.8}, `alpha = 1/2`, Gaussian
/// cutoff. The negative control passes when its derivative probe exceeds
/// `1e-2`.
pub fn smooth_suite(with_control: bool) -> Result<Vec<SmoothRow>, Error> {
    let cases: [(usize, Vec<f64>); 2] = [(2, vec![2.0]), (3, vec![3.0, 3.0])];
    let mut rows = Vec::new();
    for (n, point) in &cases {
        let dm = disc_map_gl_n(1, *n)?;
        for beta in [0.0, 0.3, 0.8] {
            let spec = SmoothProbeSpec::new(dm, beta, 0.5, Phi::Gaussian)?;
            let v = probe_value_decay(&spec, point)?;
            rows.push(SmoothRow {
                case: "condition holds".into(),
                n: *n,
                point: point_label(point),
                beta,
                alpha: 0.5,
                phi: spec.phi.name(),
                probe: "value".into(),
                finest: v.finest,
                threshold: spec.threshold,
                expected_order: None,
                empirical_order: None,
                passed: v.passed && v.finest < spec.threshold,
            });
            let d = probe_derivatives(&spec, point, 1)?;
            rows.push(SmoothRow {
                case: "condition holds".into(),
                n: *n,
                point: point_label(point),
                beta,
                alpha: 0.5,
                phi: spec.phi.name(),
                probe: "first partials".into(),
                finest: d.finest,
                threshold: spec.threshold,
                expected_order: finite(d.expected_order),
                empirical_order: finite(d.partials.iter().map(|p| p.empirical_order).fold(f64::INFINITY, f64::min)),
                passed: d.passed,
            });
        }
        if with_control {
            let spec = negative_control(dm)?;
            let d = probe_derivatives(&spec, point, 1)?;
            rows.push(SmoothRow {
                case: "negative control".into(),
                n: *n,
                point: point_label(point),
                beta: spec.beta,
                alpha: spec.alpha,
                phi: spec.phi.name(),
                probe: "first partials".into(),
                finest: d.finest,
                threshold: 1e-2,
                expected_order: finite(d.expected_order),
                empirical_order: finite(d.partials.iter().map(|p| p.empirical_order).fold(f64::INFINITY, f64::min)),
                passed: !d.passed && d.finest > 1e-2,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, Serialize)]
pub struct KottwitzRow {
    pub p: u64,
    pub n: u32,
    pub variant: String,
    pub value: String,
    pub integer: bool,
    pub positive: bool,
    pub passed: bool,
}
suite_row!(KottwitzRow);

/// Exact values for primes `p <= 50`, `n <= 6`, all three variants; a row
/// passes when the value is a positive integer.
pub fn kottwitz_suite() -> Result<Vec<KottwitzRow>, Error> {
    use num_traits::Signed;
    let variants = [
        ("unramified", KottwitzVariant::Unramified),
        ("ramified val=1", KottwitzVariant::Ramified(1)),
        ("ramified val=2", KottwitzVariant::Ramified(2)),
    ];
    let mut rows = Vec::new();
    for p in primes_up_to(50) {
        for n in 1..=6 {
            for (name, v) in variants {
                let value = kottwitz_gl3(p, n, v)?;
                let integer = value.is_integer();
                let positive = value.is_positive();
                rows.push(KottwitzRow {
                    p,
                    n,
                    variant: name.into(),
                    value: value.to_string(),
                    integer,
                    positive,
                    passed: integer && positive,
                });
            }
        }
    }
    Ok(rows)
}
