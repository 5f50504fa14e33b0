//! Command-line front end.
//!
//! Every output starts with a header carrying the tool version, the command
//! and its effective configuration. The output path and worker count are
//! left out of the header, so runs that differ only in those produce
//! byte-identical files.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::boxdim::{count_series, default_fit_range, max_gap, regress_dim, BoxCountSeries, BoxCountable};
use crate::digit_sets::{enumerate_points, four_corner, Budget, CantorSpec, PointSet1D};
use crate::error::Error;
use crate::exact::{big_to_f64, fmt_big_rational, fmt_rational, parse_rational, rational_to_f64, Rational};
use crate::furstenberg::{
    build_e, dimension_profile, furstenberg_experiment, project_px, sumset, svg_scatter, uniform_grid,
};
use crate::integrals::{
    constants, verify_sequence, DepthRule, Estimate, RatioSummary, TestMeasure, VerifyConfig,
};
use crate::spectral::{pk_coefficients, pk_lp_norm_exact, pk_power_closed_form, pk_power_level_product, rep_digits};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_BUDGET: i32 = 2;
pub const EXIT_CLOSED_FORM: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "cantorlab", version, about = "Cantor set, lacunary product and projection experiments")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Csv, global = true)]
    pub format: Format,
    /// Write to this file instead of standard output.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads; results do not depend on it.
    #[arg(long, global = true)]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    /// Exact integrals of powers of P_K with closed-form comparisons.
    Norms(NormsArgs),
    /// Exact Fourier coefficients of P_K.
    Coeffs(CoeffsArgs),
    /// Tabulate one estimate against its envelope over a range of K.
    Verify(VerifyArgs),
    /// Box-counting series and slope fit.
    Boxdim(BoxdimArgs),
    /// The set C + tC at finite depth.
    Sumset(SumsetArgs),
    /// The projection P_x(C x C) at finite depth.
    Project(ProjectArgs),
    /// Bounds and an empirical dimension estimate for the planar set E.
    Furstenberg(FurstenbergArgs),
    /// Box dimension of P_x(C x C) over a grid of x.
    Profile(ProfileArgs),
    /// The exponents c and c'.
    Constants,
}

/// Inclusive range `a..b`, or a single value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct KRange {
    pub lo: u32,
    pub hi: u32,
}

impl FromStr for KRange {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("bad bound {t:?}: {e}"));
        let (lo, hi) = match s.split_once("..") {
            Some((a, b)) => (parse(a)?, parse(b.trim_start_matches('='))?),
            None => {
                let v = parse(s)?;
                (v, v)
            }
        };
        if lo > hi {
            return Err(format!("empty range {s}"));
        }
        Ok(KRange { lo, hi })
    }
}

impl fmt::Display for KRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.lo, self.hi)
    }
}

impl Serialize for KRange {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Exact rational argument: `p/q`, an integer or a terminating decimal.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Q(pub Rational);

impl FromStr for Q {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        parse_rational(s)
            .map(Q)
            .ok_or_else(|| format!("{s:?} is not a rational (p/q, integer or decimal)"))
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(&self.0))
    }
}

#[derive(Debug, Args, Serialize)]
pub struct NormsArgs {
    #[arg(long = "K", default_value = "0..8")]
    #[serde(rename = "K")]
    pub k: KRange,
    #[arg(long, default_value_t = 2)]
    pub p: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct CoeffsArgs {
    #[arg(long = "K", default_value_t = 3)]
    #[serde(rename = "K")]
    pub k: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MeasureArg {
    /// Cantor–Lebesgue measure, exponent 1/2.
    Cantor,
    /// Uniform measure on [0, 1], exponent 1.
    Lebesgue,
    /// Point mass at 0, exponent 0.
    Dirac,
    /// Natural measure of --base/--digits.
    Digits,
}

#[derive(Debug, Args, Serialize)]
pub struct VerifyArgs {
    /// pest1, pest2, est2, mainest2, pk-dlambda or eq10-failure.
    pub estimate: String,
    #[arg(long = "K", default_value = "1..10")]
    #[serde(rename = "K")]
    pub k: KRange,
    #[arg(long, value_enum, default_value_t = MeasureArg::Cantor)]
    pub measure: MeasureArg,
    #[arg(long, default_value_t = 4)]
    pub base: u32,
    #[arg(long, value_delimiter = ',', default_value = "0,3")]
    pub digits: Vec<u32>,
    /// Fixed atom depth of the test measure; by default K + depth-offset.
    #[arg(long)]
    pub depth: Option<u32>,
    #[arg(long, default_value_t = 2)]
    pub depth_offset: u32,
    /// Dilation s0 with s = 4^K s0.
    #[arg(long, default_value = "1")]
    pub s0: Q,
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 8)]
    pub tail_depth: u32,
    /// Gauss–Legendre nodes per unit panel of the block quadrature.
    #[arg(long, default_value_t = 12)]
    pub quad_points: usize,
    /// Chebyshev points per level for pest1.
    #[arg(long, default_value_t = 48)]
    pub cheb_points: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub prune: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxSource {
    Cantor,
    Fourcorner,
    Sumset,
    Project,
    Digits,
}

#[derive(Debug, Args, Serialize)]
pub struct BoxdimArgs {
    #[arg(value_enum)]
    pub source: BoxSource,
    #[arg(long, default_value_t = 8)]
    pub depth: u32,
    /// Parameter of the sumset source.
    #[arg(long, default_value = "0")]
    pub t: Q,
    /// Parameter of the projection source.
    #[arg(long, default_value = "0")]
    pub x: Q,
    #[arg(long, default_value_t = 4)]
    pub base: u32,
    #[arg(long, value_delimiter = ',', default_value = "0,3")]
    pub digits: Vec<u32>,
    /// Lowest scale in the fit; default 2.
    #[arg(long)]
    pub m_lo: Option<u32>,
    /// Highest scale in the fit; default depth - 1.
    #[arg(long)]
    pub m_hi: Option<u32>,
}

#[derive(Debug, Args, Serialize)]
pub struct SumsetArgs {
    #[arg(long, default_value = "1/2")]
    pub t: Q,
    #[arg(long, default_value_t = 6)]
    pub depth: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct ProjectArgs {
    #[arg(long, default_value = "0")]
    pub x: Q,
    #[arg(long, default_value_t = 6)]
    pub depth: u32,
}

#[derive(Debug, Args, Serialize)]
pub struct FurstenbergArgs {
    #[arg(long, default_value_t = 0.5)]
    pub alpha: f64,
    #[arg(long, default_value_t = 4)]
    pub base: u32,
    #[arg(long = "depthC", default_value_t = 8)]
    #[serde(rename = "depthC")]
    pub depth_c: u32,
    #[arg(long = "depthK", default_value_t = 8)]
    #[serde(rename = "depthK")]
    pub depth_k: u32,
    /// Also write a scatter plot of E, binned at scale 4^-6 or coarser.
    #[arg(long)]
    #[serde(skip)]
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Args, Serialize)]
pub struct ProfileArgs {
    #[arg(long, default_value_t = 8)]
    pub depth: u32,
    #[arg(long, default_value_t = 64)]
    pub grid: u32,
    /// Also write a scatter plot of slope against x.
    #[arg(long)]
    #[serde(skip)]
    pub svg: Option<PathBuf>,
}

/// Failure with its exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError {
            code: if e.is_budget() { EXIT_BUDGET } else { EXIT_VALIDATION },
            message: e.to_string(),
        }
    }
}

fn with_k(k: u32) -> impl Fn(Error) -> CliError {
    move |e| {
        let mut c = CliError::from(e);
        c.message = format!("K = {k}: {}", c.message);
        c
    }
}

fn validation(message: impl Into<String>) -> CliError {
    CliError {
        code: EXIT_VALIDATION,
        message: message.into(),
    }
}

/// Rendered output plus the exit code to report after writing it.
#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    pub text: String,
    pub code: i32,
}

struct Report {
    csv: String,
    json: Value,
    code: i32,
}

impl Report {
    fn new(csv: String, json: Value) -> Self {
        Report { csv, json, code: EXIT_OK }
    }
}

/// Runs a parsed command and renders its output; nothing is written.
pub fn execute(cli: &Cli) -> Result<Output, CliError> {
    let report = match cli.jobs {
        Some(0) => return Err(validation("--jobs must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| validation(format!("thread pool: {e}")))?
            .install(|| dispatch(cli)),
        None => dispatch(cli),
    }?;
    let config = serde_json::to_value(&cli.command).unwrap_or(Value::Null);
    let (command, config) = match config {
        Value::Object(m) if m.len() == 1 => m.into_iter().next().unwrap_or_default(),
        Value::String(s) => (s, Value::Object(Default::default())),
        other => ("unknown".into(), other),
    };
    let text = match cli.format {
        Format::Csv => format!(
            "# cantorlab {}\n# command: {}\n# config: {}\n{}",
            env!("CARGO_PKG_VERSION"),
            command,
            config,
            report.csv
        ),
        Format::Json => {
            let doc = json!({
                "tool": "cantorlab",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
                "config": config,
                "result": report.json,
            });
            let mut s = serde_json::to_string_pretty(&doc).map_err(|e| validation(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    Ok(Output {
        text,
        code: report.code,
    })
}

/// Parses `args`, runs, writes the output and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match execute(&cli) {
        Ok(out) => {
            let written = match &cli.out {
                Some(path) => std::fs::write(path, &out.text),
                None => {
                    use std::io::Write;
                    std::io::stdout().write_all(out.text.as_bytes())
                }
            };
            if let Err(e) = written {
                eprintln!("error: cannot write output: {e}");
                return EXIT_VALIDATION;
            }
            if out.code == EXIT_CLOSED_FORM {
                eprintln!("error: closed-form check failed");
            }
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.code
        }
    }
}

fn dispatch(cli: &Cli) -> Result<Report, CliError> {
    let budget = Budget::default();
    match &cli.command {
        Command::Norms(a) => norms(a, &budget),
        Command::Coeffs(a) => coeffs(a, &budget),
        Command::Verify(a) => verify(a, &budget),
        Command::Boxdim(a) => boxdim(a, &budget),
        Command::Sumset(a) => point_set(sumset(&a.t.0, a.depth, &budget)?),
        Command::Project(a) => point_set(project_px(&a.x.0, a.depth, &budget)?),
        Command::Furstenberg(a) => furstenberg(a, &budget),
        Command::Profile(a) => profile(a, &budget),
        Command::Constants => Ok(constants_report()),
    }
}

#[derive(Serialize)]
struct NormRow {
    #[serde(rename = "K")]
    k: u32,
    p: u32,
    value: String,
    value_decimal: f64,
    closed_form: Option<String>,
    closed_form_match: Option<bool>,
    /// `(5/16)^(K+1)`, reported for p = 3 only.
    shifted_closed_form: Option<String>,
    shifted_match: Option<bool>,
    level_product: String,
    level_product_match: bool,
}

fn shifted_cubic(k: u32) -> BigRational {
    BigRational::new(BigInt::from(5).pow(k + 1), BigInt::from(16).pow(k + 1))
}

fn norms(a: &NormsArgs, budget: &Budget) -> Result<Report, CliError> {
    if a.p == 0 {
        return Err(validation("--p must be at least 1"));
    }
    let rows = (a.k.lo..=a.k.hi)
        .into_par_iter()
        .map(|k| {
            let v = pk_lp_norm_exact(k, a.p, budget).map_err(with_k(k))?;
            let closed = pk_power_closed_form(k, a.p);
            let shifted = (a.p == 3).then(|| shifted_cubic(k));
            let level = pk_power_level_product(k, a.p);
            Ok(NormRow {
                k,
                p: a.p,
                value: fmt_big_rational(&v),
                value_decimal: big_to_f64(&v),
                closed_form_match: closed.as_ref().map(|c| *c == v),
                closed_form: closed.as_ref().map(fmt_big_rational),
                shifted_match: shifted.as_ref().map(|c| *c == v),
                shifted_closed_form: shifted.as_ref().map(fmt_big_rational),
                level_product_match: level == v,
                level_product: fmt_big_rational(&level),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let opt = |o: &Option<String>| o.clone().unwrap_or_default();
    let optb = |o: Option<bool>| o.map(|b| b.to_string()).unwrap_or_default();
    let mut csv = String::from(
        "K,p,value,value_decimal,closed_form,closed_form_match,shifted_closed_form,shifted_match,level_product,level_product_match\n",
    );
    for r in &rows {
        csv.push_str(&format!(
            "{},{},{},{:.17e},{},{},{},{},{},{}\n",
            r.k,
            r.p,
            r.value,
            r.value_decimal,
            opt(&r.closed_form),
            optb(r.closed_form_match),
            opt(&r.shifted_closed_form),
            optb(r.shifted_match),
            r.level_product,
            r.level_product_match
        ));
    }
    let failed = a.p <= 2 && rows.iter().any(|r| r.closed_form_match == Some(false));
    let mut report = Report::new(csv, json!({ "rows": rows }));
    if failed {
        report.code = EXIT_CLOSED_FORM;
    }
    Ok(report)
}

fn coeffs(a: &CoeffsArgs, budget: &Budget) -> Result<Report, CliError> {
    let p = pk_coefficients(a.k, budget).map_err(with_k(a.k))?;
    let mut csv = String::from("frequency,coefficient,coefficient_decimal,representations\n");
    let mut rows = Vec::with_capacity(p.len());
    for (n, c) in p.iter() {
        let reps = rep_digits(n, a.k).map(|r| r.rep_count()).unwrap_or(0);
        let dec = big_to_f64(&c);
        csv.push_str(&format!("{n},{},{dec:.17e},{reps}\n", fmt_big_rational(&c)));
        rows.push(json!({
            "frequency": n,
            "coefficient": fmt_big_rational(&c),
            "coefficient_decimal": dec,
            "representations": reps,
        }));
    }
    Ok(Report::new(csv, json!({ "support": p.len(), "coefficients": rows })))
}

fn verify(a: &VerifyArgs, budget: &Budget) -> Result<Report, CliError> {
    let estimate: Estimate = a.estimate.parse()?;
    let depth = a.depth.unwrap_or(0);
    let measure = match a.measure {
        MeasureArg::Cantor => TestMeasure::cantor(depth),
        MeasureArg::Lebesgue => TestMeasure::Lebesgue { depth },
        MeasureArg::Dirac => TestMeasure::Dirac,
        MeasureArg::Digits => TestMeasure::Digits {
            spec: CantorSpec::new(a.base, &a.digits)?,
            depth,
        },
    };
    let cfg = VerifyConfig {
        measure,
        depth: match a.depth {
            Some(_) => DepthRule::Fixed,
            None => DepthRule::AboveK(a.depth_offset),
        },
        s0: a.s0.0,
        tol: a.tol,
        tail_depth: a.tail_depth,
        cheb_points: a.cheb_points,
        block: crate::integrals::BlockQuadrature {
            panel_nodes: a.quad_points,
            tail_depth: a.tail_depth,
            prune: a.prune,
        },
        budget: *budget,
    };
    let rows = verify_sequence(estimate, a.k.lo..=a.k.hi, &cfg)?;
    let summary = RatioSummary::from_rows(&rows);
    let mut csv = String::from(crate::integrals::VerificationRow::CSV_HEADER);
    csv.push('\n');
    for r in &rows {
        csv.push_str(&r.to_csv());
        csv.push('\n');
    }
    let depth_note = match cfg.depth {
        DepthRule::Fixed => cfg.measure.label(),
        DepthRule::AboveK(d) => format!("{} at depth K+{d}", cfg.measure.family()),
    };
    csv.push_str(&format!("# measure: {depth_note}\n"));
    csv.push_str(&format!("# s0: {}\n", fmt_rational(&cfg.s0)));
    if let Some(s) = &summary {
        csv.push_str(&format!(
            "# ratios: min={:.6e} max={:.6e} spread={:.6e} mean_step={:.6e} increasing={}\n",
            s.min, s.max, s.spread, s.mean_step, s.increasing
        ));
    }
    Ok(Report::new(
        csv,
        json!({ "effective": cfg, "rows": rows, "summary": summary }),
    ))
}

fn series_report(series: &BoxCountSeries, lo: u32, hi: u32, n_points: usize) -> Result<Report, CliError> {
    let est = regress_dim(&series.restrict(lo, hi))?;
    let mut csv = series.to_csv();
    csv.push_str(&format!(
        "# fit: slope={:.17e} intercept={:.17e} r_squared={:.17e} m_range={}..{}\n",
        est.slope, est.intercept, est.r_squared, est.m_range.0, est.m_range.1
    ));
    csv.push_str(&format!("# points: {n_points}\n"));
    Ok(Report::new(
        csv,
        json!({ "series": series, "estimate": est, "points": n_points }),
    ))
}

fn fit_range(a: &BoxdimArgs) -> (u32, u32) {
    let (lo, hi) = default_fit_range(a.depth);
    (a.m_lo.unwrap_or(lo), a.m_hi.unwrap_or(hi))
}

fn boxdim(a: &BoxdimArgs, budget: &Budget) -> Result<Report, CliError> {
    let (lo, hi) = fit_range(a);
    if lo > hi || hi > a.depth {
        return Err(validation(format!("fit range {lo}..{hi} must lie within 0..{}", a.depth)));
    }
    let one_d = |p: PointSet1D| -> Result<Report, CliError> {
        let (p, note) = into_unit_interval(p)?;
        let s = count_series(&p, 4, 0, a.depth)?;
        let mut r = series_report(&s, lo, hi, p.len())?;
        if let Some(note) = note {
            r.csv.push_str(&note);
        }
        Ok(r)
    };
    match a.source {
        BoxSource::Cantor => one_d(enumerate_points(&CantorSpec::cantor(), a.depth, budget)?),
        BoxSource::Digits => one_d(enumerate_points(&CantorSpec::new(a.base, &a.digits)?, a.depth, budget)?),
        BoxSource::Sumset => one_d(sumset(&a.t.0, a.depth, budget)?),
        BoxSource::Project => one_d(project_px(&a.x.0, a.depth, budget)?),
        BoxSource::Fourcorner => {
            let e = four_corner(a.depth, budget)?;
            let s = count_series(&e, 4, 0, a.depth)?;
            series_report(&s, lo, hi, e.len())
        }
    }
}

/// Moves a set into `[0, 1)` by an integer shift and a power-of-4
/// contraction, which leaves the counts on the 4-adic grid unchanged up to
/// a shift in `m`. Returns a comment line describing the map when one was
/// applied.
fn into_unit_interval(p: PointSet1D) -> Result<(PointSet1D, Option<String>), CliError> {
    let (Some(&lo), Some(&hi)) = (p.numerators().first(), p.numerators().last()) else {
        return Ok((p, None));
    };
    let den = p.denominator();
    if lo >= 0 && hi < den {
        return Ok((p, None));
    }
    let shift = -lo.div_euclid(den);
    let top = hi + shift * den;
    let mut j = 0u32;
    let mut span = den;
    while top >= span {
        j += 1;
        span = span.checked_mul(4).ok_or(Error::Overflow("rescaled point set"))?;
    }
    let nums = p.numerators().iter().map(|&n| n + shift * den).collect();
    let moved = PointSet1D::from_numerators(p.depth(), den, nums)?.scaled(Rational::new(1, 4i128.pow(j)))?;
    Ok((moved, Some(format!("# counted after x -> (x + {shift}) / 4^{j}\n"))))
}

fn point_set(p: PointSet1D) -> Result<Report, CliError> {
    let gap = if p.len() >= 2 { Some(max_gap(&p)?) } else { None };
    let mut csv = p.to_csv();
    csv.push_str(&format!("# points: {}\n", p.len()));
    if let Some(g) = &gap {
        csv.push_str(&format!("# max_gap: {} ({:.17e})\n", fmt_rational(g), rational_to_f64(g)));
    }
    Ok(Report::new(
        csv,
        json!({
            "count": p.len(),
            "max_gap": gap.as_ref().map(fmt_rational),
            "set": p,
        }),
    ))
}

fn furstenberg(a: &FurstenbergArgs, budget: &Budget) -> Result<Report, CliError> {
    let r = furstenberg_experiment(a.alpha, a.base, a.depth_k, a.depth_c, budget)?;
    if let Some(path) = &a.svg {
        let e = build_e(&r.k_set.spec, a.depth_k, a.depth_c, budget)?;
        let m = r.series.entries().last().map_or(0, |e| e.0).min(6);
        let scale = 4f64.powi(m as i32);
        let cells: Vec<(f64, f64)> = e
            .cells(4, m)?
            .into_iter()
            .map(|(i, j)| ((i as f64 + 0.5) / scale, (j as f64 + 0.5) / scale))
            .collect();
        std::fs::write(path, svg_scatter(&cells, &format!("E at scale 4^-{m}")))
            .map_err(|e| validation(format!("cannot write {}: {e}", path.display())))?;
    }
    let b = &r.bounds;
    let digits: Vec<String> = r.k_set.spec.digits().iter().map(|d| d.to_string()).collect();
    let mut csv = String::from("quantity,value\n");
    let mut push = |k: &str, v: String| csv.push_str(&format!("{k},{v}\n"));
    push("alpha_requested", format!("{:.17e}", r.k_set.requested));
    push("alpha_achieved", format!("{:.17e}", r.k_set.achieved));
    push("k_base", r.k_set.spec.base().to_string());
    push("k_digits", digits.join("|"));
    push("lower_elementary", format!("{:.17e}", b.lower_elementary));
    push("lower_l2", format!("{:.17e}", b.lower_l2));
    push("lower_l3", format!("{:.17e}", b.lower_l3));
    push("upper", format!("{:.17e}", b.upper));
    push("c", format!("{:.17e}", b.c));
    push("c_prime", format!("{:.17e}", b.c_prime));
    push("l2_improves", b.l2_improves().to_string());
    push("points", r.n_points.to_string());
    for &(m, n) in r.series.entries() {
        push(&format!("count_m{m}"), n.to_string());
    }
    push("estimate", format!("{:.17e}", r.estimate.slope));
    push("r_squared", format!("{:.17e}", r.estimate.r_squared));
    push("fit_range", format!("{}..{}", r.estimate.m_range.0, r.estimate.m_range.1));
    Ok(Report::new(csv, serde_json::to_value(&r).map_err(|e| validation(e.to_string()))?))
}

fn profile(a: &ProfileArgs, budget: &Budget) -> Result<Report, CliError> {
    let xs = uniform_grid(a.grid)?;
    let rows = dimension_profile(a.depth, &xs, budget)?;
    if let Some(path) = &a.svg {
        let pts: Vec<(f64, f64)> = rows
            .iter()
            .map(|p| (rational_to_f64(&p.x), p.dim_estimate.slope))
            .collect();
        std::fs::write(path, svg_scatter(&pts, "box dimension of the projection against x"))
            .map_err(|e| validation(format!("cannot write {}: {e}", path.display())))?;
    }
    let mut csv = String::from("x,x_decimal,slope,intercept,r_squared,m_lo,m_hi,n_points\n");
    for p in &rows {
        let d = &p.dim_estimate;
        csv.push_str(&format!(
            "{},{:.17e},{:.17e},{:.17e},{:.17e},{},{},{}\n",
            fmt_rational(&p.x),
            rational_to_f64(&p.x),
            d.slope,
            d.intercept,
            d.r_squared,
            d.m_range.0,
            d.m_range.1,
            p.n_points
        ));
    }
    Ok(Report::new(csv, json!({ "rows": rows })))
}

fn constants_report() -> Report {
    let k = constants();
    let four = k.four_pow_one_minus_c();
    let sqrt6 = 6f64.sqrt();
    let csv = format!(
        "quantity,value\nc,{:.17e}\nc_prime,{:.17e}\nfour_pow_one_minus_c,{:.17e}\nsqrt6,{:.17e}\nidentity_error,{:.3e}\n",
        k.c,
        k.c_prime,
        four,
        sqrt6,
        (four - sqrt6).abs()
    );
    Report::new(
        csv,
        json!({
            "c": k.c,
            "c_prime": k.c_prime,
            "four_pow_one_minus_c": four,
            "sqrt6": sqrt6,
            "identity_error": (four - sqrt6).abs(),
        }),
    )
}
