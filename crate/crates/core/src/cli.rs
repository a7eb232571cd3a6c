//! Command-line front end: bounds for JSON-described laws, the paper's table
//! and figure data, verification sweeps and simulation.
//!
//! Exit codes: 0 success, 1 usage, 2 degenerate parameter, 3 numerical
//! failure, 4 verification failure.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use crate::approximants::TruncatedPmf;
use crate::bounds::{self, round_half_away, BoundReport, MixedBinomialSpec, NearOrderSpec};
use crate::distributions::{Geometric, LawDescriptor};
use crate::error::Error;
use crate::maxima::{kn_full_pmf, kn_star_full_pmf, KnSpec};
use crate::montecarlo::{self, EmpiricalPmf, SEED_ENV};
use crate::stein::log_vs_negbin_bound;
use crate::verify::{self, VerifyOptions, VerifyRow};

/// Table 1 grid.
pub const TABLE1_MU: [f64; 5] = [100.0, 300.0, 500.0, 700.0, 900.0];
pub const TABLE1_N: [u64; 5] = [100_000, 1_000_000, 10_000_000, 100_000_000, 1_000_000_000];

/// Token printed for table cells whose bound exceeds 1.
pub const DASH: &str = "---";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Theorem {
    /// logarithmic approximation of K_n with alpha = 1 - P(K=1)/E[K]
    Thm1a,
    /// logarithmic approximation via the size-biased law (n >= 4)
    Thm1b,
    /// Poisson approximation of K_n (n >= 3)
    Thm2,
    /// negative binomial approximation near an order statistic
    Thm3,
    /// negative binomial approximation of a mixed binomial (--eq, --eq2)
    Thm4,
    /// Gumbel maximum bound in closed form
    Eq6,
    /// logarithmic vs negative binomial (--alpha, --beta, --ell)
    LogNegbin,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Figure {
    /// Theorem 1(a) bound for geometric samples, n = 20
    Fig1,
    /// Gumbel closed-form bound for n = 20 and n = 100
    Fig2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Target {
    /// number of maxima K_n
    Kn,
    /// size-biased K_n* by the argmax construction
    Star,
    /// count within distance a below the ell-th largest value
    Near,
}

/// Parameters describing the law and sample.
#[derive(Debug, Clone, Default, clap::Args)]
pub struct LawArgs {
    /// geometric | tabulated | gumbel | uniform, or a JSON descriptor such as {"kind":"geometric","p":0.2}
    #[arg(long)]
    pub law: Option<String>,
    /// geometric success probability
    #[arg(long)]
    pub p: Option<f64>,
    /// geometric with p = 1 - mu/n
    #[arg(long)]
    pub mu: Option<f64>,
    /// sample size
    #[arg(long)]
    pub n: Option<u64>,
    /// order statistic index (1 = maximum); the shape parameter for log-negbin
    #[arg(long)]
    pub ell: Option<f64>,
    /// distance below the order statistic
    #[arg(long)]
    pub a: Option<f64>,
    /// upper end of the uniform law
    #[arg(long)]
    pub b: Option<f64>,
    /// comma-separated weights of a tabulated law on 1, 2, ...
    #[arg(long, value_delimiter = ',')]
    pub weights: Option<Vec<f64>>,
    /// E[Q] for thm4
    #[arg(long)]
    pub eq: Option<f64>,
    /// E[Q^2] for thm4
    #[arg(long)]
    pub eq2: Option<f64>,
    /// logarithmic parameter for log-negbin
    #[arg(long)]
    pub alpha: Option<f64>,
    /// negative binomial parameter for log-negbin
    #[arg(long)]
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Evaluate one bound.
    Bound {
        theorem: Theorem,
        #[command(flatten)]
        law: LawArgs,
        /// round the bound half away from zero to this many decimals
        #[arg(long)]
        digits: Option<i32>,
    },
    /// Poisson bounds for geometric samples with p = 1 - mu/n.
    Table1 {
        /// print full precision instead of three decimals and dashes
        #[arg(long)]
        raw: bool,
    },
    /// Plot-ready data for the two figures.
    Figure {
        figure: Figure,
        /// number of grid points
        #[arg(long, default_value_t = 20)]
        points: usize,
    },
    /// Compare every bound with certified exact distances and simulation.
    Verify {
        /// Monte Carlo samples per grid point; 0 skips simulation
        #[arg(long, default_value_t = 100_000)]
        mc_samples: u64,
        /// multiply every bound by this factor before comparing
        #[arg(long, default_value_t = 1.0, hide = true)]
        fault_scale: f64,
    },
    /// Simulate K_n, K_n* or K_n(a, ell) and compare with the exact law.
    Simulate {
        #[arg(long, value_enum, default_value_t = Target::Kn)]
        target: Target,
        #[command(flatten)]
        law: LawArgs,
        /// number of samples
        #[arg(long, default_value_t = 100_000)]
        mc_samples: u64,
    },
}

/// Full command-line configuration.
#[derive(Debug, Clone, Parser)]
#[command(name = "maxties", version, about = "Bounds and simulation for ties at the sample maximum")]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
    /// series truncation tolerance
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// random seed
    #[arg(long, global = true, env = SEED_ENV, default_value_t = montecarlo::DEFAULT_SEED)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// write the document here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<std::path::PathBuf>,
}

/// Failure of a command, carrying its exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Compute(#[from] Error),
    #[error("verification failed: {0}")]
    Verification(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Compute(Error::Domain(_)) => 1,
            CliError::Compute(Error::Degenerate(_)) => 2,
            CliError::Compute(_) => 3,
            CliError::Verification(_) => 4,
        }
    }
}

/// A rendered document plus an optional failure to report after writing it.
#[derive(Debug)]
pub struct Output {
    pub document: String,
    pub failure: Option<CliError>,
}

impl Output {
    fn ok(document: String) -> Self {
        Output { document, failure: None }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn require<T: Copy>(value: Option<T>, flag: &str) -> Result<T, CliError> {
    value.ok_or_else(|| usage(format!("missing required flag --{flag}")))
}

fn integer_ell(args: &LawArgs) -> Result<u64, CliError> {
    let ell = args.ell.unwrap_or(1.0);
    if ell < 1.0 || ell.fract() != 0.0 {
        return Err(usage(format!("--ell must be a positive integer here, got {ell}")));
    }
    Ok(ell as u64)
}

fn descriptor(args: &LawArgs) -> Result<LawDescriptor, CliError> {
    let name = args.law.as_deref().ok_or_else(|| usage("missing required flag --law"))?;
    if name.trim_start().starts_with('{') {
        return Ok(LawDescriptor::from_json(name)?);
    }
    match name {
        "geometric" => Ok(LawDescriptor::Geometric { p: args.p.unwrap_or(f64::NAN) }),
        "tabulated" => Ok(LawDescriptor::Tabulated { weights: args.weights.clone().ok_or_else(|| usage("tabulated law needs --weights"))? }),
        "gumbel" => Ok(LawDescriptor::Gumbel),
        "uniform" => Ok(LawDescriptor::Uniform { b: args.b.unwrap_or(1.0) }),
        other => Err(usage(format!("unknown law '{other}'"))),
    }
}

/// Discrete sample spec; `--mu` selects p = 1 - mu/n for the geometric law.
pub fn discrete_spec(args: &LawArgs) -> Result<KnSpec, CliError> {
    let n = require(args.n, "n")?;
    if let (Some(mu), Some("geometric") | None) = (args.mu, args.law.as_deref()) {
        if args.p.is_some() {
            return Err(usage("give either --p or --mu, not both"));
        }
        let law = Geometric::with_failure_prob(mu / n as f64)?;
        return Ok(KnSpec::new(Arc::new(law), n)?);
    }
    let desc = descriptor(args)?;
    if let LawDescriptor::Geometric { p } = desc {
        if p.is_nan() {
            return Err(usage("geometric law needs --p or --mu"));
        }
    }
    Ok(KnSpec::new(desc.build_discrete()?, n)?)
}

/// Continuous near-order spec.
pub fn near_order_spec(args: &LawArgs) -> Result<NearOrderSpec, CliError> {
    let n = require(args.n, "n")?;
    let a = require(args.a, "a")?;
    let law = descriptor(args)?.build_continuous()?;
    Ok(NearOrderSpec::new(law, n, integer_ell(args)?, a)?)
}

#[derive(Serialize)]
struct NamedReport<'a> {
    theorem: &'a str,
    #[serde(flatten)]
    report: &'a BoundReport,
}

fn theorem_name(t: Theorem) -> &'static str {
    match t {
        Theorem::Thm1a => "thm1a",
        Theorem::Thm1b => "thm1b",
        Theorem::Thm2 => "thm2",
        Theorem::Thm3 => "thm3",
        Theorem::Thm4 => "thm4",
        Theorem::Eq6 => "eq6",
        Theorem::LogNegbin => "log-negbin",
    }
}

/// Evaluate the requested bound.
pub fn compute_bound(theorem: Theorem, args: &LawArgs, tol: f64) -> Result<BoundReport, CliError> {
    Ok(match theorem {
        Theorem::Thm1a => bounds::thm1a_bound(&discrete_spec(args)?, tol)?,
        Theorem::Thm1b => bounds::thm1b_bound(&discrete_spec(args)?, tol)?,
        Theorem::Thm2 => bounds::thm2_poisson_bound(&discrete_spec(args)?, tol)?,
        Theorem::Thm3 => bounds::thm3_bound(&near_order_spec(args)?, tol.max(1e-14))?,
        Theorem::Thm4 => {
            let spec = MixedBinomialSpec::new(require(args.n, "n")?, integer_ell(args)?, require(args.eq, "eq")?, require(args.eq2, "eq2")?)?;
            bounds::thm4_bound(&spec)?
        }
        Theorem::Eq6 => {
            let (n, a) = (require(args.n, "n")?, require(args.a, "a")?);
            let value = bounds::gumbel_eq6_bound(n, a)?;
            let mut r = BoundReport::new(value);
            r.params.insert("n".into(), n as f64);
            r.params.insert("a".into(), a);
            r
        }
        Theorem::LogNegbin => {
            let (alpha, beta, ell) = (require(args.alpha, "alpha")?, require(args.beta, "beta")?, require(args.ell, "ell")?);
            let mut r = BoundReport::new(log_vs_negbin_bound(alpha, beta, ell)?);
            r.params.insert("alpha".into(), alpha);
            r.params.insert("beta".into(), beta);
            r.params.insert("ell".into(), ell);
            r
        }
    })
}

fn csv_line(fields: &[String]) -> String {
    let mut line = fields.join(",");
    line.push('\n');
    line
}

/// Shortest round-trip text for a float, in exponent form when very small or large.
fn num(x: f64) -> String {
    if x != 0.0 && (x.abs() < 1e-5 || x.abs() >= 1e15) {
        format!("{x:e}")
    } else {
        x.to_string()
    }
}

fn json(value: &impl Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serialisable");
    s.push('\n');
    s
}

/// `bound` subcommand.
pub fn cmd_bound(theorem: Theorem, args: &LawArgs, digits: Option<i32>, cfg: &RunConfig) -> Result<Output, CliError> {
    let mut report = compute_bound(theorem, args, cfg.tol)?;
    if let Some(d) = digits {
        report.bound = round_half_away(report.bound, d);
    }
    let name = theorem_name(theorem);
    Ok(Output::ok(match cfg.format {
        Format::Json => json(&NamedReport { theorem: name, report: &report }),
        Format::Csv => {
            let mut header = vec!["theorem".to_string(), "bound".into(), "informative".into(), "truncation_error".into()];
            let mut row = vec![name.to_string(), num(report.bound), report.informative.to_string(), num(report.truncation_error)];
            for (k, v) in report.params.iter().chain(&report.moments) {
                header.push(k.clone());
                row.push(num(*v));
            }
            csv_line(&header) + &csv_line(&row)
        }
    }))
}

#[derive(Debug, Clone, Serialize)]
struct Table1Cell {
    mu: f64,
    n: u64,
    bound: f64,
    rounded: Option<f64>,
    informative: bool,
}

/// Theorem 2 bound for geometric samples with `p = 1 - mu/n`.
pub fn table1_cell(mu: f64, n: u64, tol: f64) -> Result<BoundReport, Error> {
    let law = Geometric::with_failure_prob(mu / n as f64)?;
    bounds::thm2_poisson_bound(&KnSpec::new(Arc::new(law), n)?, tol)
}

/// `table1` subcommand: rows are mu, columns are n.
pub fn cmd_table1(raw: bool, cfg: &RunConfig) -> Result<Output, CliError> {
    let grid: Vec<(f64, u64)> = TABLE1_MU.iter().flat_map(|&mu| TABLE1_N.iter().map(move |&n| (mu, n))).collect();
    let cells: Vec<Table1Cell> = grid
        .par_iter()
        .map(|&(mu, n)| {
            let r = table1_cell(mu, n, cfg.tol)?;
            Ok(Table1Cell { mu, n, bound: r.bound, rounded: r.informative.then(|| round_half_away(r.bound, 3)), informative: r.informative })
        })
        .collect::<Result<_, Error>>()?;
    if cfg.format == Format::Json {
        return Ok(Output::ok(json(&cells)));
    }
    let mut doc = csv_line(&std::iter::once("mu".to_string()).chain(TABLE1_N.iter().map(|n| n.to_string())).collect::<Vec<_>>());
    for row in cells.chunks(TABLE1_N.len()) {
        let mut fields = vec![row[0].mu.to_string()];
        for c in row {
            fields.push(match (raw, c.rounded) {
                (true, _) => c.bound.to_string(),
                (false, Some(v)) => format!("{v:.3}"),
                (false, None) => DASH.to_string(),
            });
        }
        doc += &csv_line(&fields);
    }
    Ok(Output::ok(doc))
}

/// Figure 1 data: `(p, thm1a bound)` at `n = 20` for `p = 0.5 i / points`.
pub fn figure1_data(points: usize, tol: f64) -> Result<Vec<(f64, f64)>, Error> {
    (1..=points)
        .into_par_iter()
        .map(|i| {
            let p = 0.5 * i as f64 / points as f64;
            let spec = KnSpec::new(Arc::new(Geometric::new(p)?), 20)?;
            Ok((p, bounds::thm1a_bound(&spec, tol)?.bound))
        })
        .collect()
}

/// Figure 2 data: `(a, bound n=20, bound n=100)` for `a = i / (points - 1)`, `a` in `[0, 1]`.
pub fn figure2_data(points: usize) -> Result<Vec<(f64, f64, f64)>, Error> {
    let steps = points.max(2) - 1;
    (0..=steps)
        .map(|i| {
            let a = i as f64 / steps as f64;
            Ok((a, bounds::gumbel_eq6_bound(20, a)?, bounds::gumbel_eq6_bound(100, a)?))
        })
        .collect()
}

/// `figure` subcommand.
pub fn cmd_figure(figure: Figure, points: usize, cfg: &RunConfig) -> Result<Output, CliError> {
    if points == 0 {
        return Err(usage("--points must be positive"));
    }
    let (header, rows): (Vec<&str>, Vec<Vec<f64>>) = match figure {
        Figure::Fig1 => (vec!["p", "thm1a_bound"], figure1_data(points, cfg.tol)?.into_iter().map(|(p, b)| vec![p, b]).collect()),
        Figure::Fig2 => (
            vec!["a", "bound_n20", "bound_n100"],
            figure2_data(points)?.into_iter().map(|(a, x, y)| vec![a, x, y]).collect(),
        ),
    };
    Ok(Output::ok(match cfg.format {
        Format::Json => {
            let records: Vec<serde_json::Map<String, serde_json::Value>> = rows
                .iter()
                .map(|r| header.iter().zip(r).map(|(h, v)| (h.to_string(), serde_json::json!(v))).collect())
                .collect();
            json(&records)
        }
        Format::Csv => {
            let mut doc = csv_line(&header.iter().map(|s| s.to_string()).collect::<Vec<_>>());
            for r in rows {
                doc += &csv_line(&r.iter().map(|&v| num(v)).collect::<Vec<_>>());
            }
            doc
        }
    }))
}

/// `verify` subcommand.
pub fn cmd_verify(mc_samples: u64, fault_scale: f64, cfg: &RunConfig) -> Result<Output, CliError> {
    let opts = VerifyOptions { tol: cfg.tol, mc_samples, seed: cfg.seed, fault_scale, ..VerifyOptions::default() };
    let rows = verify::run_all(&opts)?;
    let failed: Vec<&VerifyRow> = rows.iter().filter(|r| !r.pass).collect();
    let document = match cfg.format {
        Format::Json => json(&rows),
        Format::Csv => {
            let mut doc = csv_line(&["check", "point", "bound", "distance", "radius", "status"].map(String::from));
            for r in &rows {
                let status = if r.pass { "pass" } else { "FAIL" };
                doc += &csv_line(&[r.check.clone(), r.point.clone(), num(r.bound), num(r.distance), num(r.radius), status.into()]);
            }
            doc
        }
    };
    let failure = (!failed.is_empty()).then(|| {
        CliError::Verification(format!("{} of {} checks failed, first: {} at {}", failed.len(), rows.len(), failed[0].check, failed[0].point))
    });
    Ok(Output { document, failure })
}

#[derive(Serialize)]
struct SimRow {
    k: u64,
    count: u64,
    frequency: f64,
    exact: Option<f64>,
}

#[derive(Serialize)]
struct SimReport {
    target: &'static str,
    samples: u64,
    seed: u64,
    mean: f64,
    tv_to_exact: Option<f64>,
    tv_radius: Option<f64>,
    rows: Vec<SimRow>,
}

/// `simulate` subcommand.
pub fn cmd_simulate(target: Target, args: &LawArgs, samples: u64, cfg: &RunConfig) -> Result<Output, CliError> {
    if samples == 0 {
        return Err(usage("--mc-samples must be positive"));
    }
    let (name, emp, exact): (&'static str, EmpiricalPmf, Option<TruncatedPmf>) = match target {
        Target::Kn => {
            let spec = discrete_spec(args)?;
            let exact = if spec.n() <= 100_000 { Some(kn_full_pmf(&spec, 1e-10)?) } else { None };
            ("kn", montecarlo::simulate_kn(&spec, samples, cfg.seed), exact)
        }
        Target::Star => {
            let spec = discrete_spec(args)?;
            let exact = if spec.n() <= 100_000 { Some(kn_star_full_pmf(&spec, 1e-10)?) } else { None };
            ("kn_star", montecarlo::simulate_kn_star(&spec, samples, cfg.seed)?, exact)
        }
        Target::Near => {
            let spec = near_order_spec(args)?;
            let exact = if spec.n() <= 2_000 { Some(bounds::near_order_mixture_pmf(&spec, 1e-10)?) } else { None };
            ("kn_near", montecarlo::simulate_kn_al(&spec, samples, cfg.seed), exact)
        }
    };
    let (tv, radius) = match &exact {
        Some(t) => {
            let (e, r) = montecarlo::empirical_tv(&emp, t)?;
            (Some(e), Some(r))
        }
        None => (None, None),
    };
    let top = emp.max_outcome().max(exact.as_ref().map_or(0, |t| t.k_max()));
    let bottom = exact.as_ref().map_or(0, |t| t.k_min()).min(emp.iter().next().map_or(0, |(k, _)| k));
    let rows: Vec<SimRow> = (bottom..=top)
        .map(|k| SimRow { k, count: emp.count(k), frequency: emp.freq(k), exact: exact.as_ref().map(|t| t.get(k)) })
        .filter(|r| r.count > 0 || r.exact.is_some_and(|p| p >= 1e-12))
        .collect();
    let report = SimReport { target: name, samples, seed: cfg.seed, mean: emp.mean(), tv_to_exact: tv, tv_radius: radius, rows };
    Ok(Output::ok(match cfg.format {
        Format::Json => json(&report),
        Format::Csv => {
            let mut doc = csv_line(&["k", "count", "frequency", "exact"].map(String::from));
            for r in &report.rows {
                doc += &csv_line(&[r.k.to_string(), r.count.to_string(), num(r.frequency), r.exact.map_or(String::new(), num)]);
            }
            doc
        }
    }))
}

/// Run a parsed configuration.
pub fn run(cfg: &RunConfig) -> Result<Output, CliError> {
    if !(cfg.tol > 0.0) {
        return Err(usage(format!("--tol must be positive, got {}", cfg.tol)));
    }
    match &cfg.command {
        Command::Bound { theorem, law, digits } => cmd_bound(*theorem, law, *digits, cfg),
        Command::Table1 { raw } => cmd_table1(*raw, cfg),
        Command::Figure { figure, points } => cmd_figure(*figure, *points, cfg),
        Command::Verify { mc_samples, fault_scale } => cmd_verify(*mc_samples, *fault_scale, cfg),
        Command::Simulate { target, law, mc_samples } => cmd_simulate(*target, law, *mc_samples, cfg),
    }
}

/// Parse arguments, run, write the document and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let output = match run(&cfg) {
        Ok(out) => out,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    let written = match &cfg.out {
        Some(path) => std::fs::write(path, &output.document).map_err(|e| format!("cannot write {}: {e}", path.display())),
        None => {
            use std::io::Write;
            std::io::stdout().write_all(output.document.as_bytes()).map_err(|e| e.to_string())
        }
    };
    if let Err(msg) = written {
        eprintln!("error: {msg}");
        return 1;
    }
    match output.failure {
        Some(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
        None => 0,
    }
}

/// Render a table of verification rows as aligned text (used by examples).
pub fn summarise(rows: &[VerifyRow]) -> String {
    let mut out = String::new();
    for r in rows {
        let _ = writeln!(out, "{:<9} {:<40} bound {:>10.6}  distance {:>10.6}  {}", r.check, r.point, r.bound, r.distance, if r.pass { "ok" } else { "FAIL" });
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(args: &[&str]) -> RunConfig {
        RunConfig::try_parse_from(std::iter::once("maxties").chain(args.iter().copied())).unwrap()
    }

    fn doc(args: &[&str]) -> String {
        run(&cfg(args)).unwrap().document
    }

    #[test]
    fn bound_table1_cell() {
        let out = doc(&["bound", "thm2", "--law", "geometric", "--mu", "100", "--n", "100000", "--digits", "3"]);
        let row: Vec<&str> = out.lines().nth(1).unwrap().split(',').collect();
        assert_eq!(row[0], "thm2");
        assert_eq!(row[1], "0.33");
    }

    #[test]
    fn bound_geometric_alpha() {
        let c = cfg(&["bound", "thm1a", "--law", "geometric", "--p", "0.2", "--n", "20", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&run(&c).unwrap().document).unwrap();
        assert!((v["params"]["alpha"].as_f64().unwrap() - 0.2).abs() < 1e-10);
        let c = cfg(&["bound", "thm1a", "--law", r#"{"kind":"geometric","p":0.2}"#, "--n", "20", "--format", "json"]);
        let w: serde_json::Value = serde_json::from_str(&run(&c).unwrap().document).unwrap();
        assert_eq!(v, w);
    }

    #[test]
    fn bound_uniform_thm3() {
        let c = cfg(&["bound", "thm3", "--law", "uniform", "--b", "1", "--a", "0.1", "--n", "10", "--ell", "1", "--format", "json"]);
        let v: serde_json::Value = serde_json::from_str(&run(&c).unwrap().document).unwrap();
        assert!((v["bound"].as_f64().unwrap() - 0.561_111).abs() < 1e-6);
    }

    #[test]
    fn table1_document() {
        let out = doc(&["table1"]);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "mu,100000,1000000,10000000,100000000,1000000000");
        assert_eq!(lines[1], "100,0.330,0.131,0.103,0.100,0.100");
        assert_eq!(lines[2], "300,---,0.283,0.094,0.062,0.058");
        assert_eq!(lines[4], "700,---,---,0.184,0.064,0.041");
        assert!(lines[5].ends_with(",0.039"));
        assert!(!out.contains('\r'));
    }

    #[test]
    fn figures() {
        let out = doc(&["figure", "fig1", "--points", "10"]);
        assert_eq!(out.lines().count(), 11);
        let out = doc(&["figure", "fig2", "--points", "21"]);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], "a,bound_n20,bound_n100");
        assert_eq!(lines[1], "0,0,0");
        let col: Vec<f64> = lines[1..].iter().map(|l| l.split(',').nth(1).unwrap().parse().unwrap()).collect();
        assert!(col.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn exit_codes() {
        assert_eq!(main_with_args(["maxties", "bogus"]), 1);
        assert_eq!(main_with_args(["maxties", "bound", "thm1a", "--law", "geometric", "--p", "0.2"]), 1);
        assert_eq!(main_with_args(["maxties", "bound", "thm1a", "--law", "geometric", "--p", "1.5", "--n", "5"]), 1);
        assert_eq!(main_with_args(["maxties", "bound", "thm1a", "--law", "geometric", "--p", "0.3", "--n", "1"]), 2);
        assert_eq!(main_with_args(["maxties", "bound", "thm4", "--n", "5", "--ell", "1", "--eq", "0", "--eq2", "0"]), 2);
        assert_eq!(main_with_args(["maxties", "bound", "thm2", "--law", "tabulated", "--weights", "0.5,0.5", "--n", "3", "--tol", "0"]), 1);
    }

    #[test]
    fn truncation_failure_maps_to_three() {
        let e = CliError::Compute(Error::Truncation { terms: 1, achieved: 1.0 });
        assert_eq!(e.exit_code(), 3);
        assert_eq!(CliError::Compute(Error::Integration { estimate: 0.0, error: 1.0 }).exit_code(), 3);
        assert_eq!(CliError::Verification(String::new()).exit_code(), 4);
    }

    #[test]
    fn verify_negative_control() {
        let out = run(&cfg(&["verify", "--mc-samples", "0", "--fault-scale", "0.5"])).unwrap();
        assert_eq!(out.failure.unwrap().exit_code(), 4);
        assert!(out.document.contains("FAIL"));
    }

    #[test]
    fn simulate_is_byte_stable() {
        let args = ["simulate", "--law", "geometric", "--p", "0.3", "--n", "10", "--mc-samples", "20000", "--seed", "7"];
        assert_eq!(doc(&args), doc(&args));
        let star = doc(&["simulate", "--target", "star", "--law", "tabulated", "--weights", "0.5,0.5", "--n", "2", "--mc-samples", "1000"]);
        assert!(star.starts_with("k,count,frequency,exact\n1,"));
    }
}
