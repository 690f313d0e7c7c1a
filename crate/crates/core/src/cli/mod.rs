//! Command-line front end.

pub mod experiments;
pub mod table;
pub mod trajectory;

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

pub use experiments::{aberth_init, builtin_experiments, experiment, Experiment, InitJson, InitSpec, PolySpec};
pub use table::{run_table, RowOutcome, TableOptions, TableRow};
pub use trajectory::export_trajectories;

use crate::apcx::PrecisionContext;
use crate::error::{Error, Result};
use crate::metrics::PNorm;
use crate::polynomial::PolynomialJson;
use crate::solver::{self, SolveConfig};

/// Environment variable overriding the default precision, in decimal digits.
pub const DIGITS_ENV: &str = "EHRLICH_DEFAULT_DIGITS";

#[derive(Debug, Parser)]
#[command(name = "ehrlich", version, about = "Certified high-order Ehrlich iteration")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one solve and report m, k and the error bounds.
    Solve(SolveArgs),
    /// Reproduce a table of an experiment, one row per order N.
    Table(TableArgs),
    /// List the first iterates of ex71 with N = 10 at 15 decimals.
    Table2(Table2Args),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// Built-in experiment: ex71, ex72, ex73 or ex74.
    #[arg(long)]
    pub experiment: Option<String>,
    /// Polynomial JSON file: {"degree": n, "coeffs": [re0, im0, re1, im1, ...]}, leading first.
    #[arg(long)]
    pub poly: Option<PathBuf>,
    /// Initial vector JSON file: {"x": [["re", "im"], ...]}.
    #[arg(long)]
    pub init: Option<PathBuf>,
    /// Aberth initialization `a1,r0`.
    #[arg(long, allow_hyphen_values = true)]
    pub aberth: Option<String>,
    #[arg(long, default_value_t = 1)]
    pub order: u32,
    #[arg(long, default_value = "inf")]
    pub p: PNorm,
    /// Working precision in decimal digits.
    #[arg(long)]
    pub digits: Option<u32>,
    #[arg(long, default_value = "1e-15")]
    pub stop_eps: String,
    #[arg(long, default_value_t = 200)]
    pub max_iter: usize,
    /// Write the JSON report here.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the iterate trajectories as CSV here.
    #[arg(long)]
    pub trajectory: Option<PathBuf>,
    /// Significant digits of iterate components in the outputs; exact when omitted.
    #[arg(long)]
    pub value_digits: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    #[arg(long)]
    pub experiment: String,
    /// Orders to run, e.g. `1..10`, `2,5,7` or `1..3,30`.
    #[arg(long)]
    pub rows: Option<String>,
    /// Add the high-precision rows (N = 30, or N = 100 for ex71).
    #[arg(long)]
    pub extended: bool,
    #[arg(long, default_value = "inf")]
    pub p: PNorm,
    /// Precision for every row, in decimal digits, instead of the experiment plan.
    #[arg(long)]
    pub digits: Option<u32>,
    /// Output file, CSV or `.json`; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct Table2Args {
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub digits: Option<u32>,
}

/// `EHRLICH_DEFAULT_DIGITS`, if set.
pub fn env_digits() -> Result<Option<u32>> {
    match std::env::var(DIGITS_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| Error::Config(format!("{DIGITS_ENV}={v:?} is not a digit count"))),
        Err(_) => Ok(None),
    }
}

/// Parses `1..10`, `2,5,7` and mixtures such as `1..3,30`.
pub fn parse_rows(spec: &str) -> Result<Vec<u32>> {
    let bad = || Error::Config(format!("cannot parse rows {spec:?}"));
    let mut out = Vec::new();
    for part in spec.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if let Some((a, b)) = part.split_once("..") {
            let a: u32 = a.trim().parse().map_err(|_| bad())?;
            let b: u32 = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
            if a > b {
                return Err(bad());
            }
            out.extend(a..=b);
        } else {
            out.push(part.parse().map_err(|_| bad())?);
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    Ok(serde_json::from_reader(std::fs::File::open(path)?)?)
}

fn parse_aberth(spec: &str) -> Result<InitSpec> {
    let (a1, r0) = spec
        .split_once(',')
        .ok_or_else(|| Error::Config(format!("--aberth expects a1,r0, got {spec:?}")))?;
    Ok(InitSpec::Aberth { a1: (a1.trim().to_string(), "0".into()), r0: r0.trim().to_string() })
}

fn output(path: Option<&PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(std::fs::File::create(p)?),
        None => Box::new(std::io::stdout()),
    })
}

fn run_solve(a: &SolveArgs) -> Result<i32> {
    let exp = a.experiment.as_deref().map(experiment).transpose()?;
    let poly = match (&a.poly, &exp) {
        (Some(p), _) => PolySpec::Json(read_json::<PolynomialJson>(p)?),
        (None, Some(e)) => e.polynomial.clone(),
        (None, None) => return Err(Error::Config("give --experiment or --poly".into())),
    };
    let init = match (&a.init, &a.aberth, &exp) {
        (Some(p), _, _) => InitSpec::from_json(&read_json::<InitJson>(p)?),
        (None, Some(s), _) => parse_aberth(s)?,
        (None, None, Some(e)) => e.init.clone(),
        (None, None, None) => return Err(Error::Config("give --init, --aberth or --experiment".into())),
    };
    let digits = a
        .digits
        .or(env_digits()?)
        .or_else(|| exp.as_ref().and_then(|e| e.digits_for(a.order)))
        .unwrap_or(table::FALLBACK_DIGITS);
    let mut cfg = SolveConfig::with_digits(a.order, a.p, digits)?;
    let ctx: PrecisionContext = cfg.ctx();
    cfg.stop_eps = ctx.parse_real(&a.stop_eps)?;
    cfg.max_iter = a.max_iter;
    let f = poly.build(&ctx)?;
    let x0 = init.build(f.degree(), &ctx)?;
    let report = solver::solve(&f, &x0, &cfg)?;

    if let Some(path) = &a.out {
        serde_json::to_writer_pretty(std::fs::File::create(path)?, &report.to_json(a.value_digits))?;
    }
    if let Some(path) = &a.trajectory {
        export_trajectories(&report, path, a.value_digits)?;
    }
    let row = TableRow::from_report(&report);
    let show = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".into());
    let show_n = |v: Option<usize>| v.map_or_else(|| "-".into(), |v| v.to_string());
    println!(
        "status={} N={} bits={} m={} Ef_m={} eps_m={} k={} eps_k={} eps_k1={}",
        row.status,
        row.order,
        row.precision_bits,
        show_n(row.m),
        show(&row.ef_m),
        show(&row.eps_m),
        show_n(row.k),
        show(&row.eps_k),
        show(&row.eps_k1)
    );
    Ok(if report.converged() { 0 } else { 1 })
}

fn run_table_cmd(a: &TableArgs) -> Result<i32> {
    let exp = experiment(&a.experiment)?;
    let mut rows = match &a.rows {
        Some(s) => parse_rows(s)?,
        None => exp.table_rows.clone(),
    };
    if a.extended {
        rows.extend(exp.extended_rows.iter().filter(|n| !rows.contains(n)).copied().collect::<Vec<_>>());
    }
    let opts = TableOptions { pnorm: a.p, digits: a.digits.or(env_digits()?), ..TableOptions::default() };
    let outcomes = run_table(&exp, &rows, &opts)?;
    let table_rows: Vec<TableRow> = outcomes.iter().map(|o| o.row.clone()).collect();
    match &a.out {
        Some(p) => table::write_table(&table_rows, p)?,
        None => table::write_csv(&table_rows, std::io::stdout())?,
    }
    Ok(if table_rows.iter().all(TableRow::converged) { 0 } else { 1 })
}

/// Runs ex71 with `N = 10` and lists `x^(0)`, `x^(1)`, `x^(2)`.
pub fn table2_listing(digits: Option<u32>) -> Result<(String, bool)> {
    let exp = experiment("ex71")?;
    let opts = TableOptions { digits, ..TableOptions::default() };
    let report = table::solve_row(&exp, 10, &opts)?;
    Ok((table::iterate_listing(&report, 2), report.converged()))
}

fn run_table2(a: &Table2Args) -> Result<i32> {
    let (text, ok) = table2_listing(a.digits.or(env_digits()?))?;
    output(a.out.as_ref())?.write_all(text.as_bytes())?;
    Ok(if ok { 0 } else { 1 })
}

/// Executes a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> Result<i32> {
    match &cli.command {
        Command::Solve(a) => run_solve(a),
        Command::Table(a) => run_table_cmd(a),
        Command::Table2(a) => run_table2(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rows_parsing() {
        assert_eq!(parse_rows("1..10").unwrap(), (1..=10).collect::<Vec<_>>());
        assert_eq!(parse_rows("2,5,7").unwrap(), vec![2, 5, 7]);
        assert_eq!(parse_rows("1..3,30").unwrap(), vec![1, 2, 3, 30]);
        assert_eq!(parse_rows("1..=2").unwrap(), vec![1, 2]);
        assert!(parse_rows("").is_err());
        assert!(parse_rows("5..1").is_err());
        assert!(parse_rows("a").is_err());
    }

    #[test]
    fn command_line() {
        let cli = Cli::try_parse_from(["ehrlich", "solve", "--experiment", "ex71", "--order", "3", "--p", "2"]).unwrap();
        match cli.command {
            Command::Solve(a) => {
                assert_eq!(a.order, 3);
                assert_eq!(a.p, PNorm::TWO);
                assert_eq!(a.stop_eps, "1e-15");
            }
            _ => panic!("expected solve"),
        }
        let cli = Cli::try_parse_from(["ehrlich", "table", "--experiment", "ex72", "--rows", "1..10", "--extended"]).unwrap();
        assert!(matches!(cli.command, Command::Table(TableArgs { extended: true, .. })));
        assert!(Cli::try_parse_from(["ehrlich", "table"]).is_err());
        assert!(parse_aberth("1,2").is_ok());
        assert!(parse_aberth("12").is_err());
    }
}
