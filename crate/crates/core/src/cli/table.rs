//! Table runs: one solve per order `N`, formatted like the published tables.

use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::experiments::Experiment;
use crate::apcx::{format_fixed, format_fixed_rounded_then_truncated, format_sci_truncated, BigComplex, PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::metrics::PNorm;
use crate::solver::{self, SolveConfig, SolveReport, SolveStatus};

/// Significant digits of the `ε` mantissas (six after the point).
pub const EPS_DIGITS: usize = 7;
/// Decimals of `E_f`.
pub const EF_DECIMALS: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableRow {
    #[serde(rename = "N")]
    pub order: u32,
    pub m: Option<usize>,
    #[serde(rename = "Ef_m")]
    pub ef_m: Option<String>,
    pub eps_m: Option<String>,
    pub k: Option<usize>,
    pub eps_k: Option<String>,
    pub eps_k1: Option<String>,
    pub status: String,
    pub precision_bits: u32,
}

pub fn format_eps(e: &Real) -> String {
    format_sci_truncated(e, EPS_DIGITS)
}

pub fn format_ef(e: &Real) -> String {
    format_fixed(e, EF_DECIMALS, true)
}

fn status_name(s: &SolveStatus) -> String {
    match s {
        SolveStatus::Converged => "converged".into(),
        SolveStatus::MaxIterExceeded => "max_iter_exceeded".into(),
        SolveStatus::DomainFailure { detail } => format!("domain_failure: {detail}"),
    }
}

impl TableRow {
    pub fn from_report(r: &SolveReport) -> Self {
        let at_m = r.m.and_then(|m| r.record(m));
        Self {
            order: r.order,
            m: r.m,
            ef_m: at_m.map(|rec| format_ef(&rec.ef)),
            eps_m: at_m.and_then(|rec| rec.eps.as_ref()).map(format_eps),
            k: r.k_stop,
            eps_k: r.eps_k.as_ref().map(format_eps),
            eps_k1: r.eps_k_plus_1.as_ref().map(format_eps),
            status: status_name(&r.status),
            precision_bits: r.precision_bits,
        }
    }

    fn failed(order: u32, bits: u32, e: &Error) -> Self {
        Self {
            order,
            m: None,
            ef_m: None,
            eps_m: None,
            k: None,
            eps_k: None,
            eps_k1: None,
            status: format!("error: {e}"),
            precision_bits: bits,
        }
    }

    pub fn converged(&self) -> bool {
        self.status == "converged"
    }
}

pub struct RowOutcome {
    pub row: TableRow,
    pub report: Result<SolveReport>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TableOptions {
    pub pnorm: PNorm,
    /// Overrides the experiment plan for every row.
    pub digits: Option<u32>,
    pub max_iter: usize,
}

impl Default for TableOptions {
    fn default() -> Self {
        Self { pnorm: PNorm::INF, digits: None, max_iter: 200 }
    }
}

/// Fallback when neither the caller nor the experiment fixes a precision.
pub const FALLBACK_DIGITS: u32 = 100;

pub fn row_digits(exp: &Experiment, order: u32, digits: Option<u32>) -> u32 {
    digits.or_else(|| exp.digits_for(order)).unwrap_or(FALLBACK_DIGITS)
}

pub fn solve_row(exp: &Experiment, order: u32, opts: &TableOptions) -> Result<SolveReport> {
    let digits = row_digits(exp, order, opts.digits);
    let mut cfg = SolveConfig::with_digits(order, opts.pnorm, digits)?;
    cfg.max_iter = opts.max_iter;
    let ctx = cfg.ctx();
    let f = exp.polynomial(&ctx)?;
    let x0 = exp.initial(&ctx)?;
    solver::solve(&f, &x0, &cfg)
}

/// Solves each requested row. Rows run concurrently; the result keeps the
/// order of `rows`. A failing row does not stop the others.
pub fn run_table(exp: &Experiment, rows: &[u32], opts: &TableOptions) -> Result<Vec<RowOutcome>> {
    let known = exp.all_rows();
    if let Some(bad) = rows.iter().find(|n| !known.contains(n)) {
        return Err(Error::Config(format!("row N={bad} is not a row of {}", exp.name)));
    }
    Ok(rows
        .par_iter()
        .map(|&n| {
            let report = solve_row(exp, n, opts);
            let row = match &report {
                Ok(r) => TableRow::from_report(r),
                Err(e) => {
                    let bits = PrecisionContext::for_decimal_exponent(row_digits(exp, n, opts.digits)).bits();
                    TableRow::failed(n, bits, e)
                }
            };
            RowOutcome { row, report }
        })
        .collect())
}

pub fn write_csv<W: Write>(rows: &[TableRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["N", "m", "Ef_m", "eps_m", "k", "eps_k", "eps_k1", "status"])?;
    let opt = |s: &Option<String>| s.clone().unwrap_or_default();
    let opt_n = |s: Option<usize>| s.map(|v| v.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.order.to_string(),
            opt_n(r.m),
            opt(&r.ef_m),
            opt(&r.eps_m),
            opt_n(r.k),
            opt(&r.eps_k),
            opt(&r.eps_k1),
            r.status.clone(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

/// Writes CSV, or JSON when the path ends in `.json`.
pub fn write_table(rows: &[TableRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    if path.extension().is_some_and(|e| e == "json") {
        serde_json::to_writer_pretty(file, rows)?;
        Ok(())
    } else {
        write_csv(rows, file)
    }
}

/// Significant digits kept before the listing truncates to a fixed number of
/// decimals.
pub const LISTING_SIG_DIGITS: usize = 17;

/// `re ± im i` with both parts to `decimals` places, rounded to
/// [`LISTING_SIG_DIGITS`] significant digits and then truncated.
pub fn format_complex_fixed(z: &BigComplex, decimals: usize) -> String {
    let re = format_fixed_rounded_then_truncated(&z.re, LISTING_SIG_DIGITS, decimals);
    let im = format_fixed_rounded_then_truncated(&z.im, LISTING_SIG_DIGITS, decimals);
    match im.strip_prefix('-') {
        Some(abs) => format!("{re} - {abs}i"),
        None => format!("{re} + {im}i"),
    }
}

/// Iterates `x^(0)`, ..., `x^(k)` of a run, one line per component, at 15
/// decimals.
pub fn iterate_listing(report: &SolveReport, up_to: usize) -> String {
    let mut out = String::new();
    for rec in report.trace.iter().take(up_to + 1) {
        out.push_str(&format!("k = {}\n", rec.k));
        for (i, z) in rec.x.iter().enumerate() {
            out.push_str(&format!("  x{} = {}\n", i + 1, format_complex_fixed(z, 15)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cli::experiments::experiment;

    #[test]
    fn ex71_low_rows() {
        let exp = experiment("ex71").unwrap();
        let out = run_table(&exp, &[1, 2], &TableOptions::default()).unwrap();
        let r1 = &out[0].row;
        assert_eq!((r1.m, r1.k), (Some(2), Some(4)));
        assert_eq!(r1.ef_m.as_deref(), Some("0.010032"));
        assert_eq!(r1.eps_m.as_deref(), Some("1.457548e-2"));
        let r2 = &out[1].row;
        assert_eq!((r2.m, r2.k), (Some(1), Some(3)));
        assert_eq!(r2.ef_m.as_deref(), Some("0.067725"));
        assert_eq!(r2.eps_m.as_deref(), Some("1.242914e-1"));
        assert_eq!(r2.eps_k.as_deref(), Some("1.347060e-38"));
        let mut buf = Vec::new();
        write_csv(&[r1.clone(), r2.clone()], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert!(text.starts_with("N,m,Ef_m,eps_m,k,eps_k,eps_k1,status\n1,2,0.010032,1.457548e-2,4,"));
        assert!(run_table(&exp, &[11], &TableOptions::default()).is_err());
    }

    #[test]
    fn mantissa_width() {
        let c = PrecisionContext::new(128).unwrap();
        for s in ["1.5e-3", "9.9999999e-200", "1e-40", "3.0e-7"] {
            let t = format_eps(&c.parse_real(s).unwrap());
            let mant = t.split('e').next().unwrap();
            assert_eq!(mant.replace('.', "").len(), EPS_DIGITS, "{t}");
        }
    }

    #[test]
    fn complex_listing() {
        let c = PrecisionContext::new(128).unwrap();
        let z = c.parse_complex("0.0000002779626371", "-0.9999995783930629").unwrap();
        assert_eq!(format_complex_fixed(&z, 15), "0.000000277962637 - 0.999999578393062i");
        let z = c.parse_complex("-1e-30", "1").unwrap();
        assert_eq!(format_complex_fixed(&z, 3), "0.000 + 1.000i");
    }
}
