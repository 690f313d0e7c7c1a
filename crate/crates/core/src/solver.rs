//! Certified iteration driver for `x^(k+1) = T^(N)(x^(k))`.
//!
//! The certification index `m` is the first `k` with `E_f(x^(k)) <= 𝓡`. The
//! a posteriori bound `ε_k = α(E_f(x^(k))) ‖W_f(x^(k))‖_∞` is only formed when
//! `E_f(x^(k)) < 𝓡`. The run stops at the first `k >= m` with `ε_k < stop_eps`
//! and `E_f(x^(k)) < 𝓡`.

use serde::{Deserialize, Serialize};

use crate::apcx::{format_sci, to_exact_string, BigComplex, PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::gauges;
use crate::metrics::{self, CVec, GaugeParams, PNorm};
use crate::operators::{self, Failure};
use crate::polynomial::{Polynomial, RootVector};

#[derive(Debug, Clone, PartialEq)]
pub struct SolveConfig {
    pub order: u32,
    pub pnorm: PNorm,
    pub precision_bits: u32,
    pub stop_eps: Real,
    pub max_iter: usize,
    pub compute_extra_iterate: bool,
}

impl SolveConfig {
    pub fn new(order: u32, pnorm: PNorm, precision_bits: u32) -> Result<Self> {
        let ctx = PrecisionContext::new(precision_bits)?;
        let cfg = Self {
            order,
            pnorm,
            precision_bits,
            stop_eps: ctx.parse_real("1e-15")?,
            max_iter: 200,
            compute_extra_iterate: true,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Precision from a decimal exponent, see
    /// [`PrecisionContext::for_decimal_exponent`].
    pub fn with_digits(order: u32, pnorm: PNorm, digits: u32) -> Result<Self> {
        Self::new(order, pnorm, PrecisionContext::for_decimal_exponent(digits).bits())
    }

    pub fn validate(&self) -> Result<()> {
        if self.order < 1 {
            return Err(Error::Config("order N must be at least 1".into()));
        }
        if self.max_iter < 1 {
            return Err(Error::Config("max_iter must be at least 1".into()));
        }
        if !(self.stop_eps > 0) {
            return Err(Error::Config("stop_eps must be positive".into()));
        }
        PrecisionContext::new(self.precision_bits).map(|_| ())
    }

    pub fn ctx(&self) -> PrecisionContext {
        PrecisionContext::new(self.precision_bits).expect("validated precision")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterateRecord {
    pub k: usize,
    pub x: CVec,
    pub w: CVec,
    pub ef: Real,
    pub eps: Option<Real>,
    pub certified: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SolveStatus {
    Converged,
    MaxIterExceeded,
    DomainFailure { detail: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub order: u32,
    pub pnorm: PNorm,
    pub precision_bits: u32,
    pub threshold: Real,
    /// Iterates `x^(0), ..., x^(k)`, ending at the stopping index when the run
    /// converged.
    pub trace: Vec<IterateRecord>,
    /// `x^(k+1)`, evaluated only to report `ε_{k+1}`.
    pub extra: Option<IterateRecord>,
    pub m: Option<usize>,
    pub k_stop: Option<usize>,
    pub eps_k: Option<Real>,
    pub eps_k_plus_1: Option<Real>,
    pub order_claim: u32,
    pub status: SolveStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IterateJson {
    pub k: usize,
    #[serde(rename = "Ef")]
    pub ef: String,
    pub eps: Option<String>,
    pub x: Vec<[String; 2]>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveReportJson {
    pub status: SolveStatus,
    #[serde(rename = "N")]
    pub order: u32,
    pub p: String,
    pub precision_bits: u32,
    pub threshold: String,
    pub m: Option<usize>,
    pub k: Option<usize>,
    pub eps_k: Option<String>,
    pub eps_k1: Option<String>,
    pub trace: Vec<IterateJson>,
    pub extra: Option<IterateJson>,
}

/// Decimal string of a real with `digits` significant digits, or the full
/// round-trip representation when `digits` is `None`.
pub fn real_string(x: &Real, digits: Option<usize>) -> String {
    match digits {
        Some(d) => format_sci(x, d),
        None => to_exact_string(x),
    }
}

pub fn complex_strings(z: &BigComplex, digits: Option<usize>) -> [String; 2] {
    [real_string(&z.re, digits), real_string(&z.im, digits)]
}

impl IterateRecord {
    pub fn to_json(&self, digits: Option<usize>) -> IterateJson {
        IterateJson {
            k: self.k,
            ef: real_string(&self.ef, Some(digits.unwrap_or(17))),
            eps: self.eps.as_ref().map(|e| real_string(e, Some(digits.unwrap_or(17)))),
            x: self.x.iter().map(|z| complex_strings(z, digits)).collect(),
        }
    }
}

impl SolveReport {
    pub fn converged(&self) -> bool {
        self.status == SolveStatus::Converged
    }

    /// JSON view. `digits` bounds the significant digits of the iterate
    /// components; `None` writes them exactly.
    pub fn to_json(&self, digits: Option<usize>) -> SolveReportJson {
        let sci = |e: &Real| real_string(e, Some(digits.unwrap_or(17)));
        SolveReportJson {
            status: self.status.clone(),
            order: self.order,
            p: self.pnorm.to_string(),
            precision_bits: self.precision_bits,
            threshold: sci(&self.threshold),
            m: self.m,
            k: self.k_stop,
            eps_k: self.eps_k.as_ref().map(sci),
            eps_k1: self.eps_k_plus_1.as_ref().map(sci),
            trace: self.trace.iter().map(|r| r.to_json(digits)).collect(),
            extra: self.extra.as_ref().map(|r| r.to_json(digits)),
        }
    }

    pub fn record(&self, k: usize) -> Option<&IterateRecord> {
        self.trace.get(k).or_else(|| self.extra.as_ref().filter(|r| r.k == k))
    }

    /// Trace followed by the extra iterate.
    pub fn all_iterates(&self) -> impl Iterator<Item = &IterateRecord> {
        self.trace.iter().chain(self.extra.iter())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SemilocalCertificate {
    pub certified: bool,
    pub ef: Real,
    pub threshold: Real,
}

fn sup_norm(v: &CVec, ctx: &PrecisionContext) -> Real {
    metrics::p_norm(&metrics::cone_norm(v), PNorm::INF, ctx)
}

/// `E_f(x) < 8 / (3 + sqrt(1 + 8a))²`, which guarantees that `f` has simple
/// zeros and that the iteration converges from `x` with order `2N + 1`.
pub fn certify_semilocal(
    f: &Polynomial,
    x: &CVec,
    params: &GaugeParams,
    ctx: &PrecisionContext,
) -> Result<SemilocalCertificate> {
    let ef = metrics::e_weier(f, x, params.pnorm, ctx)?;
    let threshold = gauges::semilocal_threshold(params, ctx);
    Ok(SemilocalCertificate { certified: ef < threshold, ef, threshold })
}

/// `ε = α(E_f(x)) max_i (|W_i(x)| + δ_i)`, an upper bound on the distance from
/// `x` to the root vector. `δ_i` bounds the rounding error of the computed
/// `W_i`; see [`rounding_allowance`].
pub fn posteriori_bound(
    f: &Polynomial,
    x: &CVec,
    params: &GaugeParams,
    ctx: &PrecisionContext,
) -> Result<Real> {
    let w = operators::weierstrass(f, x, ctx).into_value()?;
    let ef = metrics::scaled_norm(&w, &metrics::dvec(x, ctx), params.pnorm, ctx)?;
    let threshold = gauges::semilocal_threshold(params, ctx);
    bound_from(f, x, &w, &ef, &threshold, params, ctx)
}

/// Bounds `δ_i` on `|W_i - fl(W_i)|` for the values computed by
/// [`operators::weierstrass`] at the precision of `ctx`:
/// `δ_i = 8(n+1)u sum_j |a_j||x_i|^j / |a_0 prod_{j != i}(x_i - x_j)| + 8nu |W_i|`,
/// `u = 2^(1 - bits)`. Near a root `f(x_i)` is computed with heavy
/// cancellation and this term dominates the error of `W_i`.
pub fn rounding_allowance(f: &Polynomial, x: &CVec, w: &CVec, ctx: &PrecisionContext) -> Vec<Real> {
    let n = x.len();
    let u = Real::with_val(ctx.bits(), Real::i_exp(1, 1 - ctx.bits() as i32));
    let eval_factor = ctx.round(&u) * (8 * (n as u32 + 1));
    let quot_factor = ctx.round(&u) * (8 * n as u32);
    let lead = f.leading().abs();
    (0..n)
        .map(|i| {
            let mut den = ctx.round(&lead);
            for j in (0..n).filter(|&j| j != i) {
                den *= (&x[i] - &x[j]).abs();
            }
            let eval = ctx.round(&eval_factor) * f.abs_eval(&x[i], ctx) / den;
            eval + ctx.round(&quot_factor) * w[i].abs()
        })
        .collect()
}

fn bound_from(
    f: &Polynomial,
    x: &CVec,
    w: &CVec,
    ef: &Real,
    threshold: &Real,
    params: &GaugeParams,
    ctx: &PrecisionContext,
) -> Result<Real> {
    if !(*ef < *threshold) {
        return Err(Error::NotCertified { ef: format_sci(ef, 8), threshold: format_sci(threshold, 8) });
    }
    let delta = rounding_allowance(f, x, w, ctx);
    let widest = w
        .iter()
        .zip(delta)
        .map(|(wi, d)| wi.abs() + d)
        .max_by(|a, b| a.partial_cmp(b).expect("finite"))
        .expect("n >= 2");
    Ok(gauges::alpha_fn(ef, params, ctx)? * widest)
}

fn evaluate(
    f: &Polynomial,
    x: CVec,
    k: usize,
    params: &GaugeParams,
    threshold: &Real,
    ctx: &PrecisionContext,
) -> std::result::Result<IterateRecord, Failure> {
    let w = operators::weierstrass(f, &x, ctx).into_result()?;
    let d = metrics::dvec(&x, ctx);
    let ef = metrics::scaled_norm(&w, &d, params.pnorm, ctx).map_err(|_| Failure {
        index: 0,
        reason: operators::FailureReason::NonFinite { level: 0, i: 0 },
    })?;
    let eps = bound_from(f, &x, &w, &ef, threshold, params, ctx).ok();
    let certified = ef <= *threshold;
    Ok(IterateRecord { k, x, w, ef, eps, certified })
}

/// Runs the iteration from `x0` until the stopping rule holds.
pub fn solve(f: &Polynomial, x0: &CVec, cfg: &SolveConfig) -> Result<SolveReport> {
    cfg.validate()?;
    let n = f.degree();
    if x0.len() != n {
        return Err(Error::LengthMismatch { expected: n, got: x0.len() });
    }
    let ctx = cfg.ctx();
    let f = f.round_to(&ctx);
    let params = GaugeParams::new(n, cfg.pnorm, &ctx)?;
    let threshold = gauges::semilocal_threshold(&params, &ctx);
    let stop_eps = ctx.round(&cfg.stop_eps);

    let mut report = SolveReport {
        order: cfg.order,
        pnorm: cfg.pnorm,
        precision_bits: cfg.precision_bits,
        threshold: threshold.clone(),
        trace: Vec::new(),
        extra: None,
        m: None,
        k_stop: None,
        eps_k: None,
        eps_k_plus_1: None,
        order_claim: 2 * cfg.order + 1,
        status: SolveStatus::MaxIterExceeded,
    };
    let domain_failure = |f: Failure, k: usize| SolveStatus::DomainFailure {
        detail: format!("step from x^({k}): {f}"),
    };

    let mut x = x0.round_to(&ctx);
    for k in 0..=cfg.max_iter {
        let rec = match evaluate(&f, x.clone(), k, &params, &threshold, &ctx) {
            Ok(r) => r,
            Err(e) => {
                report.status = SolveStatus::DomainFailure { detail: format!("x^({k}): {e}") };
                return Ok(report);
            }
        };
        if report.m.is_none() && rec.certified {
            report.m = Some(k);
        }
        let stop = report.m.is_some() && rec.eps.as_ref().is_some_and(|e| *e < stop_eps);
        if stop {
            report.k_stop = Some(k);
            report.eps_k = rec.eps.clone();
            report.trace.push(rec);
            report.status = SolveStatus::Converged;
            break;
        }
        report.trace.push(rec);
        if k == cfg.max_iter {
            return Ok(report);
        }
        x = match operators::high_order_T(&f, &x, cfg.order, &ctx).into_result() {
            Ok(v) => v,
            Err(e) => {
                report.status = domain_failure(e, k);
                return Ok(report);
            }
        };
    }

    if cfg.compute_extra_iterate {
        let k = report.k_stop.expect("converged") + 1;
        if let Ok(next) = operators::high_order_T(&f, &x, cfg.order, &ctx).into_result() {
            if let Ok(rec) = evaluate(&f, next, k, &params, &threshold, &ctx) {
                report.eps_k_plus_1 = rec.eps.clone();
                report.extra = Some(rec);
            }
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalCheck {
    pub holds: bool,
    pub e: Real,
    /// `φ_N(E)` when the condition holds.
    pub lambda: Option<Real>,
    /// `ψ_N(E)`, only for the second local condition.
    pub theta: Option<Real>,
}

/// `E(x0) = ‖(x0 - ξ)/d(ξ)‖_p < R`; then `λ = φ_N(E(x0))`.
pub fn check_local_first(
    x0: &CVec,
    xi: &RootVector,
    order: u32,
    params: &GaugeParams,
    ctx: &PrecisionContext,
) -> Result<LocalCheck> {
    let e = metrics::e_root(x0, xi.roots(), params.pnorm, ctx)?;
    let holds = e < gauges::radius_r(params, ctx);
    let lambda = if holds { Some(gauges::phi_n(&e, order, params, ctx)?) } else { None };
    Ok(LocalCheck { holds, e, lambda, theta: None })
}

/// `E(x0) = ‖(x0 - ξ)/d(x0)‖_p <= R` with `b = 2`; then `λ = φ_N(E(x0))` and
/// `θ = ψ_N(E(x0))`.
pub fn check_local_second(
    x0: &CVec,
    xi: &RootVector,
    order: u32,
    params: &GaugeParams,
    ctx: &PrecisionContext,
) -> Result<LocalCheck> {
    let p2 = params.with_b_two();
    let e = metrics::e_current(x0, xi.roots(), p2.pnorm, ctx)?;
    let holds = e <= gauges::radius_r(&p2, ctx);
    let (lambda, theta) = if holds {
        (Some(gauges::phi_n(&e, order, &p2, ctx)?), Some(gauges::psi_n(&e, order, &p2, ctx)?))
    } else {
        (None, None)
    };
    Ok(LocalCheck { holds, e, lambda, theta })
}

/// For each component of `x`, the index of the nearest entry of `xi`, ties
/// going to the lowest index.
pub fn match_roots(x: &CVec, xi: &CVec) -> Vec<usize> {
    x.iter()
        .map(|z| {
            let mut best = 0;
            let mut best_d = (z - &xi[0]).abs();
            for (j, r) in xi.iter().enumerate().skip(1) {
                let d = (z - r).abs();
                if d < best_d {
                    best = j;
                    best_d = d;
                }
            }
            best
        })
        .collect()
}

/// `xi` reordered so that component `i` is the root nearest to `x_i`.
pub fn matched(x: &CVec, xi: &CVec) -> CVec {
    match_roots(x, xi).into_iter().map(|j| xi[j].clone()).collect()
}

/// Root vector to high accuracy: Ehrlich steps from `start` at four times the
/// precision of `ctx` until `ε < 10^(-2 d)`, `d` the decimal digits of `ctx`.
pub fn reference_roots(f: &Polynomial, start: &CVec, ctx: &PrecisionContext) -> Result<RootVector> {
    let hi = ctx.scaled(4);
    let f = f.round_to(&hi);
    let params = GaugeParams::new(f.degree(), PNorm::INF, &hi)?;
    let threshold = gauges::semilocal_threshold(&params, &hi);
    let target = Real::with_val(hi.bits(), Real::u_pow_u(10, 2 * ctx.decimal_digits())).recip();
    let mut x = start.round_to(&hi);
    for _ in 0..500 {
        let w = operators::weierstrass(&f, &x, &hi).into_value()?;
        if w.iter().all(BigComplex::is_zero) {
            return Ok(RootVector::new(x));
        }
        let ef = metrics::scaled_norm(&w, &metrics::dvec(&x, &hi), PNorm::INF, &hi)?;
        if let Ok(eps) = bound_from(&f, &x, &w, &ef, &threshold, &params, &hi) {
            if eps < target {
                return Ok(RootVector::new(x));
            }
        }
        x = operators::ehrlich_T(&f, &x, &hi).into_value()?;
    }
    Err(Error::Config("reference roots did not converge in 500 steps".into()))
}

/// `‖x - ξ‖_∞` at the precision of `ctx`.
pub fn sup_error(x: &CVec, xi: &CVec, ctx: &PrecisionContext) -> Real {
    let diff: CVec = x.iter().zip(xi.iter()).map(|(a, b)| a - b).collect();
    sup_norm(&diff, ctx)
}

/// `log(e_{k+1}/e_k) / log(e_k/e_{k-1})` for the last triple of decreasing
/// errors `e_k = ‖x^(k) - ξ‖_∞` that sit above the rounding floor of the run.
pub fn empirical_order(report: &SolveReport, xi: &RootVector, ctx: &PrecisionContext) -> Result<Real> {
    let last = report.all_iterates().last().ok_or(Error::InsufficientTrace)?;
    let xi = matched(&last.x, xi.roots());
    let hi = PrecisionContext::new(ctx.bits().max(xi.iter().map(BigComplex::prec).max().unwrap_or(64)))?;
    let floor = Real::with_val(hi.bits(), Real::i_exp(1, 64 - report.precision_bits as i32));
    let errors: Vec<Real> = report.all_iterates().map(|r| sup_error(&r.x, &xi, &hi)).collect();
    for k in (1..errors.len().saturating_sub(1)).rev() {
        let (a, b, c) = (&errors[k - 1], &errors[k], &errors[k + 1]);
        let admissible = !c.is_zero() && *c > floor && c < b && b < a && *a < 1;
        if admissible {
            let num = (c.clone() / b).ln();
            let den = (b.clone() / a).ln();
            return Ok(ctx.round(&(num / den)));
        }
    }
    Err(Error::InsufficientTrace)
}
