//! Scalar control functions: the gauge functions of the local convergence results,
//! the convergence radii, and the semilocal threshold with its error factor.
//!
//! Every function raises [`Error::Domain`] outside its interval of
//! definition instead of clamping.

use crate::apcx::{PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::metrics::GaugeParams;

fn domain(what: &str, t: &Real) -> Error {
    Error::Domain(format!("{what} undefined at t = {}", crate::apcx::format_sci(t, 8)))
}

fn check_unit_interval(t: &Real, r: &Real, what: &str) -> Result<()> {
    if t.is_sign_negative() && !t.is_zero() || t > r {
        return Err(domain(what, t));
    }
    Ok(())
}

/// `φ(t) = a t² / ((1 - t)(1 - b t) - a t²)`.
pub fn phi(t: &Real, params: &GaugeParams, ctx: &PrecisionContext) -> Result<Real> {
    let at2 = ctx.round(t).square() * &params.a;
    let den = base_denominator(t, &params.b, ctx) - &at2;
    if den <= 0 {
        return Err(domain("phi", t));
    }
    Ok(at2 / den)
}

/// `(1 - t)(1 - b t)`.
fn base_denominator(t: &Real, b: &Real, ctx: &PrecisionContext) -> Real {
    let one_minus_t = ctx.one() - t;
    let one_minus_bt = ctx.one() - ctx.round(t) * b;
    one_minus_t * one_minus_bt
}

/// `R = 2 / (b + 1 + sqrt((b - 1)² + 8a))`, the root of `φ(t) = 1`.
pub fn radius_r(params: &GaugeParams, ctx: &PrecisionContext) -> Real {
    let bm1 = ctx.round(&params.b) - 1u32;
    let disc = bm1.square() + ctx.round(&params.a) * 8u32;
    let den = ctx.round(&params.b) + 1u32 + disc.sqrt();
    ctx.real(2) / den
}

/// `ψ(t) = ((1 - t)(1 - b t) - a t²) / (1 - t - a t²)`.
pub fn psi1(t: &Real, params: &GaugeParams, ctx: &PrecisionContext) -> Result<Real> {
    let at2 = ctx.round(t).square() * &params.a;
    let den = ctx.one() - t - &at2;
    if den <= 0 {
        return Err(domain("psi", t));
    }
    Ok((base_denominator(t, &params.b, ctx) - at2) / den)
}

/// `φ_N` on `[0, R]`: `φ_0 = 1`,
/// `φ_{N+1}(t) = a t² φ_N(t) / ((1 - t)(1 - b t) - a t² φ_N(t))`.
pub fn phi_n(t: &Real, order: u32, params: &GaugeParams, ctx: &PrecisionContext) -> Result<Real> {
    check_unit_interval(t, &radius_r(params, ctx), "phi_N")?;
    let at2 = ctx.round(t).square() * &params.a;
    let base = base_denominator(t, &params.b, ctx);
    let mut value = ctx.one();
    for _ in 0..order {
        let num = ctx.round(&at2) * &value;
        let den = ctx.round(&base) - &num;
        if den <= 0 {
            return Err(domain("phi_N", t));
        }
        value = num / den;
    }
    Ok(value)
}

/// `t φ_N(t)`, a gauge function of order `2N + 1` on `[0, R]`.
pub fn varphi_n(t: &Real, order: u32, params: &GaugeParams, ctx: &PrecisionContext) -> Result<Real> {
    Ok(phi_n(t, order, params, ctx)? * t)
}

/// `β_N(t) = a t² φ_{N-1}(t) / (1 - t - a t² φ_{N-1}(t))`, with `b = 2`.
pub fn beta_n(t: &Real, order: u32, params: &GaugeParams, ctx: &PrecisionContext) -> Result<Real> {
    if order == 0 {
        return Err(Error::Domain("beta_N needs N >= 1".into()));
    }
    let p2 = params.with_b_two();
    let prev = phi_n(t, order - 1, &p2, ctx)?;
    let num = ctx.round(t).square() * &p2.a * prev;
    let den = ctx.one() - t - &num;
    if den <= 0 {
        return Err(domain("beta_N", t));
    }
    Ok(num / den)
}

/// `ψ_N(t) = 1 - 2t(1 + β_N(t))`, with `b = 2`.
pub fn psi_n(t: &Real, order: u32, params: &GaugeParams, ctx: &PrecisionContext) -> Result<Real> {
    let beta = beta_n(t, order, params, ctx)?;
    Ok(ctx.one() - (beta + 1u32) * ctx.round(t) * 2u32)
}

/// `(β_N(t), ψ_N(t))`.
pub fn beta_psi_n(
    t: &Real,
    order: u32,
    params: &GaugeParams,
    ctx: &PrecisionContext,
) -> Result<(Real, Real)> {
    let beta = beta_n(t, order, params, ctx)?;
    let psi = ctx.one() - (beta.clone() + 1u32) * ctx.round(t) * 2u32;
    Ok((beta, psi))
}

/// `α(t) = 2 / (1 - (a - 1)t + sqrt((1 - (a - 1)t)² - 4t))`, the a posteriori
/// error factor.
pub fn alpha_fn(t: &Real, params: &GaugeParams, ctx: &PrecisionContext) -> Result<Real> {
    let lin = ctx.one() - (ctx.round(&params.a) - 1u32) * t;
    if lin <= 0 {
        return Err(domain("alpha", t));
    }
    let rad = lin.clone().square() - ctx.round(t) * 4u32;
    if rad.is_sign_negative() && !rad.is_zero() {
        return Err(domain("alpha", t));
    }
    Ok(ctx.real(2) / (lin + rad.sqrt()))
}

/// `8 / (3 + sqrt(1 + 8a))²`, the bound on `E_f` that certifies convergence.
pub fn semilocal_threshold(params: &GaugeParams, ctx: &PrecisionContext) -> Real {
    let s = (ctx.round(&params.a) * 8u32 + 1u32).sqrt() + 3u32;
    ctx.real(8) / s.square()
}

/// `R_h = 2 / (b + 1 + sqrt((b - 1)² + 4a(1 + 1/h²)))`, where `φ(R_h) = h²`.
pub fn radius_rh(h: &Real, params: &GaugeParams, ctx: &PrecisionContext) -> Result<Real> {
    if !(*h > 0 && *h < 1) {
        return Err(domain("R_h", h));
    }
    let inv_h2 = ctx.one() / ctx.round(h).square();
    let bm1 = ctx.round(&params.b) - 1u32;
    let disc = bm1.square() + ctx.round(&params.a) * 4u32 * (inv_h2 + 1u32);
    let den = ctx.round(&params.b) + 1u32 + disc.sqrt();
    Ok(ctx.real(2) / den)
}
