//! Vectors in C^n and R^n, cone norms, component distances and the
//! functions of initial conditions.

use std::fmt;
use std::ops::{Deref, Index};
use std::str::FromStr;

use rug::ops::Pow;

use crate::apcx::{BigComplex, PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::operators;
use crate::polynomial::Polynomial;

/// Approximation vector in C^n.
#[derive(Debug, Clone, PartialEq)]
pub struct CVec(Vec<BigComplex>);

impl CVec {
    pub fn new(entries: Vec<BigComplex>) -> Self {
        Self(entries)
    }

    pub fn into_inner(self) -> Vec<BigComplex> {
        self.0
    }

    pub fn round_to(&self, ctx: &PrecisionContext) -> Self {
        self.0.iter().map(|z| z.round_to(ctx)).collect()
    }

    /// Component-wise difference.
    pub fn sub(&self, other: &CVec) -> CVec {
        self.0.iter().zip(other.iter()).map(|(a, b)| a - b).collect()
    }

    /// True when two components are exactly equal.
    pub fn has_duplicates(&self) -> bool {
        (0..self.len()).any(|i| ((i + 1)..self.len()).any(|j| self[i] == self[j]))
    }
}

impl Deref for CVec {
    type Target = [BigComplex];
    fn deref(&self) -> &[BigComplex] {
        &self.0
    }
}

impl FromIterator<BigComplex> for CVec {
    fn from_iter<I: IntoIterator<Item = BigComplex>>(iter: I) -> Self {
        Self(iter.into_iter().collect())
    }
}

/// Nonnegative vector in R^n.
#[derive(Debug, Clone, PartialEq)]
pub struct RVec(Vec<Real>);

impl RVec {
    pub fn new(entries: Vec<Real>) -> Result<Self> {
        if let Some(i) = entries.iter().position(|t| t.is_sign_negative() && !t.is_zero()) {
            return Err(Error::Domain(format!("entry {i} of a cone vector is negative")));
        }
        Ok(Self(entries))
    }

    pub fn into_inner(self) -> Vec<Real> {
        self.0
    }

    /// Largest entry, i.e. the max-norm.
    pub fn max(&self) -> Real {
        self.0
            .iter()
            .max_by(|a, b| a.partial_cmp(b).expect("finite entries"))
            .cloned()
            .expect("nonempty vector")
    }

    /// Coordinate-wise ordering `self ⪯ other`.
    pub fn precedes(&self, other: &RVec) -> bool {
        self.len() == other.len() && self.iter().zip(other.iter()).all(|(a, b)| a <= b)
    }
}

impl Deref for RVec {
    type Target = [Real];
    fn deref(&self) -> &[Real] {
        &self.0
    }
}

impl Index<usize> for CVec {
    type Output = BigComplex;
    fn index(&self, i: usize) -> &BigComplex {
        &self.0[i]
    }
}

/// Exponent `p` of an ℓ_p norm: a rational `num/den >= 1` or infinity.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PNorm {
    Finite { num: u32, den: u32 },
    Inf,
}

impl PNorm {
    pub const ONE: PNorm = PNorm::Finite { num: 1, den: 1 };
    pub const TWO: PNorm = PNorm::Finite { num: 2, den: 1 };
    pub const INF: PNorm = PNorm::Inf;

    pub fn finite(num: u32, den: u32) -> Result<Self> {
        if den == 0 || num < den {
            return Err(Error::Config(format!("p = {num}/{den} is not in [1, inf)")));
        }
        Ok(PNorm::Finite { num, den })
    }

    /// `1/q = 1 - 1/p`, zero for p = 1 and one for p = inf.
    pub fn inv_q(&self, ctx: &PrecisionContext) -> Real {
        match *self {
            PNorm::Inf => ctx.one(),
            PNorm::Finite { num, den } => ctx.real(num - den) / ctx.real(num),
        }
    }

    /// `1/p`, zero for p = inf.
    pub fn inv_p(&self, ctx: &PrecisionContext) -> Real {
        match *self {
            PNorm::Inf => ctx.zero(),
            PNorm::Finite { num, den } => ctx.real(den) / ctx.real(num),
        }
    }

    /// The conjugate exponent q.
    pub fn conjugate(&self) -> PNorm {
        match *self {
            PNorm::Inf => PNorm::ONE,
            PNorm::Finite { num, den } if num == den => PNorm::Inf,
            PNorm::Finite { num, den } => PNorm::Finite { num, den: num - den },
        }
    }
}

impl fmt::Display for PNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            PNorm::Inf => f.write_str("inf"),
            PNorm::Finite { num, den: 1 } => write!(f, "{num}"),
            PNorm::Finite { num, den } => write!(f, "{num}/{den}"),
        }
    }
}

impl FromStr for PNorm {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.eq_ignore_ascii_case("inf") || s == "∞" {
            return Ok(PNorm::Inf);
        }
        let bad = || Error::Config(format!("cannot parse p = {s:?}"));
        let (num, den) = match s.split_once('/') {
            Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
            None => (s.parse().map_err(|_| bad())?, 1),
        };
        PNorm::finite(num, den)
    }
}

/// The constants `a = (n-1)^(1/q)` and `b = 2^(1/q)` that parameterize every
/// gauge function and radius, together with the degree and norm they came from.
#[derive(Debug, Clone, PartialEq)]
pub struct GaugeParams {
    pub n: usize,
    pub pnorm: PNorm,
    pub a: Real,
    pub b: Real,
}

impl GaugeParams {
    pub fn new(n: usize, pnorm: PNorm, ctx: &PrecisionContext) -> Result<Self> {
        if n < 2 {
            return Err(Error::Config(format!("degree must be at least 2, got {n}")));
        }
        let e = pnorm.inv_q(ctx);
        let n1 = ctx.real(n as u64 - 1);
        let a = ctx.pow(&n1, &e)?;
        let b = ctx.pow(&ctx.real(2), &e)?;
        Ok(Self { n, pnorm, a, b })
    }

    /// Explicit `a > 0`, `b >= 1`.
    pub fn with_constants(n: usize, pnorm: PNorm, a: Real, b: Real) -> Result<Self> {
        if !(a > 0) || !(b >= 1) {
            return Err(Error::Config("gauge constants need a > 0 and b >= 1".into()));
        }
        Ok(Self { n, pnorm, a, b })
    }

    /// The same `a` with `b = 2`, as used by the second local convergence check and the
    /// semilocal threshold.
    pub fn with_b_two(&self) -> Self {
        let b = Real::with_val(self.b.prec(), 2u32);
        Self { b, ..self.clone() }
    }
}

/// Component-wise modulus.
pub fn cone_norm(x: &CVec) -> RVec {
    RVec(x.iter().map(BigComplex::abs).collect())
}

/// ℓ_p norm of a nonnegative vector.
pub fn p_norm(v: &RVec, pn: PNorm, ctx: &PrecisionContext) -> Real {
    match pn {
        PNorm::Inf => ctx.round(&v.max()),
        PNorm::ONE => v.iter().fold(ctx.zero(), |acc, t| acc + t),
        PNorm::TWO => {
            let s = v.iter().fold(ctx.zero(), |acc, t| acc + &Real::with_val(ctx.bits(), t.square_ref()));
            s.sqrt()
        }
        PNorm::Finite { num, den } => {
            let p = ctx.real(num) / ctx.real(den);
            let s = v
                .iter()
                .fold(ctx.zero(), |acc, t| acc + &Real::with_val(ctx.bits(), t.pow(&p)));
            let inv_p = ctx.real(den) / ctx.real(num);
            Real::with_val(ctx.bits(), (&s).pow(&inv_p))
        }
    }
}

/// `d_i(x) = min_{j != i} |x_i - x_j|`.
pub fn dvec(x: &CVec, ctx: &PrecisionContext) -> RVec {
    let n = x.len();
    let mut d: Vec<Option<Real>> = vec![None; n];
    for i in 0..n {
        for j in (i + 1)..n {
            let dist = (&x[i] - &x[j]).abs();
            for k in [i, j] {
                if d[k].as_ref().map_or(true, |m| dist < *m) {
                    d[k] = Some(dist.clone());
                }
            }
        }
    }
    RVec(d.into_iter().map(|m| ctx.round(&m.unwrap_or_else(|| ctx.zero()))).collect())
}

/// `x / y = (|x_1| / y_1, ..., |x_n| / y_n)`.
pub fn ratio_vec(x: &CVec, y: &RVec) -> Result<RVec> {
    if x.len() != y.len() {
        return Err(Error::LengthMismatch { expected: y.len(), got: x.len() });
    }
    x.iter()
        .zip(y.iter())
        .enumerate()
        .map(|(i, (xi, yi))| {
            if yi.is_zero() {
                Err(Error::DegenerateDenominator { index: i })
            } else {
                Ok(xi.abs() / yi)
            }
        })
        .collect::<Result<Vec<_>>>()
        .map(RVec)
}

/// `‖x / d‖_p` for a correction or error vector `x` and distances `d`.
pub fn scaled_norm(x: &CVec, d: &RVec, pn: PNorm, ctx: &PrecisionContext) -> Result<Real> {
    Ok(p_norm(&ratio_vec(x, d)?, pn, ctx))
}

/// `E(x) = ‖(x - ξ) / d(ξ)‖_p`, the first function of initial conditions.
pub fn e_root(x: &CVec, xi: &CVec, pn: PNorm, ctx: &PrecisionContext) -> Result<Real> {
    scaled_norm(&x.sub(xi), &dvec(xi, ctx), pn, ctx)
}

/// `E(x) = ‖(x - ξ) / d(x)‖_p`, the second function of initial conditions.
pub fn e_current(x: &CVec, xi: &CVec, pn: PNorm, ctx: &PrecisionContext) -> Result<Real> {
    scaled_norm(&x.sub(xi), &dvec(x, ctx), pn, ctx)
}

/// `E_f(x) = ‖W_f(x) / d(x)‖_p`, computable without knowing the roots.
pub fn e_weier(f: &Polynomial, x: &CVec, pn: PNorm, ctx: &PrecisionContext) -> Result<Real> {
    let w = operators::weierstrass(f, x, ctx).into_value()?;
    scaled_norm(&w, &dvec(x, ctx), pn, ctx)
}
