//! Complex polynomials with leading-first coefficient storage.

use serde::{Deserialize, Serialize};

use crate::apcx::{to_exact_string, BigComplex, PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::metrics::CVec;

/// `f(z) = a0 z^n + a1 z^(n-1) + ... + an`, stored as `[a0, a1, ..., an]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polynomial {
    coeffs: Vec<BigComplex>,
}

impl Polynomial {
    /// A solve target: degree at least 2 and nonzero leading coefficient.
    pub fn new(coeffs: Vec<BigComplex>) -> Result<Self> {
        if coeffs.len() < 3 {
            return Err(Error::InvalidPolynomial(format!(
                "degree must be at least 2, got {}",
                coeffs.len().saturating_sub(1)
            )));
        }
        if coeffs[0].is_zero() {
            return Err(Error::InvalidPolynomial(
                "leading coefficient is zero".into(),
            ));
        }
        if let Some(i) = coeffs.iter().position(|c| !c.is_finite()) {
            return Err(Error::InvalidPolynomial(format!(
                "coefficient {i} is not finite"
            )));
        }
        Ok(Self { coeffs })
    }

    /// Builds from integer coefficients (leading first).
    pub fn from_integers(coeffs: &[i64], ctx: &PrecisionContext) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| ctx.complex(c, 0)).collect())
    }

    /// Derived polynomials (derivatives) are exempt from the degree check.
    fn derived(coeffs: Vec<BigComplex>) -> Self {
        Self { coeffs }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigComplex] {
        &self.coeffs
    }

    pub fn leading(&self) -> &BigComplex {
        &self.coeffs[0]
    }

    /// Constant term `an`.
    pub fn constant(&self) -> &BigComplex {
        &self.coeffs[self.coeffs.len() - 1]
    }

    /// Largest coefficient modulus.
    pub fn scale(&self) -> Real {
        self.coeffs
            .iter()
            .map(BigComplex::abs)
            .max_by(|a, b| a.partial_cmp(b).expect("finite coefficients"))
            .expect("at least one coefficient")
    }

    /// Coefficients re-rounded to another precision.
    pub fn round_to(&self, ctx: &PrecisionContext) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|c| c.round_to(ctx)).collect(),
        }
    }

    /// Horner evaluation.
    pub fn eval(&self, z: &BigComplex, ctx: &PrecisionContext) -> BigComplex {
        let mut acc = self.coeffs[0].round_to(ctx);
        for c in &self.coeffs[1..] {
            acc = &acc * z;
            acc += c;
        }
        acc
    }

    /// `sum |a_j| |z|^j`, which scales the rounding error of [`Polynomial::eval`]
    /// at `z`.
    pub fn abs_eval(&self, z: &BigComplex, ctx: &PrecisionContext) -> Real {
        let r = z.abs();
        let mut acc = self.coeffs[0].abs();
        for c in &self.coeffs[1..] {
            acc = ctx.round(&acc) * &r + c.abs();
        }
        acc
    }

    /// `(f(z), f'(z))` in a single Horner pass.
    pub fn eval_with_derivative(
        &self,
        z: &BigComplex,
        ctx: &PrecisionContext,
    ) -> (BigComplex, BigComplex) {
        let mut val = self.coeffs[0].round_to(ctx);
        let mut der = BigComplex::zero(ctx);
        for c in &self.coeffs[1..] {
            der = &der * z;
            der += &val;
            val = &val * z;
            val += c;
        }
        (val, der)
    }

    /// Coefficient-wise derivative. The result may have degree below 2.
    pub fn derivative(&self) -> Polynomial {
        let n = self.degree();
        let coeffs = self.coeffs[..n]
            .iter()
            .enumerate()
            .map(|(k, c)| {
                let power = (n - k) as u32;
                BigComplex::new(
                    Real::with_val(c.re.prec(), &c.re * power),
                    Real::with_val(c.im.prec(), &c.im * power),
                )
            })
            .collect();
        Polynomial::derived(coeffs)
    }

    /// Expands `leading * prod (z - roots[i])`.
    pub fn from_roots(roots: &CVec, leading: &BigComplex, ctx: &PrecisionContext) -> Result<Self> {
        if leading.is_zero() {
            return Err(Error::InvalidPolynomial(
                "leading coefficient is zero".into(),
            ));
        }
        // Monic product, leading-first.
        let mut coeffs = vec![BigComplex::one(ctx)];
        for r in roots.iter() {
            let mut next = coeffs.clone();
            next.push(BigComplex::zero(ctx));
            for (k, c) in coeffs.iter().enumerate() {
                next[k + 1] -= &(c * r);
            }
            coeffs = next;
        }
        let coeffs = coeffs.into_iter().map(|c| &c * leading).collect();
        Self::new(coeffs)
    }

    pub fn to_json(&self) -> PolynomialJson {
        PolynomialJson {
            degree: self.degree(),
            coeffs: self
                .coeffs
                .iter()
                .flat_map(|c| [to_exact_string(&c.re), to_exact_string(&c.im)])
                .collect(),
        }
    }

    pub fn from_json(json: &PolynomialJson, ctx: &PrecisionContext) -> Result<Self> {
        if json.coeffs.len() != 2 * (json.degree + 1) {
            return Err(Error::InvalidPolynomial(format!(
                "degree {} needs {} coefficient strings, got {}",
                json.degree,
                2 * (json.degree + 1),
                json.coeffs.len()
            )));
        }
        let coeffs = json
            .coeffs
            .chunks(2)
            .map(|pair| ctx.parse_complex(&pair[0], &pair[1]))
            .collect::<Result<Vec<_>>>()?;
        Self::new(coeffs)
    }
}

/// Wire form: `{"degree": n, "coeffs": ["a0_re", "a0_im", ...]}`, leading-first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolynomialJson {
    pub degree: usize,
    pub coeffs: Vec<String>,
}

/// The zeros of a polynomial, one per component.
#[derive(Debug, Clone, PartialEq)]
pub struct RootVector {
    roots: CVec,
}

impl RootVector {
    pub fn new(roots: CVec) -> Self {
        Self { roots }
    }

    pub fn roots(&self) -> &CVec {
        &self.roots
    }

    pub fn into_inner(self) -> CVec {
        self.roots
    }

    /// Separation number: the least distance between two components.
    pub fn sep(&self, ctx: &PrecisionContext) -> Result<Real> {
        let r = &self.roots;
        if r.len() < 2 {
            return Err(Error::Domain("separation needs at least two roots".into()));
        }
        let mut best: Option<Real> = None;
        for i in 0..r.len() {
            for j in (i + 1)..r.len() {
                let d = (&r[i] - &r[j]).abs();
                if best.as_ref().map_or(true, |b| d < *b) {
                    best = Some(d);
                }
            }
        }
        Ok(ctx.round(&best.expect("two roots")))
    }
}
