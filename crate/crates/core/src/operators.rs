//! Iteration operators: the Weierstrass correction, the classical Ehrlich
//! step and the high-order family `T^(N)` with domain tracking.

use std::fmt;

use rayon::prelude::*;

use crate::apcx::{BigComplex, PrecisionContext};
use crate::error::{Error, Result};
use crate::metrics::CVec;
use crate::polynomial::Polynomial;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FailureReason {
    DuplicateComponents { j: usize },
    /// `x_i = T_j^(level)(x)` for some `i != j`.
    HashViolation { level: u32, i: usize, j: usize },
    ZeroDenominator { level: u32, i: usize },
    NonFinite { level: u32, i: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub index: usize,
    pub reason: FailureReason,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.reason {
            FailureReason::DuplicateComponents { j } => {
                write!(f, "components {} and {} coincide", self.index, j)
            }
            FailureReason::HashViolation { level, i, j } => {
                write!(f, "x_{i} equals component {j} of level {level}")
            }
            FailureReason::ZeroDenominator { level, i } => {
                write!(f, "zero denominator at level {level}, component {i}")
            }
            FailureReason::NonFinite { level, i } => {
                write!(f, "non-finite value at level {level}, component {i}")
            }
        }
    }
}

/// Result of applying an operator: a value inside the domain, or the reason
/// the input lies outside it.
#[derive(Debug, Clone, PartialEq)]
pub struct OperatorResult {
    pub value: Option<CVec>,
    pub in_domain: bool,
    pub failure: Option<Failure>,
}

impl OperatorResult {
    fn ok(value: CVec) -> Self {
        Self { value: Some(value), in_domain: true, failure: None }
    }

    fn fail(failure: Failure) -> Self {
        Self { value: None, in_domain: false, failure: Some(failure) }
    }

    fn from_levels(levels: std::result::Result<CVec, Failure>) -> Self {
        match levels {
            Ok(v) => Self::ok(v),
            Err(e) => Self::fail(e),
        }
    }

    pub fn into_value(self) -> Result<CVec> {
        match (self.value, self.failure) {
            (Some(v), _) => Ok(v),
            (None, Some(f)) => Err(Error::DegenerateDenominator { index: f.index }),
            (None, None) => unreachable!("operator result without value or failure"),
        }
    }

    pub fn into_result(self) -> std::result::Result<CVec, Failure> {
        match (self.value, self.failure) {
            (Some(v), _) => Ok(v),
            (None, Some(f)) => Err(f),
            (None, None) => unreachable!("operator result without value or failure"),
        }
    }
}

fn first_duplicate(x: &CVec) -> Option<(usize, usize)> {
    let n = x.len();
    (0..n).find_map(|i| ((i + 1)..n).find(|&j| x[i] == x[j]).map(|j| (i, j)))
}

fn first_hash_violation(x: &CVec, y: &CVec) -> Option<(usize, usize)> {
    let n = x.len();
    (0..n).find_map(|i| (0..n).find(|&j| j != i && x[i] == y[j]).map(|j| (i, j)))
}

/// `x # y`: `x_i != y_j` for all `i != j`. Diagonal equality is allowed.
pub fn check_hash(x: &CVec, y: &CVec) -> bool {
    assert_eq!(x.len(), y.len(), "check_hash needs equal lengths");
    first_hash_violation(x, y).is_none()
}

/// `W_i(x) = f(x_i) / (a_0 prod_{j != i} (x_i - x_j))`.
pub fn weierstrass(f: &Polynomial, x: &CVec, ctx: &PrecisionContext) -> OperatorResult {
    if let Some((i, j)) = first_duplicate(x) {
        return OperatorResult::fail(Failure { index: i, reason: FailureReason::DuplicateComponents { j } });
    }
    let lead = f.leading().round_to(ctx);
    let n = x.len();
    let w: std::result::Result<Vec<_>, Failure> = (0..n)
        .map(|i| {
            let mut den = lead.clone();
            for j in (0..n).filter(|&j| j != i) {
                den *= &(&x[i] - &x[j]);
            }
            let fx = f.eval(&x[i], ctx);
            let wi = fx
                .checked_div(&den)
                .map_err(|_| Failure { index: i, reason: FailureReason::ZeroDenominator { level: 0, i } })?;
            if !wi.is_finite() {
                return Err(Failure { index: i, reason: FailureReason::NonFinite { level: 0, i } });
            }
            Ok(wi.round_to(ctx))
        })
        .collect();
    OperatorResult::from_levels(w.map(CVec::new))
}

/// Value used for component `i` when `f(x_i) = 0`: the component is kept.
pub fn fixed_component_rule(
    f: &Polynomial,
    x: &CVec,
    i: usize,
    ctx: &PrecisionContext,
) -> BigComplex {
    debug_assert!(f.eval(&x[i], ctx).is_zero());
    x[i].round_to(ctx)
}

/// One component of `x_i - f / (f' - f * sum_{j != i} 1/(x_i - y_j))`.
fn corrected_component(
    x: &CVec,
    y: &CVec,
    i: usize,
    fx: &BigComplex,
    dfx: &BigComplex,
    level: u32,
    ctx: &PrecisionContext,
) -> std::result::Result<BigComplex, Failure> {
    if fx.is_zero() {
        return Ok(x[i].round_to(ctx));
    }
    let mut sum = BigComplex::zero(ctx);
    for j in (0..x.len()).filter(|&j| j != i) {
        let r = (&x[i] - &y[j])
            .recip()
            .map_err(|_| Failure { index: i, reason: FailureReason::HashViolation { level: level - 1, i, j } })?;
        sum += &r;
    }
    let den = dfx - &(fx * &sum);
    let q = fx
        .checked_div(&den)
        .map_err(|_| Failure { index: i, reason: FailureReason::ZeroDenominator { level, i } })?;
    let t = &x[i] - &q;
    if !t.is_finite() {
        return Err(Failure { index: i, reason: FailureReason::NonFinite { level, i } });
    }
    Ok(t.round_to(ctx))
}

fn evaluations(f: &Polynomial, x: &CVec, ctx: &PrecisionContext) -> Vec<(BigComplex, BigComplex)> {
    x.par_iter().map(|z| f.eval_with_derivative(z, ctx)).collect()
}

/// Classical Ehrlich step
/// `T_i(x) = x_i - f(x_i) / (f'(x_i) - f(x_i) sum_{j != i} 1/(x_i - x_j))`.
#[allow(non_snake_case)]
pub fn ehrlich_T(f: &Polynomial, x: &CVec, ctx: &PrecisionContext) -> OperatorResult {
    if let Some((i, j)) = first_duplicate(x) {
        return OperatorResult::fail(Failure { index: i, reason: FailureReason::DuplicateComponents { j } });
    }
    let n = x.len();
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (fx, dfx) = f.eval_with_derivative(&x[i], ctx);
        match corrected_component(x, x, i, &fx, &dfx, 1, ctx) {
            Ok(t) => out.push(t),
            Err(e) => return OperatorResult::fail(e),
        }
    }
    OperatorResult::ok(CVec::new(out))
}

/// All levels `T^(0)(x) = x, T^(1)(x), ..., T^(N)(x)`. Level `L + 1` is
/// computed from the completed level `L`.
pub fn high_order_levels(
    f: &Polynomial,
    x: &CVec,
    order: u32,
    ctx: &PrecisionContext,
) -> std::result::Result<Vec<CVec>, Failure> {
    let x = x.round_to(ctx);
    let mut levels = vec![x.clone()];
    if order == 0 {
        return Ok(levels);
    }
    let evals = evaluations(f, &x, ctx);
    for level in 1..=order {
        let prev = levels.last().expect("level 0 present");
        if let Some((i, j)) = first_hash_violation(&x, prev) {
            return Err(Failure {
                index: i,
                reason: FailureReason::HashViolation { level: level - 1, i, j },
            });
        }
        let next: std::result::Result<Vec<_>, Failure> = (0..x.len())
            .into_par_iter()
            .map(|i| corrected_component(&x, prev, i, &evals[i].0, &evals[i].1, level, ctx))
            .collect();
        levels.push(CVec::new(next?));
    }
    Ok(levels)
}

/// `T^(N)(x)`, with `T^(0)` the identity.
#[allow(non_snake_case)]
pub fn high_order_T(f: &Polynomial, x: &CVec, order: u32, ctx: &PrecisionContext) -> OperatorResult {
    OperatorResult::from_levels(
        high_order_levels(f, x, order, ctx).map(|mut l| l.pop().expect("nonempty levels")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::apcx::Real;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(200).unwrap()
    }

    fn cv(c: &PrecisionContext, v: &[(f64, f64)]) -> CVec {
        v.iter().map(|&(a, b)| c.complex(a, b)).collect()
    }

    fn z2m1(c: &PrecisionContext) -> Polynomial {
        Polynomial::from_integers(&[1, 0, -1], c).unwrap()
    }

    fn z4m1(c: &PrecisionContext) -> Polynomial {
        Polynomial::from_integers(&[1, 0, 0, 0, -1], c).unwrap()
    }

    fn ex71_x0(c: &PrecisionContext) -> CVec {
        [("0.5", "0.5"), ("-1.36", "0.42"), ("-0.25", "1.28"), ("0.46", "-1.37")]
            .iter()
            .map(|(a, b)| c.parse_complex(a, b).unwrap())
            .collect()
    }

    fn close(a: &BigComplex, b: &BigComplex, tol: f64) -> bool {
        (a - b).abs() < tol
    }

    #[test]
    fn weierstrass_examples() {
        let c = ctx();
        let w = weierstrass(&z2m1(&c), &cv(&c, &[(2.0, 0.0), (-2.0, 0.0)]), &c).into_value().unwrap();
        assert_eq!(w[0], c.complex(0.75, 0));
        assert_eq!(w[1], c.complex(-0.75, 0));
        let roots = cv(&c, &[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        let w = weierstrass(&z4m1(&c), &roots, &c).into_value().unwrap();
        assert!(w.iter().all(BigComplex::is_zero));
        let dup = weierstrass(&z2m1(&c), &cv(&c, &[(3.0, 0.0), (3.0, 0.0)]), &c);
        assert!(!dup.in_domain && dup.value.is_none());
        assert_eq!(dup.failure.unwrap().reason, FailureReason::DuplicateComponents { j: 1 });
    }

    #[test]
    fn weierstrass_ex71_ef() {
        let c = ctx();
        let ef = crate::metrics::e_weier(&z4m1(&c), &ex71_x0(&c), crate::metrics::PNorm::INF, &c).unwrap();
        assert_eq!(crate::apcx::format_fixed(&ef, 6, true), "0.506619");
    }

    #[test]
    fn hash_examples() {
        let c = ctx();
        let v = |a: f64, b: f64| cv(&c, &[(a, 0.0), (b, 0.0)]);
        assert!(check_hash(&v(1.0, 2.0), &v(1.0, 2.0)));
        assert!(!check_hash(&v(1.0, 2.0), &v(2.0, 5.0)));
        assert!(check_hash(&v(1.0, 2.0), &v(3.0, 4.0)));
    }

    #[test]
    fn ehrlich_examples() {
        let c = ctx();
        let t = ehrlich_T(&z2m1(&c), &cv(&c, &[(2.0, 0.0), (-2.0, 0.0)]), &c).into_value().unwrap();
        let e = c.real(14) / c.real(13);
        assert!(close(&t[0], &BigComplex::from_real(e.clone()), 1e-58));
        assert!(close(&t[1], &BigComplex::from_real(-e), 1e-58));
        let roots = cv(&c, &[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        assert_eq!(ehrlich_T(&z4m1(&c), &roots, &c).into_value().unwrap(), roots);
    }

    #[test]
    fn ehrlich_ex71_first_steps() {
        // Two N = 1 steps from x0 certify with E_f = 0.010032.
        let c = ctx();
        let f = z4m1(&c);
        let x1 = ehrlich_T(&f, &ex71_x0(&c), &c).into_value().unwrap();
        let x2 = ehrlich_T(&f, &x1, &c).into_value().unwrap();
        let ef = crate::metrics::e_weier(&f, &x2, crate::metrics::PNorm::INF, &c).unwrap();
        assert_eq!(crate::apcx::format_fixed(&ef, 6, true), "0.010032");
    }

    #[test]
    fn zero_denominator_detected() {
        // f = z^2 + 1 at x = (1, -1): f'(1) - f(1)/(1 - (-1)) = 2 - 1 = 1, fine;
        // x = (0, 2): f'(0) - f(0)/(0 - 2) = 0 + 1/2, fine; use x = (1, 3):
        // f'(1) - 2/(1 - 3) = 2 + 1 = 3. Build the zero case for z^2 - 1 at (0, 1/2):
        // f'(0) - f(0)/(0 - 1/2) = 0 - (-1)(-2) = -2. Directly: z^2 - 3 at (1, 2):
        // f'(1) - f(1)/(1 - 2) = 2 - (-2)(-1) = 0.
        let c = ctx();
        let f = Polynomial::from_integers(&[1, 0, -3], &c).unwrap();
        let x = cv(&c, &[(1.0, 0.0), (2.0, 0.0)]);
        let r = ehrlich_T(&f, &x, &c);
        assert_eq!(r.failure.unwrap().reason, FailureReason::ZeroDenominator { level: 1, i: 0 });
        let r = high_order_T(&f, &x, 3, &c);
        assert_eq!(r.failure.unwrap().reason, FailureReason::ZeroDenominator { level: 1, i: 0 });
    }

    #[test]
    fn identity_and_collapse() {
        let c = ctx();
        let f = z4m1(&c);
        let x = ex71_x0(&c);
        assert_eq!(high_order_T(&f, &x, 0, &c).into_value().unwrap(), x);
        assert_eq!(
            high_order_T(&f, &x, 1, &c).into_value().unwrap(),
            ehrlich_T(&f, &x, &c).into_value().unwrap()
        );
        let dup = cv(&c, &[(1.0, 1.0), (1.0, 1.0), (0.3, 0.0), (2.0, 0.0)]);
        let r = high_order_T(&f, &dup, 2, &c);
        assert_eq!(r.failure.unwrap().reason, FailureReason::HashViolation { level: 0, i: 0, j: 1 });
        // N = 0 maps any vector, duplicates included, to itself
        assert_eq!(high_order_T(&f, &dup, 0, &c).into_value().unwrap(), dup);
    }

    #[test]
    fn table2_first_iterate() {
        let c = PrecisionContext::new(512).unwrap();
        let f = z4m1(&c);
        let x1 = high_order_T(&f, &ex71_x0(&c), 10, &c).into_value().unwrap();
        let fx = |z: &Real| crate::apcx::format_fixed(z, 15, true);
        assert_eq!(fx(&x1[0].re), "1.000000380419496");
        assert_eq!(fx(&x1[0].im), "0.000000816235730");
    }

    #[test]
    fn fixed_components() {
        let c = ctx();
        let f = z2m1(&c);
        let x = cv(&c, &[(1.0, 0.0), (-5.0, 0.0)]);
        for n in 1..6 {
            assert_eq!(high_order_T(&f, &x, n, &c).into_value().unwrap()[0], x[0]);
        }
        assert_eq!(fixed_component_rule(&f, &x, 0, &c), x[0]);
        let roots = cv(&c, &[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        for n in 1..6 {
            assert_eq!(high_order_T(&z4m1(&c), &roots, n, &c).into_value().unwrap(), roots);
        }
        let t = ehrlich_T(&f, &cv(&c, &[(1.0, 0.0), (0.0, 0.0)]), &c).into_value().unwrap();
        assert_eq!(t[0], c.complex(1, 0));
        assert_eq!(t[1], c.complex(-1, 0));
    }

    #[test]
    fn sigma_identity() {
        // T^(N+1)_i - ξ_i = -σ_i/(1 - σ_i) (x_i - ξ_i)
        let c = ctx();
        let f = z4m1(&c);
        let xi = cv(&c, &[(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)]);
        let x = cv(&c, &[(1.05, 0.02), (-0.03, 0.97), (-1.01, -0.04), (0.02, -1.06)]);
        for n in 0..4u32 {
            let levels = high_order_levels(&f, &x, n + 1, &c).unwrap();
            let inner = &levels[n as usize];
            let outer = &levels[n as usize + 1];
            for i in 0..4 {
                let mut s = BigComplex::zero(&c);
                for j in (0..4).filter(|&j| j != i) {
                    let num = &inner[j] - &xi[j];
                    let den = &(&x[i] - &xi[j]) * &(&x[i] - &inner[j]);
                    s += &num.checked_div(&den).unwrap();
                }
                let sigma = &(&x[i] - &xi[i]) * &s;
                let one_minus = &BigComplex::one(&c) - &sigma;
                let rhs = -(&sigma.checked_div(&one_minus).unwrap() * &(&x[i] - &xi[i]));
                let lhs = &outer[i] - &xi[i];
                assert!((&lhs - &rhs).abs() < 1e-55, "N={n} i={i}");
            }
        }
    }
}
