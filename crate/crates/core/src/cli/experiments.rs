//! Built-in experiments and the Aberth initial approximations.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::apcx::{BigComplex, PrecisionContext, Real};
use crate::error::{Error, Result};
use crate::metrics::CVec;
use crate::polynomial::{Polynomial, PolynomialJson};

/// How the polynomial is given. Integer coefficients are exact at every
/// precision, so polynomials are rebuilt per context.
#[derive(Debug, Clone, PartialEq)]
pub enum PolySpec {
    /// Leading-first integer coefficients.
    Integers(Vec<i64>),
    /// Monic polynomial with these integer roots.
    IntegerRoots(Vec<i64>),
    Json(PolynomialJson),
}

impl PolySpec {
    pub fn build(&self, ctx: &PrecisionContext) -> Result<Polynomial> {
        match self {
            PolySpec::Integers(c) => Polynomial::from_integers(c, ctx),
            PolySpec::IntegerRoots(r) => {
                let roots: CVec = r.iter().map(|&j| ctx.complex(j, 0)).collect();
                Polynomial::from_roots(&roots, &BigComplex::one(ctx), ctx)
            }
            PolySpec::Json(js) => Polynomial::from_json(js, ctx),
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            PolySpec::Integers(c) => c.len().saturating_sub(1),
            PolySpec::IntegerRoots(r) => r.len(),
            PolySpec::Json(js) => js.degree,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InitSpec {
    /// Decimal strings `(re, im)`.
    Explicit(Vec<(String, String)>),
    /// `x_ν = -a1/n + r0 exp(iθ_ν)`, `θ_ν = (π/n)(2ν - 3/2)`.
    Aberth { a1: (String, String), r0: String },
}

/// On-disk form of an explicit initial vector: `{"x": [["re", "im"], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitJson {
    pub x: Vec<[String; 2]>,
}

impl InitSpec {
    pub fn build(&self, n: usize, ctx: &PrecisionContext) -> Result<CVec> {
        match self {
            InitSpec::Explicit(v) => {
                if v.len() != n {
                    return Err(Error::LengthMismatch { expected: n, got: v.len() });
                }
                v.iter().map(|(a, b)| ctx.parse_complex(a, b)).collect()
            }
            InitSpec::Aberth { a1, r0 } => {
                let a1 = ctx.parse_complex(&a1.0, &a1.1)?;
                let r0 = ctx.parse_real(r0)?;
                aberth_init(n, &a1, &r0, ctx)
            }
        }
    }

    pub fn from_json(js: &InitJson) -> Self {
        InitSpec::Explicit(js.x.iter().map(|[a, b]| (a.clone(), b.clone())).collect())
    }
}

/// `n` points on the circle of radius `r0` about `-a1/n`, at angles
/// `θ_ν = (π/n)(2ν - 3/2)`, `ν = 1..n`.
pub fn aberth_init(n: usize, a1: &BigComplex, r0: &Real, ctx: &PrecisionContext) -> Result<CVec> {
    if n < 2 {
        return Err(Error::Config(format!("Aberth initialization needs n >= 2, got {n}")));
    }
    if !(*r0 > 0) {
        return Err(Error::Config("Aberth radius r0 must be positive".into()));
    }
    let nr = ctx.real(n as u32);
    let center = -a1.scale(&(ctx.one() / &nr)).round_to(ctx);
    let step = ctx.pi() / &nr;
    Ok((1..=n)
        .map(|nu| {
            let two_nu = ctx.real(2 * nu as u32) - ctx.parse_real("1.5").expect("literal");
            let theta = two_nu * &step;
            &center + &ctx.cis(&theta).scale(r0)
        })
        .map(|z| z.round_to(ctx))
        .collect())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub name: String,
    pub polynomial: PolySpec,
    pub init: InitSpec,
    pub n: usize,
    pub table_rows: Vec<u32>,
    /// High-precision rows, run only on request.
    pub extended_rows: Vec<u32>,
    /// Decimal digits per order `N`.
    pub precision_plan: BTreeMap<u32, u32>,
}

impl Experiment {
    pub fn polynomial(&self, ctx: &PrecisionContext) -> Result<Polynomial> {
        self.polynomial.build(ctx)
    }

    pub fn initial(&self, ctx: &PrecisionContext) -> Result<CVec> {
        self.init.build(self.n, ctx)
    }

    pub fn digits_for(&self, order: u32) -> Option<u32> {
        self.precision_plan.get(&order).copied()
    }

    pub fn all_rows(&self) -> Vec<u32> {
        self.table_rows.iter().chain(self.extended_rows.iter()).copied().collect()
    }
}

fn plan(entries: &[(u32, u32)]) -> BTreeMap<u32, u32> {
    entries.iter().copied().collect()
}

fn s(x: &str) -> String {
    x.to_string()
}

pub fn builtin_experiments() -> Vec<Experiment> {
    let rows: Vec<u32> = (1..=10).collect();
    let mut z40 = vec![0i64; 41];
    z40[0] = 1;
    z40[40] = -1;
    let mut z15 = vec![0i64; 16];
    z15[0] = 1;
    z15[1] = 1;
    z15[15] = 1;
    vec![
        Experiment {
            name: s("ex71"),
            polynomial: PolySpec::Integers(vec![1, 0, 0, 0, -1]),
            init: InitSpec::Explicit(vec![
                (s("0.5"), s("0.5")),
                (s("-1.36"), s("0.42")),
                (s("-0.25"), s("1.28")),
                (s("0.46"), s("-1.37")),
            ]),
            n: 4,
            table_rows: rows.clone(),
            extended_rows: vec![100],
            precision_plan: plan(&[
                (1, 150), (2, 300), (3, 850), (4, 300), (5, 500), (6, 750),
                (7, 1100), (8, 1500), (9, 2100), (10, 2750), (100, 11550),
            ]),
        },
        Experiment {
            name: s("ex72"),
            polynomial: PolySpec::Integers(z15),
            init: InitSpec::Aberth { a1: (s("1"), s("0")), r0: s("2") },
            n: 15,
            table_rows: rows.clone(),
            extended_rows: vec![30],
            precision_plan: plan(&[
                (1, 200), (2, 200), (3, 300), (4, 900), (5, 350), (6, 650),
                (7, 1200), (8, 2150), (9, 3600), (10, 5750), (30, 15200),
            ]),
        },
        Experiment {
            name: s("ex73"),
            polynomial: PolySpec::IntegerRoots((1..=20).collect()),
            // a1 is the z^19 coefficient of the expanded product
            init: InitSpec::Aberth { a1: (s("-210"), s("0")), r0: s("20") },
            n: 20,
            table_rows: rows.clone(),
            extended_rows: vec![30],
            precision_plan: plan(&[
                (1, 200), (2, 300), (3, 700), (4, 250), (5, 1900), (6, 700),
                (7, 350), (8, 600), (9, 1050), (10, 2850), (30, 13850),
            ]),
        },
        Experiment {
            name: s("ex74"),
            polynomial: PolySpec::Integers(z40),
            init: InitSpec::Aberth { a1: (s("0"), s("0")), r0: s("2") },
            n: 40,
            table_rows: rows,
            extended_rows: vec![30],
            precision_plan: plan(&[
                (1, 150), (2, 250), (3, 300), (4, 450), (5, 300), (6, 1000),
                (7, 3000), (8, 600), (9, 1250), (10, 2650), (30, 2050),
            ]),
        },
    ]
}

pub fn experiment(name: &str) -> Result<Experiment> {
    builtin_experiments()
        .into_iter()
        .find(|e| e.name == name)
        .ok_or_else(|| Error::Config(format!("unknown experiment {name:?}")))
}
