//! Random instances shared by the integration tests.
#![allow(dead_code)]

use ehrlich::metrics::{dvec, p_norm, ratio_vec};
use ehrlich::{BigComplex, CVec, PNorm, Polynomial, PrecisionContext, Real, RootVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn pnorms() -> [PNorm; 3] {
    [PNorm::ONE, PNorm::TWO, PNorm::INF]
}

/// `n` points of `[-2, 2]²` with pairwise distance at least `min_sep`.
pub fn random_roots(rng: &mut ChaCha8Rng, n: usize, min_sep: f64, c: &PrecisionContext) -> CVec {
    let mut pts: Vec<(f64, f64)> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        if pts.iter().all(|q: &(f64, f64)| ((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt() >= min_sep) {
            pts.push(p);
        }
    }
    pts.iter().map(|&(a, b)| c.complex(a, b)).collect()
}

/// Distinct Gaussian integers in `[-4, 4]²`. Polynomials built from them
/// vanish exactly at their roots.
pub fn gaussian_integer_roots(rng: &mut ChaCha8Rng, n: usize, c: &PrecisionContext) -> CVec {
    let mut pts: Vec<(i32, i32)> = Vec::with_capacity(n);
    while pts.len() < n {
        let p = (rng.gen_range(-4..=4), rng.gen_range(-4..=4));
        if !pts.contains(&p) {
            pts.push(p);
        }
    }
    pts.iter().map(|&(a, b)| c.complex(a, b)).collect()
}

pub fn poly_from_roots(xi: &CVec, c: &PrecisionContext) -> Polynomial {
    Polynomial::from_roots(xi, &BigComplex::one(c), c).unwrap()
}

pub fn root_vector(xi: &CVec) -> RootVector {
    RootVector::new(xi.clone())
}

/// `‖(x - y)/d‖_p`.
pub fn rel_norm(x: &CVec, y: &CVec, d: &ehrlich::RVec, pn: PNorm, c: &PrecisionContext) -> Real {
    p_norm(&ratio_vec(&x.sub(y), d).unwrap(), pn, c)
}

/// `xi + d(xi) u` with random directions `u`, scaled so that
/// `‖(x - xi)/d(xi)‖_p = target`.
pub fn perturb_to(rng: &mut ChaCha8Rng, xi: &CVec, target: &Real, pn: PNorm, c: &PrecisionContext) -> CVec {
    let d = dvec(xi, c);
    let u: CVec = (0..xi.len())
        .map(|_| c.complex(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let un = p_norm(&ehrlich::metrics::cone_norm(&u), pn, c);
    let s = c.round(target) / un;
    xi.iter()
        .zip(u.iter())
        .zip(d.iter())
        .map(|((x, ui), di)| x + &ui.scale(&(s.clone() * di)))
        .collect()
}

/// Unit-interval sample as a context real.
pub fn unit(rng: &mut ChaCha8Rng, lo: f64, hi: f64, c: &PrecisionContext) -> Real {
    c.real(rng.gen_range(lo..hi))
}
