//! Certified high-order Ehrlich iteration for the simultaneous computation
//! of all zeros of a polynomial, in arbitrary precision.

pub mod apcx;
pub mod cli;
pub mod error;
pub mod gauges;
pub mod metrics;
pub mod operators;
pub mod polynomial;
pub mod solver;

pub use apcx::{BigComplex, PrecisionContext, Real};
pub use error::{Error, Result};
pub use metrics::{CVec, GaugeParams, PNorm, RVec};
pub use polynomial::{Polynomial, RootVector};
