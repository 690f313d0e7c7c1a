//! Arbitrary-precision real and complex arithmetic.
//!
//! Reals are MPFR floats ([`rug::Float`]); [`BigComplex`] is a pair of them.
//! Every value carries the precision of the [`PrecisionContext`] it was built
//! under, and binary operations produce a result at the larger of the two
//! operand precisions, rounded to nearest-even. There is no global precision
//! state.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use rug::float::{Constant, Round};
use rug::ops::Pow;
use rug::{Assign, Float};

use crate::error::{Error, Result};

/// Arbitrary-precision real number.
pub type Real = Float;

const LOG2_10: f64 = std::f64::consts::LOG2_10;

/// Binary precision under which values are created.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PrecisionContext {
    bits: u32,
}

impl PrecisionContext {
    pub const MIN_BITS: u32 = 64;

    pub fn new(bits: u32) -> Result<Self> {
        if bits < Self::MIN_BITS {
            return Err(Error::Precision(bits));
        }
        Ok(Self { bits })
    }

    /// Precision sized for values down to `10^-exponent`:
    /// `ceil(1.2 * log2(10) * exponent)` bits, never below 64.
    pub fn for_decimal_exponent(exponent: u32) -> Self {
        let bits = (1.2 * LOG2_10 * f64::from(exponent)).ceil() as u32;
        Self {
            bits: bits.max(Self::MIN_BITS),
        }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// Number of decimal digits the mantissa holds.
    pub fn decimal_digits(&self) -> u32 {
        (f64::from(self.bits) / LOG2_10).floor() as u32
    }

    /// The same context with the precision multiplied by `factor`.
    pub fn scaled(&self, factor: u32) -> Self {
        Self {
            bits: self.bits * factor.max(1),
        }
    }

    pub fn real<T>(&self, val: T) -> Real
    where
        Float: Assign<T>,
    {
        Float::with_val(self.bits, val)
    }

    pub fn zero(&self) -> Real {
        Float::new(self.bits)
    }

    pub fn one(&self) -> Real {
        self.real(1u32)
    }

    /// Rounds a real of any precision to this context.
    pub fn round(&self, t: &Real) -> Real {
        Float::with_val(self.bits, t)
    }

    /// Parses a decimal string (`"0.506619"`, `"-1.36"`, `"2.5e-3"`), rounding
    /// once to the context precision. A Unicode minus sign is accepted.
    pub fn parse_real(&self, s: &str) -> Result<Real> {
        let cleaned = s.trim().replace('\u{2212}', "-");
        let parsed = Float::parse(&cleaned).map_err(|_| Error::Parse {
            input: s.to_string(),
        })?;
        let v = Float::with_val(self.bits, parsed);
        if !v.is_finite() {
            return Err(Error::Parse {
                input: s.to_string(),
            });
        }
        Ok(v)
    }

    pub fn parse_complex(&self, re: &str, im: &str) -> Result<BigComplex> {
        Ok(BigComplex::new(self.parse_real(re)?, self.parse_real(im)?))
    }

    pub fn complex<T, U>(&self, re: T, im: U) -> BigComplex
    where
        Float: Assign<T> + Assign<U>,
    {
        BigComplex::new(self.real(re), self.real(im))
    }

    pub fn sqrt(&self, t: &Real) -> Result<Real> {
        if t.is_sign_negative() && !t.is_zero() {
            return Err(Error::Domain(format!(
                "square root of negative number {}",
                format_sci(t, 6)
            )));
        }
        Ok(Float::with_val(self.bits, t.sqrt_ref()))
    }

    pub fn pi(&self) -> Real {
        Float::with_val(self.bits, Constant::Pi)
    }

    pub fn sin(&self, t: &Real) -> Real {
        Float::with_val(self.bits, t.sin_ref())
    }

    pub fn cos(&self, t: &Real) -> Real {
        Float::with_val(self.bits, t.cos_ref())
    }

    /// `t^e` for `t >= 0`, with the convention `0^0 = 1`.
    pub fn pow(&self, t: &Real, e: &Real) -> Result<Real> {
        if t.is_sign_negative() && !t.is_zero() {
            return Err(Error::Domain(format!(
                "real power of negative base {}",
                format_sci(t, 6)
            )));
        }
        if e.is_zero() {
            return Ok(self.one());
        }
        Ok(Float::with_val(self.bits, t.pow(e)))
    }

    /// `exp(i t) = cos t + i sin t`.
    pub fn cis(&self, t: &Real) -> BigComplex {
        let (s, c) = Float::with_val(self.bits, t).sin_cos(self.zero());
        BigComplex::new(c, s)
    }
}

/// Complex number with arbitrary-precision real and imaginary parts.
#[derive(Debug, Clone, PartialEq)]
pub struct BigComplex {
    pub re: Real,
    pub im: Real,
}

impl BigComplex {
    pub fn new(re: Real, im: Real) -> Self {
        Self { re, im }
    }

    pub fn zero(ctx: &PrecisionContext) -> Self {
        Self::new(ctx.zero(), ctx.zero())
    }

    pub fn one(ctx: &PrecisionContext) -> Self {
        Self::new(ctx.one(), ctx.zero())
    }

    pub fn from_real(re: Real) -> Self {
        let im = Float::new(re.prec());
        Self { re, im }
    }

    pub fn prec(&self) -> u32 {
        self.re.prec().max(self.im.prec())
    }

    /// Re-rounds both parts to the context precision.
    pub fn round_to(&self, ctx: &PrecisionContext) -> Self {
        Self::new(ctx.round(&self.re), ctx.round(&self.im))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_finite(&self) -> bool {
        self.re.is_finite() && self.im.is_finite()
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re.clone(), Float::with_val(self.im.prec(), -&self.im))
    }

    /// Modulus `|z|`, rounded once.
    pub fn abs(&self) -> Real {
        Float::with_val(self.prec(), self.re.hypot_ref(&self.im))
    }

    /// `|z|^2`, rounded once.
    pub fn norm_sqr(&self) -> Real {
        Float::with_val(
            self.prec(),
            &self.re * &self.re + &self.im * &self.im,
        )
    }

    pub fn scale(&self, r: &Real) -> Self {
        let p = self.prec().max(r.prec());
        Self::new(
            Float::with_val(p, &self.re * r),
            Float::with_val(p, &self.im * r),
        )
    }

    pub fn recip(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec();
        let den = self.norm_sqr();
        Ok(Self::new(
            Float::with_val(p, &self.re / &den),
            -Float::with_val(p, &self.im / &den),
        ))
    }

    pub fn checked_div(&self, rhs: &BigComplex) -> Result<Self> {
        if rhs.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let p = self.prec().max(rhs.prec());
        let den = Float::with_val(p, &rhs.re * &rhs.re + &rhs.im * &rhs.im);
        let num_re = Float::with_val(p, &self.re * &rhs.re + &self.im * &rhs.im);
        let num_im = Float::with_val(p, &self.im * &rhs.re - &self.re * &rhs.im);
        Ok(Self::new(num_re / &den, num_im / &den))
    }

    /// Scientific rendering `re ± im i` with `digits` significant digits.
    pub fn to_sci_string(&self, digits: usize) -> String {
        let sign = if self.im.is_sign_negative() && !self.im.is_zero() {
            '-'
        } else {
            '+'
        };
        let im_abs = Float::with_val(self.im.prec(), self.im.abs_ref());
        format!(
            "{} {} {}i",
            format_sci(&self.re, digits),
            sign,
            format_sci(&im_abs, digits)
        )
    }
}

impl fmt::Display for BigComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sci_string(f.precision().unwrap_or(17)))
    }
}

impl<'a> Add<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn add(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex::new(
            Float::with_val(p, &self.re + &rhs.re),
            Float::with_val(p, &self.im + &rhs.im),
        )
    }
}

impl<'a> Sub<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn sub(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex::new(
            Float::with_val(p, &self.re - &rhs.re),
            Float::with_val(p, &self.im - &rhs.im),
        )
    }
}

impl<'a> Mul<&'a BigComplex> for &'a BigComplex {
    type Output = BigComplex;
    fn mul(self, rhs: &'a BigComplex) -> BigComplex {
        let p = self.prec().max(rhs.prec());
        BigComplex::new(
            Float::with_val(p, &self.re * &rhs.re - &self.im * &rhs.im),
            Float::with_val(p, &self.re * &rhs.im + &self.im * &rhs.re),
        )
    }
}

impl Neg for &BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(
            Float::with_val(self.re.prec(), -&self.re),
            Float::with_val(self.im.prec(), -&self.im),
        )
    }
}

impl Neg for BigComplex {
    type Output = BigComplex;
    fn neg(self) -> BigComplex {
        BigComplex::new(-self.re, -self.im)
    }
}

impl AddAssign<&BigComplex> for BigComplex {
    fn add_assign(&mut self, rhs: &BigComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&BigComplex> for BigComplex {
    fn sub_assign(&mut self, rhs: &BigComplex) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&BigComplex> for BigComplex {
    fn mul_assign(&mut self, rhs: &BigComplex) {
        *self = &*self * rhs;
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: BigComplex) -> BigComplex {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a BigComplex> for BigComplex {
            type Output = BigComplex;
            fn $m(self, rhs: &'a BigComplex) -> BigComplex {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// Decimal mantissa digits and exponent of `x` such that
/// `|x| = 0.d1d2d3... * 10^exp`, rounded with `round`.
fn decimal_parts(x: &Real, digits: usize, round: Round) -> (bool, String, i32) {
    let (neg, s, exp) = x.to_sign_string_exp_round(10, Some(digits), round);
    (neg, s, exp.unwrap_or(0))
}

/// Scientific notation `d.ddddde±X` with `digits` significant digits,
/// rounded to nearest. Zero renders as `0.00000e+0`.
pub fn format_sci(x: &Real, digits: usize) -> String {
    sci_with(x, digits, Round::Nearest)
}

/// [`format_sci`] with the mantissa truncated toward zero.
pub fn format_sci_truncated(x: &Real, digits: usize) -> String {
    sci_with(x, digits, Round::Zero)
}

fn sci_with(x: &Real, digits: usize, round: Round) -> String {
    let digits = digits.max(1);
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x.is_sign_negative() { "-inf" } else { "inf" }.into();
    }
    if x.is_zero() {
        let frac = "0".repeat(digits - 1);
        return if digits > 1 {
            format!("0.{frac}e+0")
        } else {
            "0e+0".into()
        };
    }
    let (neg, s, exp) = decimal_parts(x, digits, round);
    let e = exp - 1;
    let (head, tail) = s.split_at(1);
    let sign = if neg { "-" } else { "" };
    let esign = if e < 0 { '-' } else { '+' };
    if tail.is_empty() {
        format!("{sign}{head}e{esign}{}", e.unsigned_abs())
    } else {
        format!("{sign}{head}.{tail}e{esign}{}", e.unsigned_abs())
    }
}

/// Mantissa in `[1, 10)` and exact decimal exponent of `x`, with the mantissa
/// rounded to `digits` significant digits. Zero maps to `(0.0, 0)`.
pub fn mantissa_exponent(x: &Real, digits: usize) -> (f64, i64) {
    if x.is_zero() || !x.is_finite() {
        return (0.0, 0);
    }
    let (neg, s, exp) = decimal_parts(x, digits.max(1), Round::Nearest);
    let m: f64 = format!("{}.{}", &s[..1], &s[1..]).parse().unwrap_or(0.0);
    (if neg { -m } else { m }, i64::from(exp) - 1)
}

/// Fixed-point rendering with exactly `decimals` digits after the point.
/// `truncate` selects rounding toward zero instead of to nearest. A result
/// that renders as zero carries no minus sign.
pub fn format_fixed(x: &Real, decimals: usize, truncate: bool) -> String {
    let round = if truncate { Round::Zero } else { Round::Nearest };
    let zero = || {
        if decimals == 0 {
            "0".to_string()
        } else {
            format!("0.{}", "0".repeat(decimals))
        }
    };
    if x.is_zero() || !x.is_finite() {
        return zero();
    }
    // Number of digits to the left of the point, before rounding.
    let (_, _, exp) = decimal_parts(x, 1, Round::Zero);
    let total = exp + decimals as i32;
    let digits_str = if total <= 0 {
        // |x| < 10^-decimals: rounds to 0 or to one unit in the last place.
        let unit = Float::with_val(x.prec(), Float::i_exp(1, 0))
            / Float::with_val(x.prec(), Float::u_pow_u(10, decimals as u32));
        let half = Float::with_val(x.prec(), &unit / 2u32);
        let ax = Float::with_val(x.prec(), x.abs_ref());
        if !truncate && ax.cmp_abs(&half) == Some(Ordering::Greater) {
            "1".to_string()
        } else {
            return zero();
        }
    } else {
        let (_, s, exp2) = decimal_parts(x, total as usize, round);
        if exp2 != exp {
            // Rounding carried into a new leading digit (…999 → 1000…).
            let mut s = s;
            s.push('0');
            s
        } else {
            s
        }
    };
    let neg = x.is_sign_negative();
    let len = digits_str.len();
    let (int_part, frac_part) = if len > decimals {
        (
            digits_str[..len - decimals].to_string(),
            digits_str[len - decimals..].to_string(),
        )
    } else {
        (
            "0".to_string(),
            format!("{}{}", "0".repeat(decimals - len), digits_str),
        )
    };
    let all_zero = digits_str.bytes().all(|b| b == b'0');
    let sign = if neg && !all_zero { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Fixed-point rendering of `x` after first rounding it to `sig`
/// significant digits, then truncating to `decimals` places. Values just
/// below a round number (`0.99999...`) therefore print as that number.
pub fn format_fixed_rounded_then_truncated(x: &Real, sig: usize, decimals: usize) -> String {
    if x.is_zero() || !x.is_finite() {
        return format_fixed(x, decimals, true);
    }
    let (neg, digits, exp) = decimal_parts(x, sig.max(1), Round::Nearest);
    let (int_part, frac) = if exp <= 0 {
        ("0".to_string(), format!("{}{}", "0".repeat(exp.unsigned_abs() as usize), digits))
    } else {
        let e = exp as usize;
        if digits.len() <= e {
            (format!("{}{}", digits, "0".repeat(e - digits.len())), String::new())
        } else {
            (digits[..e].to_string(), digits[e..].to_string())
        }
    };
    let mut frac: String = frac.chars().take(decimals).collect();
    frac.push_str(&"0".repeat(decimals - frac.len()));
    let nonzero = int_part.bytes().chain(frac.bytes()).any(|b| b != b'0');
    let sign = if neg && nonzero { "-" } else { "" };
    if decimals == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac}")
    }
}

/// Full-precision decimal string that parses back to the same value at the
/// same precision.
pub fn to_exact_string(x: &Real) -> String {
    let digits = (f64::from(x.prec()) / LOG2_10).ceil() as usize + 2;
    format_sci(x, digits)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ctx() -> PrecisionContext {
        PrecisionContext::new(128).unwrap()
    }

    #[test]
    fn rejects_low_precision() {
        assert_eq!(PrecisionContext::new(32), Err(Error::Precision(32)));
        assert!(PrecisionContext::new(64).is_ok());
    }

    #[test]
    fn decimal_exponent_sizing() {
        // 1.2 * log2(10) * 100 = 398.63
        assert_eq!(PrecisionContext::for_decimal_exponent(100).bits(), 399);
        assert_eq!(PrecisionContext::for_decimal_exponent(1).bits(), 64);
    }

    #[test]
    fn field_ops_trivial() {
        let c = ctx();
        let a = c.complex(1, 2);
        let b = c.complex(3, -1);
        assert_eq!(&a + &b, c.complex(4, 1));
        let i = c.complex(0, 1);
        assert_eq!(&i * &i, c.complex(-1, 0));
        assert_eq!(c.complex(3, 4).abs(), 5);
        assert_eq!(&a - &b, c.complex(-2, 3));
        assert_eq!(-&a, c.complex(-1, -2));
    }

    #[test]
    fn division() {
        let c = ctx();
        let a = c.complex(1, 2);
        let b = c.complex(3, -1);
        // (1+2i)/(3-i) = (1+2i)(3+i)/10 = (1+7i)/10
        let q = a.checked_div(&b).unwrap();
        let expected = c.parse_complex("0.1", "0.7").unwrap();
        let err = (&q - &expected).abs();
        assert!(err < c.real(Float::i_exp(1, -120)));
        assert_eq!(a.checked_div(&BigComplex::zero(&c)), Err(Error::DivisionByZero));
        assert_eq!(BigComplex::zero(&c).recip(), Err(Error::DivisionByZero));
        let r = c.complex(0, 2).recip().unwrap();
        assert_eq!(r, c.parse_complex("0", "-0.5").unwrap());
    }

    #[test]
    fn real_ops() {
        let c = ctx();
        assert_eq!(c.sqrt(&c.real(25)).unwrap(), 5);
        // (b-1)^2 + 8a with a = 3, b = 2
        assert_eq!(c.sqrt(&c.real(1 + 8 * 3)).unwrap(), 5);
        assert_eq!(c.cos(&c.zero()), 1);
        assert!(matches!(c.sqrt(&c.real(-1)), Err(Error::Domain(_))));
        assert_eq!(c.pow(&c.zero(), &c.zero()).unwrap(), 1);
        assert_eq!(c.pow(&c.real(8), &c.parse_real("0.5").unwrap()).unwrap(),
            c.sqrt(&c.real(8)).unwrap());
        let pi = c.pi();
        assert!(c.sin(&pi).abs() < c.real(Float::i_exp(1, -120)));
    }

    #[test]
    fn parse_is_correctly_rounded() {
        let c = ctx();
        let x = c.parse_real("\u{2212}1.36").unwrap();
        let y = c.real(-136) / c.real(100);
        assert_eq!(x, y);
        assert!(c.parse_real("abc").is_err());
        assert!(c.parse_real("").is_err());
    }

    #[test]
    fn sci_formatting() {
        let c = ctx();
        let x = c.parse_real("0.01457548").unwrap();
        assert_eq!(format_sci(&x, 7), "1.457548e-2");
        assert_eq!(format_sci(&c.real(-25), 3), "-2.50e+1");
        assert_eq!(format_sci(&c.zero(), 3), "0.00e+0");
        let y = c.parse_real("8.91907399859e-63").unwrap();
        assert_eq!(format_sci(&y, 7), "8.919074e-63");
        assert_eq!(format_sci_truncated(&y, 7), "8.919073e-63");
        assert_eq!(format_sci_truncated(&c.parse_real("-9.9999e5").unwrap(), 2), "-9.9e+5");
        let (m, e) = mantissa_exponent(&c.parse_real("4.385760e-21").unwrap(), 7);
        assert_eq!(e, -21);
        assert!((m - 4.38576).abs() < 1e-12);
    }

    #[test]
    fn fixed_formatting() {
        let c = ctx();
        let x = c.parse_real("1.0000003804194961").unwrap();
        assert_eq!(format_fixed(&x, 15, false), "1.000000380419496");
        assert_eq!(format_fixed(&c.parse_real("0.0100319").unwrap(), 6, false), "0.010032");
        assert_eq!(format_fixed(&c.parse_real("0.0100319").unwrap(), 6, true), "0.010031");
        assert_eq!(format_fixed(&c.parse_real("-1e-40").unwrap(), 6, false), "0.000000");
        assert_eq!(format_fixed(&c.parse_real("0.9999999").unwrap(), 6, false), "1.000000");
        assert_eq!(format_fixed(&c.parse_real("-0.0000007").unwrap(), 6, false), "-0.000001");
        assert_eq!(format_fixed(&c.parse_real("-2.25").unwrap(), 1, true), "-2.2");
        assert_eq!(format_fixed(&c.parse_real("123.5").unwrap(), 0, false), "124");
        let two = |s: &str, d| format_fixed_rounded_then_truncated(&c.parse_real(s).unwrap(), 17, d);
        assert_eq!(two("1.00000038041949683309", 15), "1.000000380419496");
        assert_eq!(two("0.99999957839306255689", 15), "0.999999578393062");
        assert_eq!(two("0.999999999999999999999999", 15), "1.000000000000000");
        assert_eq!(two("-1.36", 15), "-1.360000000000000");
        assert_eq!(two("-1.19e-129", 15), "0.000000000000000");
        assert_eq!(two("-999.99999999999999999", 3), "-1000.000");
        assert_eq!(two("4.863578e-7", 6), "0.000000");
        assert_eq!(two("12345.678", 0), "12345");
    }

    #[test]
    fn exact_string_round_trip() {
        let c = ctx();
        let x = c.real(2).sqrt();
        let s = to_exact_string(&x);
        assert_eq!(c.parse_real(&s).unwrap(), x);
    }

    #[test]
    fn parse_format_round_trip_short_decimals() {
        let c = PrecisionContext::new(256).unwrap();
        for s in ["5.06619e-1", "-1.36000e+0", "2.43290200817664e+18", "1.820743e-57"] {
            let x = c.parse_real(s).unwrap();
            let digits = s.split('e').next().unwrap().replace(['-', '.'], "").len();
            assert_eq!(format_sci(&x, digits), s);
        }
    }

    #[test]
    fn precision_agreement() {
        // Leading 30 significant digits agree between 128 and 256 bits.
        let lo = PrecisionContext::new(128).unwrap();
        let hi = PrecisionContext::new(256).unwrap();
        let expr = |c: &PrecisionContext| {
            let z = c.parse_complex("0.5", "-1.37").unwrap();
            let w = c.parse_complex("-0.25", "1.28").unwrap();
            let q = (&z * &w).checked_div(&(&z - &w)).unwrap();
            let s = c.sqrt(&q.abs()).unwrap();
            let ang = c.cos(&c.pi()) + c.sin(&s);
            (format_sci(&q.re, 30), format_sci(&ang, 30))
        };
        assert_eq!(expr(&lo), expr(&hi));
    }

    #[test]
    fn cis_on_unit_circle() {
        let c = ctx();
        let z = c.cis(&(c.pi() / 3u32));
        let err = (z.abs() - 1u32).abs();
        assert!(err < c.real(Float::i_exp(1, -120)));
    }
}
