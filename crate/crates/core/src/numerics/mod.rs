//! Scalar substrate: exact rationals, Gaussian rationals, precision-tagged
//! floats and complex floats, plus rational polynomials in up to two symbols.
//!
//! Every coefficient pipeline in the crate is generic over [`Scalar`] (rings
//! that can divide by integers) or [`Field`]. Exact mode instantiates them
//! with [`GaussRational`]; float mode with [`ComplexFloat`]; symbolic checks
//! with [`RatPoly`].

mod complex;
pub mod elementary;
mod float;
mod pochhammer;
mod poly;

use alloc::format;
use alloc::string::String;
use core::fmt::Debug;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub use complex::{cexp, cln, cpow, fmt_gauss, ComplexFloat, ComplexValue, GaussRational};
pub use float::Float;
pub use pochhammer::{binomial, factorial, gen_binomial, pochhammer};
pub use poly::{poly_eval, RatPoly};

use crate::Error;

/// Commutative ring with exact integer and rational constants and division
/// by nonzero integers.
pub trait Scalar:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn from_rational(q: &BigRational) -> Self;

    fn from_bigint(n: &BigInt) -> Self {
        Self::from_rational(&BigRational::from_integer(n.clone()))
    }

    fn from_i64(n: i64) -> Self {
        Self::from_bigint(&BigInt::from(n))
    }

    fn mul_rational(&self, q: &BigRational) -> Self {
        self.clone() * Self::from_rational(q)
    }

    fn mul_bigint(&self, n: &BigInt) -> Self {
        self.clone() * Self::from_bigint(n)
    }

    fn div_int(&self, n: i64) -> Self {
        self.mul_rational(&BigRational::new(BigInt::one(), BigInt::from(n)))
    }

    /// Exact-zero test; approximate values are zero only if every bit is.
    fn is_exact_zero(&self) -> bool {
        self.is_zero()
    }
}

/// A [`Scalar`] with general division.
pub trait Field: Scalar + Div<Output = Self> {
    /// Magnitude estimate used for pivot selection.
    fn magnitude(&self) -> f64;
}

/// Outcome of testing whether a value sits on an integer.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntegerTest {
    Integer(BigInt),
    NotInteger,
    /// Float-mode value closer to an integer than the coincidence tolerance
    /// but not close enough to call it equal.
    Ambiguous,
}

/// Complex scalars used for gamma-ratio parameters.
pub trait ComplexScalar: Field {
    type Real: Clone + PartialOrd + Debug + Zero + One + Add<Output = Self::Real> + Sub<Output = Self::Real> + Neg<Output = Self::Real>;

    fn from_real(r: &Self::Real) -> Self;
    /// Embed an exact value; floats stay exact until combined with approximate ones.
    fn from_gauss(g: &GaussRational) -> Self;
    fn re(&self) -> Self::Real;
    fn im(&self) -> Self::Real;
    fn real_to_f64(r: &Self::Real) -> f64;
    fn real_to_float(r: &Self::Real, prec: u32) -> Float;
    fn to_complex_float(&self, prec: u32) -> ComplexFloat;
    /// `Some` only for exact Gaussian rationals.
    fn as_gauss(&self) -> Option<GaussRational>;
    fn into_value(self) -> ComplexValue;
    /// Working precision of approximate values, `None` in exact mode.
    fn precision(&self) -> Option<u32>;
    /// Is the value an integer? `eps_log2` is the coincidence tolerance
    /// (log2 of the relative distance) used in float mode.
    fn integer_test(&self, eps_log2: f64) -> IntegerTest;
    /// Equality up to a relative tolerance `2^tol_log2` in float mode; exact otherwise.
    fn approx_eq(&self, other: &Self, tol_log2: f64) -> bool;
}

impl Scalar for BigRational {
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
    fn div_int(&self, n: i64) -> Self {
        self / BigRational::from_integer(BigInt::from(n))
    }
}

impl Field for BigRational {
    fn magnitude(&self) -> f64 {
        self.abs().to_f64().unwrap_or(f64::INFINITY)
    }
}

impl Scalar for GaussRational {
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(q.clone(), BigRational::zero())
    }
    fn mul_rational(&self, q: &BigRational) -> Self {
        Complex::new(&self.re * q, &self.im * q)
    }
    fn div_int(&self, n: i64) -> Self {
        let d = BigRational::from_integer(BigInt::from(n));
        Complex::new(&self.re / &d, &self.im / &d)
    }
}

impl Field for GaussRational {
    fn magnitude(&self) -> f64 {
        let r = self.re.to_f64().unwrap_or(f64::INFINITY);
        let i = self.im.to_f64().unwrap_or(f64::INFINITY);
        libm::hypot(r, i)
    }
}

impl ComplexScalar for GaussRational {
    type Real = BigRational;
    fn from_real(r: &BigRational) -> Self {
        Complex::new(r.clone(), BigRational::zero())
    }
    fn from_gauss(g: &GaussRational) -> Self {
        g.clone()
    }
    fn re(&self) -> BigRational {
        self.re.clone()
    }
    fn im(&self) -> BigRational {
        self.im.clone()
    }
    fn real_to_f64(r: &BigRational) -> f64 {
        r.to_f64().unwrap_or(f64::NAN)
    }
    fn real_to_float(r: &BigRational, prec: u32) -> Float {
        Float::with_prec(r, prec)
    }
    fn to_complex_float(&self, prec: u32) -> ComplexFloat {
        Complex::new(Float::with_prec(&self.re, prec), Float::with_prec(&self.im, prec))
    }
    fn as_gauss(&self) -> Option<GaussRational> {
        Some(self.clone())
    }
    fn into_value(self) -> ComplexValue {
        ComplexValue::Exact(self)
    }
    fn precision(&self) -> Option<u32> {
        None
    }
    fn integer_test(&self, _eps_log2: f64) -> IntegerTest {
        if self.im.is_zero() && self.re.is_integer() {
            IntegerTest::Integer(self.re.to_integer())
        } else {
            IntegerTest::NotInteger
        }
    }
    fn approx_eq(&self, other: &Self, _tol_log2: f64) -> bool {
        self == other
    }
}

impl Scalar for Float {
    fn from_rational(q: &BigRational) -> Self {
        Float::exact(q.clone())
    }
    fn div_int(&self, n: i64) -> Self {
        self / &Float::from_i64(n)
    }
}

impl Field for Float {
    fn magnitude(&self) -> f64 {
        let l = self.log2_abs();
        if l > 1000.0 {
            f64::INFINITY
        } else {
            self.abs().to_f64()
        }
    }
}

impl Scalar for ComplexFloat {
    fn from_rational(q: &BigRational) -> Self {
        Complex::new(Float::exact(q.clone()), Float::zero())
    }
    fn mul_rational(&self, q: &BigRational) -> Self {
        let f = Float::exact(q.clone());
        Complex::new(&self.re * &f, &self.im * &f)
    }
    fn div_int(&self, n: i64) -> Self {
        let d = Float::from_i64(n);
        Complex::new(&self.re / &d, &self.im / &d)
    }
}

impl Field for ComplexFloat {
    fn magnitude(&self) -> f64 {
        let l = self.re.log2_abs().max(self.im.log2_abs());
        if l > 1000.0 {
            return f64::INFINITY;
        }
        libm::hypot(self.re.to_f64(), self.im.to_f64())
    }
}

fn log2_abs_c(z: &ComplexFloat) -> f64 {
    z.re.log2_abs().max(z.im.log2_abs())
}

impl ComplexScalar for ComplexFloat {
    type Real = Float;
    fn from_real(r: &Float) -> Self {
        Complex::new(r.clone(), Float::zero())
    }
    fn from_gauss(g: &GaussRational) -> Self {
        Complex::new(Float::exact(g.re.clone()), Float::exact(g.im.clone()))
    }
    fn re(&self) -> Float {
        self.re.clone()
    }
    fn im(&self) -> Float {
        self.im.clone()
    }
    fn real_to_f64(r: &Float) -> f64 {
        r.to_f64()
    }
    fn real_to_float(r: &Float, prec: u32) -> Float {
        r.round_to(prec)
    }
    fn to_complex_float(&self, prec: u32) -> ComplexFloat {
        Complex::new(self.re.round_to(prec), self.im.round_to(prec))
    }
    fn as_gauss(&self) -> Option<GaussRational> {
        None
    }
    fn into_value(self) -> ComplexValue {
        ComplexValue::Float(self)
    }
    fn precision(&self) -> Option<u32> {
        match (self.re.prec(), self.im.prec()) {
            (None, None) => None,
            (Some(p), None) | (None, Some(p)) => Some(p),
            (Some(p), Some(q)) => Some(p.max(q)),
        }
    }
    fn integer_test(&self, eps_log2: f64) -> IntegerTest {
        let n = self.re.round_int();
        let nf = Float::exact(BigRational::from_integer(n.clone()));
        let d = (&self.re - &nf).abs();
        let dist = d.log2_abs().max(self.im.log2_abs());
        if dist == f64::NEG_INFINITY {
            return IntegerTest::Integer(n);
        }
        let prec = match self.precision() {
            Some(p) => p as f64,
            None => return IntegerTest::NotInteger,
        };
        let scale = log2_abs_c(self).max(0.0);
        let rel = dist - scale;
        if rel < -(prec - 8.0) {
            IntegerTest::Integer(n)
        } else if rel < eps_log2 {
            IntegerTest::Ambiguous
        } else {
            IntegerTest::NotInteger
        }
    }
    fn approx_eq(&self, other: &Self, tol_log2: f64) -> bool {
        let d = self.clone() - other.clone();
        if d.re.is_zero() && d.im.is_zero() {
            return true;
        }
        let scale = log2_abs_c(self).max(log2_abs_c(other)).max(0.0);
        log2_abs_c(&d) - scale < tol_log2
    }
}

/// Parse `"p/q"`, `"p"` or a decimal such as `"-1.25e-3"` into an exact
/// rational. Also reports whether the text was a decimal (float-mode input).
pub fn parse_real(s: &str) -> Result<(BigRational, bool), Error> {
    let t = s.trim();
    if t.is_empty() {
        return Err(Error::Parse(String::from("empty number")));
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = parse_int(n)?;
        let d = parse_int(d)?;
        if d.is_zero() {
            return Err(Error::Parse(format!("zero denominator in {:?}", t)));
        }
        return Ok((BigRational::new(n, d), false));
    }
    if t.contains(['.', 'e', 'E']) {
        return Ok((parse_decimal(t)?, true));
    }
    Ok((BigRational::from_integer(parse_int(t)?), false))
}

fn parse_int(s: &str) -> Result<BigInt, Error> {
    let t = s.trim();
    let t = t.strip_prefix('+').unwrap_or(t);
    BigInt::parse_bytes(t.as_bytes(), 10).ok_or_else(|| Error::Parse(format!("invalid integer {:?}", s)))
}

/// Exact value of a decimal literal.
pub fn parse_decimal(s: &str) -> Result<BigRational, Error> {
    let bad = || Error::Parse(format!("invalid decimal {:?}", s));
    let t = s.trim();
    let (neg, t) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (mant, exp) = match t.find(['e', 'E']) {
        Some(i) => (&t[..i], t[i + 1..].parse::<i64>().map_err(|_| bad())?),
        None => (t, 0),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    if !ip.bytes().all(|b| b.is_ascii_digit()) || !fp.bytes().all(|b| b.is_ascii_digit()) {
        return Err(bad());
    }
    let q = float::digits_to_rational(ip, fp, exp).ok_or_else(bad)?;
    Ok(if neg { -q } else { q })
}

/// `p/q` text for a rational; integers print without a denominator.
pub fn fmt_rational(q: &BigRational) -> String {
    if q.is_integer() {
        format!("{}", q.numer())
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn parse_forms() {
        assert_eq!(parse_real("3/4").unwrap(), (q(3, 4), false));
        assert_eq!(parse_real("-7").unwrap(), (q(-7, 1), false));
        assert_eq!(parse_real("1.25e-1").unwrap(), (q(1, 8), true));
        assert_eq!(parse_real("-.5").unwrap(), (q(-1, 2), true));
        assert!(parse_real("1/0").is_err());
        assert!(parse_real("abc").is_err());
        assert!(parse_real("1.2.3").is_err());
    }

    #[test]
    fn integer_test_float_mode() {
        let near = Complex::new(Float::with_prec(&q(-3, 1), 128), Float::zero());
        assert_eq!(near.integer_test(-64.0), IntegerTest::Integer(BigInt::from(-3)));
        let off = Complex::new(Float::with_prec(&q(-5, 2), 128), Float::zero());
        assert_eq!(off.integer_test(-64.0), IntegerTest::NotInteger);
        let close = Complex::new(&Float::with_prec(&q(2, 1), 128) + &Float::with_prec(&q(1, 1), 128).mul_pow2(-90), Float::zero());
        assert_eq!(close.integer_test(-64.0), IntegerTest::Ambiguous);
    }

    fn arb_q() -> impl Strategy<Value = BigRational> {
        (-1000i64..1000, 1i64..200).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn rational_arithmetic_is_exact(a in arb_q(), b in arb_q()) {
            prop_assert_eq!((&a + &b) - &b, a.clone());
            if !b.is_zero() {
                prop_assert_eq!((&a * &b) / &b, a);
            }
        }

        #[test]
        fn rational_text_roundtrip(a in arb_q()) {
            let s = fmt_rational(&a);
            prop_assert_eq!(parse_real(&s).unwrap().0, a);
        }
    }
}
