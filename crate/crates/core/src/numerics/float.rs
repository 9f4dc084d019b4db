//! Binary floating point with a per-value precision tag.
//!
//! A [`Float`] is either an exact rational (constants, integers, anything
//! that never touched a rounded value) or an approximate dyadic
//! `mant * 2^exp` rounded to `prec` significant bits. Mixing an exact and an
//! approximate operand yields an approximate result at the approximate
//! operand's precision; two approximate operands yield the larger of the
//! two precisions. The exponent is an `i64`, so products of long Pochhammer
//! chains never overflow.

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Rem, Sub};

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{Num, One, Signed, ToPrimitive, Zero};

#[derive(Clone)]
pub struct Float {
    repr: Repr,
}

#[derive(Clone)]
enum Repr {
    Exact(BigRational),
    Approx { mant: BigInt, exp: i64, prec: u32 },
}

fn bits_of(m: &BigInt) -> i64 {
    m.bits() as i64
}

/// Round `mant * 2^exp` to `prec` bits, ties to even, and strip trailing zeros.
fn make(mant: BigInt, exp: i64, prec: u32) -> Float {
    let prec = prec.max(2);
    if mant.is_zero() {
        return Float { repr: Repr::Approx { mant, exp: 0, prec } };
    }
    let (sign, mut mag) = mant.into_parts();
    let mut exp = exp;
    let bits = mag.bits();
    if bits > prec as u64 {
        let shift = bits - prec as u64;
        let q: BigUint = &mag >> shift;
        let rem = &mag - (&q << shift);
        let half = BigUint::one() << (shift - 1);
        mag = match rem.cmp(&half) {
            Ordering::Greater => q + 1u32,
            Ordering::Less => q,
            Ordering::Equal => {
                if q.is_odd() {
                    q + 1u32
                } else {
                    q
                }
            }
        };
        exp += shift as i64;
    }
    if let Some(tz) = mag.trailing_zeros() {
        if tz > 0 {
            mag >>= tz;
            exp += tz as i64;
        }
    }
    Float {
        repr: Repr::Approx {
            mant: BigInt::from_biguint(sign, mag),
            exp,
            prec,
        },
    }
}

fn shl_signed(m: &BigInt, s: i64) -> BigInt {
    if s >= 0 {
        m << (s as usize)
    } else {
        m >> ((-s) as usize)
    }
}

/// Exact rational to dyadic at `prec` bits (one sticky bit keeps rounding honest).
fn rational_to_dyadic(q: &BigRational, prec: u32) -> Float {
    let num = q.numer();
    let den = q.denom();
    if den.is_one() {
        return make(num.clone(), 0, prec);
    }
    let s = (prec as i64 + 3 + bits_of(den) - bits_of(num)).max(0);
    let (quo, rem) = (num.abs() << (s as usize)).div_rem(den);
    let mut mant = quo << 1usize;
    if !rem.is_zero() {
        mant += 1;
    }
    if num.is_negative() {
        mant = -mant;
    }
    make(mant, -s - 1, prec)
}

impl Float {
    pub fn exact(q: BigRational) -> Self {
        Float { repr: Repr::Exact(q) }
    }

    pub fn from_i64(n: i64) -> Self {
        Float::exact(BigRational::from_integer(BigInt::from(n)))
    }

    /// `q` rounded to `prec` bits.
    pub fn with_prec(q: &BigRational, prec: u32) -> Self {
        rational_to_dyadic(q, prec)
    }

    /// Exactly representable f64 value tagged with `prec`.
    pub fn from_f64(x: f64, prec: u32) -> Self {
        let q = BigRational::from_float(x).expect("finite f64");
        rational_to_dyadic(&q, prec.max(53))
    }

    /// `mant * 2^exp` rounded to `prec` bits.
    pub fn from_parts(mant: BigInt, exp: i64, prec: u32) -> Self {
        make(mant, exp, prec)
    }

    /// `None` for exact values.
    pub fn prec(&self) -> Option<u32> {
        match &self.repr {
            Repr::Exact(_) => None,
            Repr::Approx { prec, .. } => Some(*prec),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    /// Approximate copy at exactly `prec` bits.
    pub fn round_to(&self, prec: u32) -> Self {
        match &self.repr {
            Repr::Exact(q) => rational_to_dyadic(q, prec),
            Repr::Approx { mant, exp, .. } => make(mant.clone(), *exp, prec),
        }
    }

    pub fn to_rational(&self) -> BigRational {
        match &self.repr {
            Repr::Exact(q) => q.clone(),
            Repr::Approx { mant, exp, .. } => {
                if *exp >= 0 {
                    BigRational::from_integer(mant << (*exp as usize))
                } else {
                    BigRational::new(mant.clone(), BigInt::one() << ((-*exp) as usize))
                }
            }
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.repr {
            Repr::Exact(q) => q.is_zero(),
            Repr::Approx { mant, .. } => mant.is_zero(),
        }
    }

    pub fn signum_i(&self) -> i32 {
        let s = match &self.repr {
            Repr::Exact(q) => q.numer().sign(),
            Repr::Approx { mant, .. } => mant.sign(),
        };
        match s {
            Sign::Minus => -1,
            Sign::NoSign => 0,
            Sign::Plus => 1,
        }
    }

    pub fn abs(&self) -> Self {
        if self.signum_i() < 0 {
            -self.clone()
        } else {
            self.clone()
        }
    }

    /// Multiply by `2^k` exactly.
    pub fn mul_pow2(&self, k: i64) -> Self {
        match &self.repr {
            Repr::Exact(q) => {
                let two = BigInt::from(2u32);
                let p = num_traits::pow(two, k.unsigned_abs() as usize);
                let f = BigRational::from_integer(p);
                Float::exact(if k >= 0 { q * f } else { q / f })
            }
            Repr::Approx { mant, exp, prec } => Float {
                repr: Repr::Approx {
                    mant: mant.clone(),
                    exp: exp + k,
                    prec: *prec,
                },
            },
        }
    }

    /// Approximate `log2 |x|`; `-inf` for zero. Never overflows.
    pub fn log2_abs(&self) -> f64 {
        match &self.repr {
            Repr::Exact(q) => {
                if q.is_zero() {
                    return f64::NEG_INFINITY;
                }
                log2_big(q.numer()) - log2_big(q.denom())
            }
            Repr::Approx { mant, exp, .. } => {
                if mant.is_zero() {
                    return f64::NEG_INFINITY;
                }
                log2_big(mant) + *exp as f64
            }
        }
    }

    /// Nearest f64 (saturates to +-inf / 0 outside the f64 range).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let l = self.log2_abs();
        if l > 1100.0 {
            return self.signum_i() as f64 * f64::INFINITY;
        }
        if l < -1100.0 {
            return 0.0;
        }
        let approx = self.round_to(64);
        match approx.repr {
            Repr::Approx { mant, exp, .. } => {
                let m = mant.to_f64().unwrap_or(0.0);
                libm::scalbn(m, exp as i32)
            }
            Repr::Exact(_) => unreachable!(),
        }
    }

    pub fn floor(&self) -> BigInt {
        let q = self.to_rational();
        q.floor().to_integer()
    }

    /// Nearest integer, ties away from zero.
    pub fn round_int(&self) -> BigInt {
        let q = self.to_rational();
        q.round().to_integer()
    }

    pub fn sqrt(&self, prec: u32) -> Self {
        assert!(self.signum_i() >= 0, "sqrt of a negative Float");
        if self.is_zero() {
            return make(BigInt::zero(), 0, prec);
        }
        let x = match &self.repr {
            Repr::Exact(q) => rational_to_dyadic(q, prec + 8),
            Repr::Approx { .. } => self.clone(),
        };
        let (mant, exp) = match x.repr {
            Repr::Approx { mant, exp, .. } => (mant, exp),
            Repr::Exact(_) => unreachable!(),
        };
        let mag = mant.magnitude().clone();
        // scale so the integer root has prec + 4 bits and the exponent is even
        let mut shift = 2 * (prec as i64 + 4) - mag.bits() as i64;
        if shift < 0 {
            shift = 0;
        }
        if (exp - shift).rem_euclid(2) != 0 {
            shift += 1;
        }
        let scaled = &mag << (shift as usize);
        let root = scaled.sqrt();
        let exact = &root * &root == scaled;
        let mut m = BigInt::from(root) << 1usize;
        if !exact {
            m += 1;
        }
        make(m, (exp - shift) / 2 - 1, prec)
    }

    /// Scientific notation with `digits` significant digits, e.g. `-1.2500e-3`.
    pub fn to_decimal(&self, digits: usize) -> String {
        let digits = digits.max(1);
        if self.is_zero() {
            return String::from("0");
        }
        let q = self.to_rational();
        let neg = q.is_negative();
        let q = q.abs();
        let mut e10 = libm::floor(self.log2_abs() * core::f64::consts::LOG10_2) as i64;
        let ten = BigInt::from(10u32);
        let pow10 = |k: i64| -> BigRational {
            let p = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
            if k >= 0 {
                BigRational::from_integer(p)
            } else {
                BigRational::new(BigInt::one(), p)
            }
        };
        let mut scaled;
        loop {
            scaled = (&q * pow10(digits as i64 - 1 - e10)).round().to_integer();
            let len = scaled.to_str_radix(10).len();
            if len > digits {
                e10 += 1;
            } else if len < digits {
                e10 -= 1;
            } else {
                break;
            }
        }
        let s = scaled.to_str_radix(10);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&s[..1]);
        if s.len() > 1 {
            out.push('.');
            out.push_str(&s[1..]);
        }
        out.push('e');
        out.push_str(&alloc::format!("{}", e10));
        out
    }
}

fn log2_big(m: &BigInt) -> f64 {
    let bits = m.bits();
    if bits <= 64 {
        return libm::log2(m.abs().to_f64().unwrap_or(0.0));
    }
    let top: BigInt = m.abs() >> ((bits - 64) as usize);
    libm::log2(top.to_f64().unwrap_or(1.0)) + (bits - 64) as f64
}

fn approx_prec(a: &Float, b: &Float) -> Option<u32> {
    match (a.prec(), b.prec()) {
        (None, None) => None,
        (Some(p), None) | (None, Some(p)) => Some(p),
        (Some(p), Some(q)) => Some(p.max(q)),
    }
}

fn parts(x: &Float, prec: u32) -> (BigInt, i64) {
    let d = match &x.repr {
        Repr::Exact(q) => rational_to_dyadic(q, prec + 8),
        Repr::Approx { .. } => x.clone(),
    };
    match d.repr {
        Repr::Approx { mant, exp, .. } => (mant, exp),
        Repr::Exact(_) => unreachable!(),
    }
}

fn add_dyadic(a: (BigInt, i64), b: (BigInt, i64), prec: u32) -> Float {
    let ((m1, e1), (m2, e2)) = (a, b);
    if m1.is_zero() {
        return make(m2, e2, prec);
    }
    if m2.is_zero() {
        return make(m1, e1, prec);
    }
    let top1 = e1 + bits_of(&m1);
    let top2 = e2 + bits_of(&m2);
    let ((mb, eb), (ms, es), top_b, top_s) = if top1 >= top2 {
        ((m1, e1), (m2, e2), top1, top2)
    } else {
        ((m2, e2), (m1, e1), top2, top1)
    };
    if top_s + (prec as i64) + 4 < top_b {
        // the small operand only decides rounding: keep it as a sticky bit
        let k = (prec as i64 + 4 - bits_of(&mb)).max(0);
        let mut m = (&mb << (k as usize)) << 1usize;
        if ms.sign() == mb.sign() {
            m += 1;
        } else {
            m -= 1;
        }
        return make(m, eb - k - 1, prec);
    }
    let emin = eb.min(es);
    let m = shl_signed(&mb, eb - emin) + shl_signed(&ms, es - emin);
    make(m, emin, prec)
}

impl PartialEq for Float {
    fn eq(&self, other: &Self) -> bool {
        self.partial_cmp(other) == Some(Ordering::Equal)
    }
}

impl PartialOrd for Float {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        match (&self.repr, &other.repr) {
            (Repr::Exact(a), Repr::Exact(b)) => Some(a.cmp(b)),
            (Repr::Approx { mant: m1, exp: e1, .. }, Repr::Approx { mant: m2, exp: e2, .. }) => {
                let emin = (*e1).min(*e2);
                let a = shl_signed(m1, e1 - emin);
                let b = shl_signed(m2, e2 - emin);
                Some(a.cmp(&b))
            }
            _ => Some(self.to_rational().cmp(&other.to_rational())),
        }
    }
}

impl fmt::Debug for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(q) => write!(f, "{}", q),
            Repr::Approx { prec, .. } => {
                let digits = ((*prec as f64) * core::f64::consts::LOG10_2) as usize + 1;
                write!(f, "{}", self.to_decimal(digits.min(40)))
            }
        }
    }
}

impl fmt::Display for Float {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.repr {
            Repr::Exact(q) => write!(f, "{}", q),
            Repr::Approx { prec, .. } => {
                let digits = ((*prec as f64) * core::f64::consts::LOG10_2) as usize + 1;
                write!(f, "{}", self.to_decimal(digits))
            }
        }
    }
}

impl Neg for Float {
    type Output = Float;
    fn neg(self) -> Float {
        match self.repr {
            Repr::Exact(q) => Float::exact(-q),
            Repr::Approx { mant, exp, prec } => Float {
                repr: Repr::Approx { mant: -mant, exp, prec },
            },
        }
    }
}

impl<'a> Add<&'a Float> for &'a Float {
    type Output = Float;
    fn add(self, rhs: &Float) -> Float {
        match approx_prec(self, rhs) {
            None => Float::exact(self.to_rational() + rhs.to_rational()),
            Some(p) => add_dyadic(parts(self, p), parts(rhs, p), p),
        }
    }
}

impl<'a> Sub<&'a Float> for &'a Float {
    type Output = Float;
    fn sub(self, rhs: &Float) -> Float {
        match approx_prec(self, rhs) {
            None => Float::exact(self.to_rational() - rhs.to_rational()),
            Some(p) => {
                let (m, e) = parts(rhs, p);
                add_dyadic(parts(self, p), (-m, e), p)
            }
        }
    }
}

impl<'a> Mul<&'a Float> for &'a Float {
    type Output = Float;
    fn mul(self, rhs: &Float) -> Float {
        match approx_prec(self, rhs) {
            None => Float::exact(self.to_rational() * rhs.to_rational()),
            Some(p) => {
                let (m1, e1) = parts(self, p);
                let (m2, e2) = parts(rhs, p);
                make(m1 * m2, e1 + e2, p)
            }
        }
    }
}

impl<'a> Div<&'a Float> for &'a Float {
    type Output = Float;
    fn div(self, rhs: &Float) -> Float {
        assert!(!rhs.is_zero(), "Float division by zero");
        match approx_prec(self, rhs) {
            None => Float::exact(self.to_rational() / rhs.to_rational()),
            Some(p) => {
                let (m1, e1) = parts(self, p);
                let (m2, e2) = parts(rhs, p);
                if m1.is_zero() {
                    return make(m1, 0, p);
                }
                let s = (p as i64 + 3 + bits_of(&m2) - bits_of(&m1)).max(0);
                let neg = m1.sign() != m2.sign();
                let (quo, rem) = (m1.abs() << (s as usize)).div_rem(&m2.abs());
                let mut m = quo << 1usize;
                if !rem.is_zero() {
                    m += 1;
                }
                if neg {
                    m = -m;
                }
                make(m, e1 - e2 - s - 1, p)
            }
        }
    }
}

impl<'a> Rem<&'a Float> for &'a Float {
    type Output = Float;
    fn rem(self, rhs: &Float) -> Float {
        let q = self / rhs;
        let t = Float::exact(BigRational::from_integer(q.to_rational().trunc().to_integer()));
        self - &(&t * rhs)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Float> for Float {
            type Output = Float;
            fn $m(self, rhs: Float) -> Float {
                (&self).$m(&rhs)
            }
        }
        impl<'a> $tr<&'a Float> for Float {
            type Output = Float;
            fn $m(self, rhs: &Float) -> Float {
                (&self).$m(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);
forward_owned!(Rem, rem);

impl Zero for Float {
    fn zero() -> Self {
        Float::exact(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        Float::is_zero(self)
    }
}

impl One for Float {
    fn one() -> Self {
        Float::exact(BigRational::one())
    }
}

impl Num for Float {
    type FromStrRadixErr = crate::Error;
    /// Decimal strings parse to exact values; only radix 10 is supported.
    fn from_str_radix(s: &str, radix: u32) -> Result<Self, Self::FromStrRadixErr> {
        if radix != 10 {
            return Err(crate::Error::Parse(alloc::format!("unsupported radix {}", radix)));
        }
        crate::numerics::parse_decimal(s).map(Float::exact)
    }
}

impl From<i64> for Float {
    fn from(n: i64) -> Self {
        Float::from_i64(n)
    }
}

/// Shared by the decimal parser.
pub(crate) fn digits_to_rational(int_part: &str, frac_part: &str, exp10: i64) -> Option<BigRational> {
    let mut all: Vec<u8> = Vec::with_capacity(int_part.len() + frac_part.len());
    all.extend_from_slice(int_part.as_bytes());
    all.extend_from_slice(frac_part.as_bytes());
    let s = core::str::from_utf8(&all).ok()?;
    let s = if s.is_empty() { "0" } else { s };
    let mant = BigInt::parse_bytes(s.as_bytes(), 10)?;
    let e = exp10 - frac_part.len() as i64;
    let ten = BigInt::from(10u32);
    let p = num_traits::pow(ten, e.unsigned_abs() as usize);
    Some(if e >= 0 {
        BigRational::from_integer(mant * p)
    } else {
        BigRational::new(mant, p)
    })
}
