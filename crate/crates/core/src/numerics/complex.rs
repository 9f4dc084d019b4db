use alloc::format;
use alloc::string::String;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use super::elementary;
use super::float::Float;
use super::{fmt_rational, ComplexScalar};

/// Exact complex number with rational real and imaginary parts.
pub type GaussRational = Complex<BigRational>;

/// Complex number over precision-tagged floats.
pub type ComplexFloat = Complex<Float>;

/// A complex scalar in one of the two evaluation modes.
#[derive(Clone, Debug, PartialEq)]
pub enum ComplexValue {
    Exact(GaussRational),
    Float(ComplexFloat),
}

impl ComplexValue {
    pub fn is_exact(&self) -> bool {
        matches!(self, ComplexValue::Exact(_))
    }

    pub fn to_float(&self, prec: u32) -> ComplexFloat {
        match self {
            ComplexValue::Exact(g) => g.to_complex_float(prec),
            ComplexValue::Float(f) => f.clone(),
        }
    }

    pub fn re_f64(&self) -> f64 {
        match self {
            ComplexValue::Exact(g) => GaussRational::real_to_f64(&g.re),
            ComplexValue::Float(f) => f.re.to_f64(),
        }
    }

    pub fn im_f64(&self) -> f64 {
        match self {
            ComplexValue::Exact(g) => GaussRational::real_to_f64(&g.im),
            ComplexValue::Float(f) => f.im.to_f64(),
        }
    }

    /// Text for the real and imaginary parts: `p/q` in exact mode, decimal
    /// scientific notation with `digits` significant digits otherwise.
    pub fn parts_text(&self, digits: usize) -> (String, String) {
        match self {
            ComplexValue::Exact(g) => (fmt_rational(&g.re), fmt_rational(&g.im)),
            ComplexValue::Float(f) => (f.re.to_decimal(digits), f.im.to_decimal(digits)),
        }
    }

    pub fn mul(&self, other: &ComplexValue, prec: u32) -> ComplexValue {
        match (self, other) {
            (ComplexValue::Exact(a), ComplexValue::Exact(b)) => ComplexValue::Exact(a * b),
            _ => ComplexValue::Float(self.to_float(prec) * other.to_float(prec)),
        }
    }
}

impl core::fmt::Display for ComplexValue {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let (re, im) = self.parts_text(20);
        let im_zero = match self {
            ComplexValue::Exact(g) => g.im.is_zero(),
            ComplexValue::Float(c) => c.im.is_zero(),
        };
        if im_zero {
            write!(f, "{}", re)
        } else if im.starts_with('-') {
            write!(f, "{}{}i", re, im)
        } else {
            write!(f, "{}+{}i", re, im)
        }
    }
}

/// Complex exponential.
pub fn cexp(z: &ComplexFloat, prec: u32) -> ComplexFloat {
    let wp = prec + 16;
    let m = elementary::exp(&z.re, wp);
    if z.im.is_zero() {
        return Complex::new(m.round_to(prec), Float::zero());
    }
    let (s, c) = elementary::sin_cos(&z.im, wp);
    Complex::new((&m * &c).round_to(prec), (&m * &s).round_to(prec))
}

/// Principal logarithm, imaginary part in `(-pi, pi]`.
pub fn cln(z: &ComplexFloat, prec: u32) -> ComplexFloat {
    assert!(!(z.re.is_zero() && z.im.is_zero()), "logarithm of zero");
    let wp = prec + 16;
    if z.im.is_zero() && z.re.signum_i() > 0 {
        return Complex::new(elementary::ln(&z.re, prec), Float::zero());
    }
    let re = z.re.round_to(wp);
    let im = z.im.round_to(wp);
    let r2 = &(&re * &re) + &(&im * &im);
    let l = elementary::ln(&r2, wp).mul_pow2(-1);
    let a = elementary::atan2(&im, &re, wp);
    Complex::new(l.round_to(prec), a.round_to(prec))
}

/// Principal power `base^expo = exp(expo * ln base)`.
pub fn cpow(base: &ComplexFloat, expo: &ComplexFloat, prec: u32) -> ComplexFloat {
    if expo.re.is_zero() && expo.im.is_zero() {
        return Complex::new(Float::from_i64(1).round_to(prec), Float::zero());
    }
    let mag = base.re.log2_abs().max(base.im.log2_abs()).abs() + expo.re.log2_abs().max(expo.im.log2_abs()).max(0.0);
    let wp = prec + 16 + mag.max(0.0) as u32;
    let l = cln(&Complex::new(base.re.round_to(wp), base.im.round_to(wp)), wp);
    cexp(&(expo.to_complex_float(wp) * l), prec)
}

/// Debug text for a Gaussian rational, e.g. `1/2-3i`.
pub fn fmt_gauss(g: &GaussRational) -> String {
    if g.im.is_zero() {
        fmt_rational(&g.re)
    } else if g.re.is_zero() {
        format!("{}i", fmt_rational(&g.im))
    } else if g.im < BigRational::zero() {
        format!("{}{}i", fmt_rational(&g.re), fmt_rational(&g.im))
    } else {
        format!("{}+{}i", fmt_rational(&g.re), fmt_rational(&g.im))
    }
}
