//! Elementary functions on [`Float`] with truncation-certified series.
//!
//! Every routine works internally with guard bits above the requested
//! precision and stops a series once the next term falls below
//! `2^-(wp + 2)` relative to the running sum.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use super::float::Float;

const GUARD: u32 = 24;

fn small(x: &Float, sum: &Float, wp: u32) -> bool {
    x.is_zero() || x.log2_abs() < sum.log2_abs().max(0.0) - wp as f64 - 2.0
}

fn exact_int(n: i64) -> Float {
    Float::from_i64(n)
}

/// `sum_{k>=0} (-1)^k / ((2k+1) n^(2k+1))`.
fn atan_recip(n: i64, wp: u32) -> Float {
    let x = Float::with_prec(&BigRational::new(BigInt::one(), BigInt::from(n)), wp);
    let x2 = &x * &x;
    let mut term = x.clone();
    let mut sum = x;
    let mut k = 1i64;
    loop {
        term = &term * &x2;
        let t = &term / &exact_int(2 * k + 1);
        if t.log2_abs() < -(wp as f64) - 4.0 {
            break;
        }
        sum = if k % 2 == 1 { &sum - &t } else { &sum + &t };
        k += 1;
    }
    sum
}

/// pi by Machin's formula.
pub fn pi(prec: u32) -> Float {
    let wp = prec + GUARD;
    let a = atan_recip(5, wp);
    let b = atan_recip(239, wp);
    (&(&a * &exact_int(16)) - &(&b * &exact_int(4))).round_to(prec)
}

/// ln 2 = 2 atanh(1/3).
pub fn ln2(prec: u32) -> Float {
    let wp = prec + GUARD;
    let y = Float::with_prec(&BigRational::new(BigInt::one(), BigInt::from(3)), wp);
    atanh_series(&y, wp).mul_pow2(1).round_to(prec)
}

/// `sum y^(2k+1)/(2k+1)` for small |y|.
fn atanh_series(y: &Float, wp: u32) -> Float {
    let y2 = y * y;
    let mut pow = y.clone();
    let mut sum = y.clone();
    let mut k = 1i64;
    loop {
        pow = &pow * &y2;
        let t = &pow / &exact_int(2 * k + 1);
        if small(&t, &sum, wp) {
            break;
        }
        sum = &sum + &t;
        k += 1;
    }
    sum
}

pub fn exp(x: &Float, prec: u32) -> Float {
    if x.is_zero() {
        return Float::from_i64(1).round_to(prec);
    }
    let mag = x.log2_abs().max(0.0) as u32;
    let wp = prec + GUARD + mag;
    let x = x.round_to(wp);
    let l2 = ln2(wp + mag + 8);
    let k = (&x / &l2).round_int();
    let kf = Float::exact(BigRational::from_integer(k.clone()));
    let r = &x - &(&kf * &l2);
    // halve the reduced argument s times, then square back
    let s = (libm::sqrt(wp as f64) as i64).max(4);
    let wp2 = wp + s as u32;
    let r = r.round_to(wp2).mul_pow2(-s);
    let mut term = Float::from_i64(1).round_to(wp2);
    let mut sum = term.clone();
    let mut n = 1i64;
    loop {
        term = &(&term * &r) / &exact_int(n);
        if small(&term, &sum, wp2) {
            break;
        }
        sum = &sum + &term;
        n += 1;
    }
    for _ in 0..s {
        sum = &sum * &sum;
    }
    let k = k.to_i64().expect("exp argument out of range");
    sum.mul_pow2(k).round_to(prec)
}

/// Natural logarithm of a positive value.
pub fn ln(x: &Float, prec: u32) -> Float {
    assert!(x.signum_i() > 0, "ln of a non-positive Float");
    if x.is_exact() && x.to_rational().is_one() {
        return Float::from_i64(0).round_to(prec);
    }
    let wp = prec + GUARD + 16;
    let x = x.round_to(wp);
    let e = libm::round(x.log2_abs()) as i64;
    let m = x.mul_pow2(-e);
    let one = Float::from_i64(1);
    let mut y = &(&m - &one) / &(&m + &one);
    let mut k = 0i64;
    let mut m = m;
    // square roots shrink y; skip when y is already tiny to keep relative accuracy
    while y.log2_abs() > -24.0 && k < 10 {
        m = m.sqrt(wp);
        y = &(&m - &one) / &(&m + &one);
        k += 1;
    }
    let lm = atanh_series(&y, wp).mul_pow2(1 + k);
    let res = if e != 0 {
        let bits = 64 - e.unsigned_abs().leading_zeros();
        &lm + &(&ln2(wp + bits) * &exact_int(e))
    } else {
        lm
    };
    res.round_to(prec)
}

fn sin_cos_taylor(r: &Float, wp: u32) -> (Float, Float) {
    let r2 = r * r;
    let mut s_term = r.clone();
    let mut s_sum = r.clone();
    let mut c_term = Float::from_i64(1).round_to(wp);
    let mut c_sum = c_term.clone();
    let mut n = 1i64;
    let one = Float::from_i64(1).round_to(wp);
    loop {
        c_term = -(&(&c_term * &r2) / &exact_int((2 * n - 1) * (2 * n)));
        s_term = -(&(&s_term * &r2) / &exact_int((2 * n) * (2 * n + 1)));
        let done = small(&c_term, &one, wp) && small(&s_term, &s_sum, wp);
        c_sum = &c_sum + &c_term;
        s_sum = &s_sum + &s_term;
        if done {
            break;
        }
        n += 1;
    }
    (s_sum, c_sum)
}

/// `(sin x, cos x)`.
pub fn sin_cos(x: &Float, prec: u32) -> (Float, Float) {
    if x.is_zero() {
        return (Float::from_i64(0).round_to(prec), Float::from_i64(1).round_to(prec));
    }
    let mag = x.log2_abs().max(0.0) as u32;
    let wp = prec + GUARD + 8;
    let x = x.round_to(wp + mag);
    let half_pi = pi(wp + 2 * mag + 8).mul_pow2(-1);
    let k = (&x / &half_pi).round_int();
    let kf = Float::exact(BigRational::from_integer(k.clone()));
    let r = (&x - &(&kf * &half_pi)).round_to(wp);
    let (s, c) = sin_cos_taylor(&r, wp);
    let quadrant = k.mod_floor(&BigInt::from(4)).to_u8().unwrap_or(0);
    let (s, c) = match quadrant {
        0 => (s, c),
        1 => (c, -s),
        2 => (-s, -c),
        _ => (-c, s),
    };
    (s.round_to(prec), c.round_to(prec))
}

pub fn atan(x: &Float, prec: u32) -> Float {
    if x.is_zero() {
        return Float::from_i64(0).round_to(prec);
    }
    let wp = prec + GUARD + 16;
    let one = Float::from_i64(1);
    let x = x.round_to(wp);
    if x.abs() > one {
        let inv = &one / &x;
        let half_pi = pi(wp).mul_pow2(-1);
        let base = atan(&inv, wp);
        let res = if x.signum_i() > 0 {
            &half_pi - &base
        } else {
            &(-half_pi) - &base
        };
        return res.round_to(prec);
    }
    let mut y = x;
    let mut k = 0i64;
    while y.log2_abs() > -16.0 {
        let root = (&one + &(&y * &y)).sqrt(wp);
        y = &y / &(&one + &root);
        k += 1;
    }
    let y2 = &y * &y;
    let mut pow = y.clone();
    let mut sum = y.clone();
    let mut n = 1i64;
    loop {
        pow = -(&pow * &y2);
        let t = &pow / &exact_int(2 * n + 1);
        if small(&t, &sum, wp) {
            break;
        }
        sum = &sum + &t;
        n += 1;
    }
    sum.mul_pow2(k).round_to(prec)
}

/// Angle of the point `(x, y)` in `(-pi, pi]`.
pub fn atan2(y: &Float, x: &Float, prec: u32) -> Float {
    let wp = prec + GUARD;
    if x.is_zero() {
        if y.is_zero() {
            return Float::from_i64(0).round_to(prec);
        }
        let hp = pi(prec).mul_pow2(-1);
        return if y.signum_i() > 0 { hp } else { -hp };
    }
    let base = atan(&(&y.round_to(wp) / &x.round_to(wp)), wp);
    let res = if x.signum_i() > 0 {
        base
    } else if y.signum_i() >= 0 {
        &base + &pi(wp)
    } else {
        &base - &pi(wp)
    };
    res.round_to(prec)
}
