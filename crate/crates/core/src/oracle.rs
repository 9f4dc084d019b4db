//! Reference values: certified `log Gamma`, direct evaluation of `W(z)`, and
//! the two classical expansions of `Gamma(z+t)/Gamma(z+x)`.
//!
//! `log Gamma` shifts `z` to `w = z + m` and sums the Binet series there. The
//! pair `(m, n)` is the smallest shift whose remainder bound
//!
//! ```text
//! |B_2n| sec^2n(theta/2) / (2n (2n-1) |w|^(2n-1)),   |B_2n| <= 2 zeta(2) (2n)! / (2 pi)^2n
//! ```
//!
//! drops below `2^-(P+4)` for some `n`.

use alloc::format;
use alloc::vec::Vec;

use num_complex::Complex;
use num_rational::BigRational;
use num_traits::Zero;

use crate::gammaexp::{gamma_pole_test, log_rho, GammaRatioSpec};
use crate::numerics::{cexp, cln, cpow, elementary, factorial, pochhammer, ComplexFloat, ComplexScalar, Float, IntegerTest};
use crate::special::{bernoulli_even_tangent, NorlundBernoulli};
use crate::Error;

const ZETA2: f64 = 1.644_934_066_848_226_4;

/// `log2` of the Binet remainder bound after `n - 1` terms at `|w| = r`, `arg w = theta`.
fn remainder_log2(n: usize, r: f64, theta: f64) -> f64 {
    let two_n = 2.0 * n as f64;
    let ln_b = libm::log(2.0 * ZETA2) + libm::lgamma(two_n + 1.0) - two_n * libm::log(2.0 * core::f64::consts::PI);
    let sec = 1.0 / libm::cos(theta / 2.0);
    let ln_bound = ln_b + two_n * libm::log(sec) - libm::log(two_n * (two_n - 1.0)) - (two_n - 1.0) * libm::log(r);
    ln_bound / core::f64::consts::LN_2
}

/// Smallest shift `m` and term count `n` certifying `2^-(P+4)`.
pub fn binet_plan(z_re: f64, z_im: f64, prec: u32) -> (usize, usize) {
    let target = -(prec as f64) - 4.0;
    let m0 = if z_im == 0.0 && z_re <= 0.0 { libm::floor(-z_re) as usize + 1 } else { 0 };
    let mut m = m0;
    loop {
        let wr = z_re + m as f64;
        let r = libm::hypot(wr, z_im);
        let theta = libm::atan2(z_im, wr);
        if r > 1.0 && theta.abs() < 3.0 {
            // the bound first falls, then grows; stop at its minimum
            let mut prev = f64::INFINITY;
            for n in 1..=(4 * prec as usize + 16) {
                let b = remainder_log2(n, r, theta);
                if b <= target {
                    return (m, n);
                }
                if b > prev {
                    break;
                }
                prev = b;
            }
        }
        m += 1;
    }
}

/// Log-gamma evaluator with a cache of Bernoulli numbers.
#[derive(Clone, Debug, Default)]
pub struct GammaOracle {
    /// `B_2, B_4, ...`
    bern: Vec<BigRational>,
}

impl GammaOracle {
    pub fn new() -> Self {
        GammaOracle { bern: Vec::new() }
    }

    fn ensure(&mut self, n: usize) {
        if self.bern.len() < n {
            self.bern = bernoulli_even_tangent(n.max(2 * self.bern.len()));
        }
    }

    /// Principal branch of `log Gamma(z)`, absolute error at most `2^-prec`.
    /// Fails on poles and on the cut `Im z = 0, Re z < 0`.
    pub fn log_gamma(&mut self, z: &ComplexFloat, prec: u32) -> Result<ComplexFloat, Error> {
        if z.im.is_zero() && z.re.signum_i() < 0 {
            check_pole(z)?;
            return Err(Error::BranchCut(fmt_c(z)));
        }
        self.log_gamma_any(z, prec)
    }

    /// Some branch of `log Gamma(z)` (the principal one off the negative axis);
    /// enough when only `exp` of it is needed.
    pub fn log_gamma_any(&mut self, z: &ComplexFloat, prec: u32) -> Result<ComplexFloat, Error> {
        check_pole(z)?;
        let (zr, zi) = (z.re.to_f64(), z.im.to_f64());
        let (m, n) = binet_plan(zr, zi, prec);
        self.ensure(n);
        let mag = libm::log2(libm::hypot(zr + m as f64, zi) + 2.0).max(1.0);
        let wp = prec + 24 + 2 * mag as u32 + (64 - (m as u64).leading_zeros());

        let z = z.to_complex_float_keep(wp);
        let w = Complex::new(&z.re + &Float::from_i64(m as i64), z.im.clone());
        let lw = cln(&w.round(wp), wp);
        let half = Float::exact(BigRational::new(1.into(), 2.into()));
        let wm = Complex::new(&w.re - &half, w.im.clone());
        let two_pi = elementary::pi(wp).mul_pow2(1);
        let half_ln_2pi = elementary::ln(&two_pi, wp).mul_pow2(-1);
        let mut acc = wm * lw - w.clone();
        acc.re = &acc.re + &half_ln_2pi;

        let winv = ComplexFloat::new(Float::from_i64(1), Float::zero()) / w.round(wp);
        let w2 = (winv.clone() * winv.clone()).round(wp);
        let mut pw = winv;
        for r in 1..n {
            let c = &self.bern[r - 1] / BigRational::from_integer(((2 * r) * (2 * r - 1)).into());
            let cf = Float::with_prec(&c, wp);
            acc = acc + Complex::new(&pw.re * &cf, &pw.im * &cf);
            pw = (pw * w2.clone()).round(wp);
        }

        if m > 0 {
            let mut prod = ComplexFloat::new(Float::from_i64(1), Float::zero());
            let mut arg_sum = 0.0;
            for i in 0..m {
                let f = Complex::new(&z.re + &Float::from_i64(i as i64), z.im.clone());
                arg_sum += libm::atan2(f.im.to_f64(), f.re.to_f64());
                prod = (prod * f).round(wp);
            }
            let mut lp = cln(&prod, wp);
            let two_pi_f = core::f64::consts::TAU;
            let k = libm::round((arg_sum - lp.im.to_f64()) / two_pi_f) as i64;
            if k != 0 {
                lp.im = &lp.im + &(&two_pi * &Float::from_i64(k));
            }
            acc = acc - lp;
        }
        Ok(round_abs(&acc, prec))
    }
}

trait ComplexRound {
    fn round(&self, prec: u32) -> Self;
    fn to_complex_float_keep(&self, prec: u32) -> Self;
}

impl ComplexRound for ComplexFloat {
    fn round(&self, prec: u32) -> Self {
        Complex::new(self.re.round_to(prec), self.im.round_to(prec))
    }

    /// Exact parts stay exact; approximate parts are rounded to `prec`.
    fn to_complex_float_keep(&self, prec: u32) -> Self {
        let keep = |x: &Float| if x.is_exact() { x.clone() } else { x.round_to(prec) };
        Complex::new(keep(&self.re), keep(&self.im))
    }
}

/// Round so that the absolute error stays below `2^-prec`.
fn round_abs(z: &ComplexFloat, prec: u32) -> ComplexFloat {
    let scale = z.re.log2_abs().max(z.im.log2_abs()).max(0.0);
    z.round(prec + scale as u32 + 2)
}

/// Exact values convert exactly, approximate ones are rounded to `prec`.
pub(crate) fn keep_exact<S: ComplexScalar>(x: &S, prec: u32) -> ComplexFloat {
    match x.as_gauss() {
        Some(g) => ComplexFloat::from_gauss(&g),
        None => x.to_complex_float(prec),
    }
}

fn fmt_c(z: &ComplexFloat) -> alloc::string::String {
    format!("{}", crate::numerics::ComplexValue::Float(z.clone()))
}

fn check_pole(z: &ComplexFloat) -> Result<(), Error> {
    if let IntegerTest::Integer(_) = gamma_pole_test(z, f64::NEG_INFINITY) {
        return Err(Error::Pole(format!("Gamma at {}", fmt_c(z))));
    }
    Ok(())
}

/// Principal `log Gamma(z)` to absolute accuracy `2^-prec`.
pub fn log_gamma(z: &ComplexFloat, prec: u32) -> Result<ComplexFloat, Error> {
    GammaOracle::new().log_gamma(z, prec)
}

/// `W(z) = exp(sum log Gamma(A_k z + a_k) - sum log Gamma(B_j z + b_j) - z log rho)`
/// to relative accuracy about `2^-prec`. No balance requirement.
pub fn w_direct<S: ComplexScalar>(spec: &GammaRatioSpec<S>, z: &ComplexFloat, prec: u32) -> Result<ComplexFloat, Error> {
    let mut oracle = GammaOracle::new();
    w_direct_with(&mut oracle, spec, z, prec)
}

/// [`w_direct`] sharing a Bernoulli cache.
pub fn w_direct_with<S: ComplexScalar>(
    oracle: &mut GammaOracle,
    spec: &GammaRatioSpec<S>,
    z: &ComplexFloat,
    prec: u32,
) -> Result<ComplexFloat, Error> {
    let zmag = z.re.log2_abs().max(z.im.log2_abs()).max(0.0) as u32;
    let wp = prec + 24 + zmag;
    let z = z.to_complex_float_keep(wp);
    let arg = |scale: &S::Real, shift: &S| -> ComplexFloat {
        let s = keep_exact(&S::from_real(scale), wp).re;
        let shift = keep_exact(shift, wp);
        Complex::new(&(&s * &z.re) + &shift.re, &(&s * &z.im) + &shift.im)
    };
    let mut acc = ComplexFloat::new(Float::zero(), Float::zero());
    for (scale, shift) in spec.big_a().iter().zip(spec.a()) {
        acc = acc + oracle.log_gamma_any(&arg(scale, shift), wp)?;
    }
    for (scale, shift) in spec.big_b().iter().zip(spec.b()) {
        acc = acc - oracle.log_gamma_any(&arg(scale, shift), wp)?;
    }
    let lr = log_rho(spec, wp);
    if !lr.is_zero() {
        acc = acc - Complex::new(&z.re * &lr, &z.im * &lr);
    }
    Ok(cexp(&acc.round(wp), prec))
}

fn excluded_negative_integer<S: ComplexScalar>(v: &S, name: &str) -> Result<(), Error> {
    if let IntegerTest::Integer(k) = v.integer_test(f64::NEG_INFINITY) {
        if k < 0.into() {
            return Err(Error::ExcludedParameter(format!("-{} = {} is a positive integer", name, -k)));
        }
    }
    Ok(())
}

/// `z^g` for an exact small integer `g`, otherwise the principal power.
fn power<S: ComplexScalar>(z: &ComplexFloat, g: &S, prec: u32) -> ComplexFloat {
    if let IntegerTest::Integer(k) = g.integer_test(f64::NEG_INFINITY) {
        if let Ok(k) = i32::try_from(k) {
            if k.unsigned_abs() <= 64 {
                let one = ComplexFloat::new(Float::from_i64(1), Float::zero());
                let mut acc = one.clone();
                for _ in 0..k.unsigned_abs() {
                    acc = acc * z.clone();
                }
                return if k < 0 { one / acc } else { acc };
            }
        }
    }
    cpow(&z.round(prec + 16), &g.to_complex_float(prec + 16), prec)
}

/// Tricomi-Erdelyi asymptotic expansion of `Gamma(z+t)/Gamma(z+x)`:
/// `z^(t-x+1) sum_{n<=N} (-1)^n B_n^(t-x+1)(t) (x-t)_n / (n! z^(n+1))`.
///
/// Needs `Re z > 0`; `t` and `x` must not be negative integers.
pub fn tricomi_erdelyi_eval<S: ComplexScalar>(t: &S, x: &S, z: &ComplexFloat, n_max: usize, prec: u32) -> Result<ComplexFloat, Error> {
    excluded_negative_integer(t, "t")?;
    excluded_negative_integer(x, "x")?;
    if z.re.signum_i() <= 0 {
        return Err(Error::Sector(format!("Re z > 0 required, got z = {}", fmt_c(z))));
    }
    let wp = prec + 32;
    let gamma = t.clone() - x.clone() + S::one();
    let nb = NorlundBernoulli::new(n_max).values(n_max, &gamma, t);
    let x_minus_t = x.clone() - t.clone();
    let one = ComplexFloat::new(Float::from_i64(1), Float::zero());
    let zinv = one / z.to_complex_float_keep(wp);
    let mut zpow = zinv.clone();
    let mut poch = S::one();
    let mut sum = ComplexFloat::new(Float::zero(), Float::zero());
    for (n, b) in nb.iter().enumerate() {
        if n > 0 {
            poch = poch * (x_minus_t.clone() + S::from_i64(n as i64 - 1));
        }
        let mut c = (b.clone() * poch.clone()).mul_rational(&BigRational::new(1.into(), factorial(n)));
        if n % 2 == 1 {
            c = -c;
        }
        if !c.is_exact_zero() {
            sum = sum + c.to_complex_float(wp) * zpow.clone();
        }
        zpow = (zpow * zinv.clone()).to_complex_float_keep(wp);
    }
    let r = power(z, &gamma, wp) * sum;
    Ok(r.round(prec))
}

/// Norlund's convergent expansion of the normalized ratio
/// `Gamma(z+t) / (Gamma(z+x) z^(t-x+1))`, summed through `m = N`:
/// `sum (-1)^m B_m^(t-x+m+1)(1-x) (t-x+1)_m / (m! (z+t)_(m+1))`.
pub fn norlund43_eval<S: ComplexScalar>(t: &S, x: &S, z: &ComplexFloat, n_max: usize, prec: u32) -> Result<ComplexFloat, Error> {
    let wp = prec + 32;
    let nb = NorlundBernoulli::new(n_max);
    let one_minus_x = S::one() - x.clone();
    let base = t.clone() - x.clone() + S::one();
    let z = z.to_complex_float_keep(wp);
    let zt = z.clone() + keep_exact(t, wp);
    let mut den = ComplexFloat::new(Float::from_i64(1), Float::zero());
    let mut sum = ComplexFloat::new(Float::zero(), Float::zero());
    for m in 0..=n_max {
        let f = Complex::new(&zt.re + &Float::from_i64(m as i64), zt.im.clone());
        if f.re.is_zero() && f.im.is_zero() {
            return Err(Error::Pole(format!("z + t + {} = 0", m)));
        }
        den = (den * f).to_complex_float_keep(wp);
        let poch = pochhammer(&base, m);
        if poch.is_exact_zero() {
            continue;
        }
        let gamma = base.clone() + S::from_i64(m as i64);
        let b = nb.value(m, &gamma, &one_minus_x);
        let mut c = (b * poch).mul_rational(&BigRational::new(1.into(), factorial(m)));
        if m % 2 == 1 {
            c = -c;
        }
        sum = sum + c.to_complex_float(wp) / den.clone();
    }
    Ok(sum.round(prec))
}
