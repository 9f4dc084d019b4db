//! Poincare expansion of a balanced gamma ratio
//!
//! ```text
//! z^mu / (nu rho^z) * prod Gamma(A_k z + a_k) / prod Gamma(B_j z + b_j) ~ sum_r C_r z^(-r)
//! ```
//!
//! with `log C(z) = sum_m Q_m / (m z^m)`.

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::numerics::{binomial, cexp, elementary, ComplexFloat, ComplexScalar, Float, GaussRational, IntegerTest};
use crate::series::{ExpRoute, TruncatedSeries};
use crate::special::bernoulli_numbers;
use crate::Error;

/// Parameters of `W(z) = rho^(-z) prod_k Gamma(A_k z + a_k) / prod_j Gamma(B_j z + b_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GammaRatioSpec<S: ComplexScalar> {
    big_a: Vec<S::Real>,
    a: Vec<S>,
    big_b: Vec<S::Real>,
    b: Vec<S>,
}

impl<S: ComplexScalar> GammaRatioSpec<S> {
    /// Checks shapes and positivity; balance is checked by the expansion
    /// operations (see [`require_balanced`](Self::require_balanced)).
    pub fn new(big_a: Vec<S::Real>, a: Vec<S>, big_b: Vec<S::Real>, b: Vec<S>) -> Result<Self, Error> {
        if big_a.is_empty() {
            return Err(Error::InvalidSpec("need at least one numerator gamma (p >= 1)".into()));
        }
        if big_a.len() != a.len() {
            return Err(Error::InvalidSpec(format!("len(A) = {} but len(a) = {}", big_a.len(), a.len())));
        }
        if big_b.len() != b.len() {
            return Err(Error::InvalidSpec(format!("len(B) = {} but len(b) = {}", big_b.len(), b.len())));
        }
        let zero = S::Real::zero();
        if let Some(x) = big_a.iter().chain(&big_b).find(|x| **x <= zero) {
            return Err(Error::InvalidSpec(format!("scale {:?} is not positive", x)));
        }
        Ok(GammaRatioSpec { big_a, a, big_b, b })
    }

    pub fn p(&self) -> usize {
        self.big_a.len()
    }

    pub fn q(&self) -> usize {
        self.big_b.len()
    }

    pub fn big_a(&self) -> &[S::Real] {
        &self.big_a
    }

    pub fn a(&self) -> &[S] {
        &self.a
    }

    pub fn big_b(&self) -> &[S::Real] {
        &self.big_b
    }

    pub fn b(&self) -> &[S] {
        &self.b
    }

    /// Largest working precision among the parameters; `None` if all are exact.
    pub fn precision(&self) -> Option<u32> {
        self.big_a
            .iter()
            .chain(&self.big_b)
            .map(|x| S::from_real(x).precision())
            .chain(self.a.iter().chain(&self.b).map(|x| x.precision()))
            .flatten()
            .max()
    }

    /// `log2` of the relative tolerance for float-mode equality tests: `-(P - 8)`.
    pub fn tol_log2(&self) -> f64 {
        match self.precision() {
            Some(p) => -(p as f64 - 8.0),
            None => f64::NEG_INFINITY,
        }
    }

    fn sums(&self) -> (S, S) {
        let sa = self.big_a.iter().fold(S::zero(), |acc, x| acc + S::from_real(x));
        let sb = self.big_b.iter().fold(S::zero(), |acc, x| acc + S::from_real(x));
        (sa, sb)
    }

    pub fn is_balanced(&self) -> bool {
        let (sa, sb) = self.sums();
        sa.approx_eq(&sb, self.tol_log2())
    }

    pub fn require_balanced(&self) -> Result<(), Error> {
        if self.is_balanced() {
            return Ok(());
        }
        let (sa, sb) = self.sums();
        Err(Error::Unbalanced {
            sum_a: format!("{}", sa.into_value()),
            sum_b: format!("{}", sb.into_value()),
        })
    }

    /// `mu = sum b_j - sum a_k + (p - q)/2`.
    pub fn mu(&self) -> S {
        let sa = self.a.iter().fold(S::zero(), |acc, x| acc + x.clone());
        let sb = self.b.iter().fold(S::zero(), |acc, x| acc + x.clone());
        let half = BigRational::new(BigInt::from(self.p() as i64 - self.q() as i64), BigInt::from(2));
        sb - sa + S::from_rational(&half)
    }

    /// Numerator and denominator exchanged: `W -> 1/W`.
    pub fn swapped(&self) -> Result<Self, Error> {
        GammaRatioSpec::new(self.big_b.clone(), self.b.clone(), self.big_a.clone(), self.a.clone())
    }

    /// Append `Gamma(z + extra_a)` on top and `Gamma(z + extra_b)` below.
    pub fn augmented(&self, extra_a: S, extra_b: S) -> Self {
        let mut s = self.clone();
        s.big_a.push(S::Real::one());
        s.a.push(extra_a);
        s.big_b.push(S::Real::one());
        s.b.push(extra_b);
        s
    }

    /// Every scale factor is an exact integer.
    fn integer_scales(&self) -> Option<(Vec<BigInt>, Vec<BigInt>)> {
        let to_int = |x: &S::Real| match S::from_real(x).as_gauss() {
            Some(g) if g.re.is_integer() => Some(g.re.to_integer()),
            _ => None,
        };
        let a = self.big_a.iter().map(to_int).collect::<Option<Vec<_>>>()?;
        let b = self.big_b.iter().map(to_int).collect::<Option<Vec<_>>>()?;
        Some((a, b))
    }
}

/// `nu`, kept both as an approximation and, when it is rational, exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct ScaleFactor {
    pub exact: Option<GaussRational>,
    pub value: ComplexFloat,
}

impl ScaleFactor {
    pub fn one() -> Self {
        ScaleFactor {
            exact: Some(GaussRational::one()),
            value: Complex::new(Float::from_i64(1), Float::zero()),
        }
    }
}

/// Normalization constants of the expansion.
#[derive(Clone, Debug, PartialEq)]
pub struct Invariants<S> {
    pub nu: ScaleFactor,
    /// `log rho = sum A_k ln A_k - sum B_j ln B_j`.
    pub log_rho: Float,
    /// `rho` itself when every `A_k`, `B_j` is an integer.
    pub rho_exact: Option<BigRational>,
    pub mu: S,
}

fn real_ln<S: ComplexScalar>(x: &S::Real, prec: u32) -> Float {
    let f = S::real_to_float(x, prec + 16);
    elementary::ln(&f, prec + 8)
}

/// `log rho = sum A_k ln A_k - sum B_j ln B_j` to `prec` bits; exact zero
/// when every scale is 1. No balance check.
pub fn log_rho<S: ComplexScalar>(spec: &GammaRatioSpec<S>, prec: u32) -> Float {
    let wp = prec + 32;
    let mut acc = Float::zero();
    for x in &spec.big_a {
        acc = &acc + &(&S::real_to_float(x, wp) * &real_ln::<S>(x, wp));
    }
    for x in &spec.big_b {
        acc = &acc - &(&S::real_to_float(x, wp) * &real_ln::<S>(x, wp));
    }
    if acc.is_zero() {
        acc
    } else {
        acc.round_to(prec)
    }
}

/// `A^e` for a rational base and an integer exponent, if that is what we have.
fn exact_power<S: ComplexScalar>(base: &S::Real, expo: &S) -> Option<GaussRational> {
    let base = S::from_real(base).as_gauss()?.re;
    if base.is_one() {
        return Some(GaussRational::one());
    }
    let e = expo.as_gauss()?;
    if !e.im.is_zero() || !e.re.is_integer() {
        return None;
    }
    let n = e.re.to_integer().to_i32()?;
    Some(Complex::new(num_traits::pow::Pow::pow(&base, n), BigRational::zero()))
}

/// `nu`, `log rho`, `mu`. Transcendental parts are computed to `prec` bits.
pub fn invariants<S: ComplexScalar>(spec: &GammaRatioSpec<S>, prec: u32) -> Result<Invariants<S>, Error> {
    spec.require_balanced()?;
    let wp = prec + 32;
    let half = S::from_rational(&BigRational::new(BigInt::one(), BigInt::from(2)));

    // log nu = (p-q)/2 ln(2 pi) + sum (a_k - 1/2) ln A_k + sum (1/2 - b_j) ln B_j
    let mut exact = if spec.p() == spec.q() { Some(GaussRational::one()) } else { None };
    let two_pi = elementary::pi(wp).mul_pow2(1);
    let d = spec.p() as i64 - spec.q() as i64;
    let mut log_nu: ComplexFloat = Complex::new((&elementary::ln(&two_pi, wp) * &Float::from_i64(d)).mul_pow2(-1), Float::zero());
    let factors = spec
        .big_a
        .iter()
        .zip(&spec.a)
        .map(|(x, e)| (x, e.clone() - half.clone()))
        .chain(spec.big_b.iter().zip(&spec.b).map(|(x, e)| (x, half.clone() - e.clone())));
    for (base, expo) in factors {
        exact = match (exact, exact_power::<S>(base, &expo)) {
            (Some(acc), Some(f)) => Some(acc * f),
            _ => None,
        };
        let l = real_ln::<S>(base, wp);
        let e = expo.to_complex_float(wp);
        log_nu = log_nu + Complex::new(&e.re * &l, &e.im * &l);
    }
    let value = match &exact {
        Some(g) => g.to_complex_float(prec),
        None => cexp(&log_nu, prec),
    };

    let log_rho = log_rho(spec, prec);

    let rho_exact = spec.integer_scales().map(|(ia, ib)| {
        let pw = |n: &BigInt| {
            let k = n.to_u32().expect("scale fits in u32");
            num_traits::pow::Pow::pow(n, k)
        };
        let num: BigInt = ia.iter().map(pw).product();
        let den: BigInt = ib.iter().map(pw).product();
        BigRational::new(num, den)
    });

    Ok(Invariants {
        nu: ScaleFactor { exact, value },
        log_rho,
        rho_exact,
        mu: spec.mu(),
    })
}

/// `B_n(x)` from precomputed Bernoulli numbers, by Horner's rule.
fn bernoulli_poly_at<S: ComplexScalar>(bern: &[BigRational], n: usize, x: &S) -> S {
    let mut acc = S::zero();
    for (i, bi) in bern.iter().enumerate().take(n + 1) {
        if bi.is_zero() {
            acc = acc * x.clone();
            continue;
        }
        let c = bi * BigRational::from_integer(binomial(n, i));
        acc = acc * x.clone() + S::from_rational(&c);
    }
    acc
}

/// `Q_1..=Q_m_max`; entry `i` holds `Q_{i+1}`.
pub fn q_coefficients<S: ComplexScalar>(spec: &GammaRatioSpec<S>, m_max: usize) -> Result<Vec<S>, Error> {
    spec.require_balanced()?;
    let bern = bernoulli_numbers(m_max + 1);
    let scales = |xs: &[S::Real]| xs.iter().map(S::from_real).collect::<Vec<S>>();
    let (sa, sb) = (scales(&spec.big_a), scales(&spec.big_b));
    let mut pa: Vec<S> = sa.iter().map(|_| S::one()).collect();
    let mut pb: Vec<S> = sb.iter().map(|_| S::one()).collect();
    let mut out = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let mut acc = S::zero();
        for (k, x) in spec.a.iter().enumerate() {
            pa[k] = pa[k].clone() * sa[k].clone();
            acc = acc + bernoulli_poly_at(&bern, m + 1, x) / pa[k].clone();
        }
        for (j, x) in spec.b.iter().enumerate() {
            pb[j] = pb[j].clone() * sb[j].clone();
            acc = acc - bernoulli_poly_at(&bern, m + 1, x) / pb[j].clone();
        }
        let mut c = BigRational::new(BigInt::one(), BigInt::from(m + 1));
        if m % 2 == 0 {
            c = -c;
        }
        out.push(acc.mul_rational(&c));
    }
    Ok(out)
}

/// `C_0..=C_r_max` through the chosen exponentiation route.
pub fn c_coefficients<S: ComplexScalar>(spec: &GammaRatioSpec<S>, r_max: usize, route: ExpRoute) -> Result<Vec<S>, Error> {
    let q = q_coefficients(spec, r_max)?;
    c_from_q(&q, route)
}

/// `C` from `Q` (entry `i` of `q` is `Q_{i+1}`), as `exp(sum Q_m t^m / m)`.
pub fn c_from_q<S: ComplexScalar>(q: &[S], route: ExpRoute) -> Result<Vec<S>, Error> {
    let mut u = Vec::with_capacity(q.len() + 1);
    u.push(S::zero());
    for (i, qm) in q.iter().enumerate() {
        u.push(qm.div_int(i as i64 + 1));
    }
    Ok(TruncatedSeries::new(u).exp_by(route)?.into_coeffs())
}

/// Invariants together with `C_0..=C_R`.
#[derive(Clone, Debug, PartialEq)]
pub struct PoincareExpansion<S> {
    pub invariants: Invariants<S>,
    pub c: Vec<S>,
}

pub fn poincare_expansion<S: ComplexScalar>(spec: &GammaRatioSpec<S>, r_max: usize, prec: u32) -> Result<PoincareExpansion<S>, Error> {
    Ok(PoincareExpansion {
        invariants: invariants(spec, prec)?,
        c: c_coefficients(spec, r_max, ExpRoute::Recurrence)?,
    })
}

/// Coefficients of `z^-(j-1)` for `j = 2..=j_max` in Hermite's expansion of
/// `log Gamma(z + a) - (z + a - 1/2) log z + z - log(2 pi)/2`; entry `i`
/// belongs to `j = i + 2`.
pub fn hermite_coeffs<S: ComplexScalar>(a: &S, j_max: usize) -> Vec<S> {
    if j_max < 2 {
        return Vec::new();
    }
    let bern = bernoulli_numbers(j_max);
    (2..=j_max)
        .map(|j| {
            let mut c = BigRational::new(BigInt::one(), BigInt::from(j * (j - 1)));
            if j % 2 == 1 {
                c = -c;
            }
            bernoulli_poly_at(&bern, j, a).mul_rational(&c)
        })
        .collect()
}

/// Does the value sit on a nonpositive integer (a pole of Gamma)?
pub(crate) fn gamma_pole_test<S: ComplexScalar>(x: &S, eps_log2: f64) -> IntegerTest {
    match x.integer_test(eps_log2) {
        IntegerTest::Integer(n) if n > BigInt::zero() => IntegerTest::NotInteger,
        t => t,
    }
}
