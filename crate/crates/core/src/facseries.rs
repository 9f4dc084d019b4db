//! Inverse factorial series
//!
//! ```text
//! PlainShift(s):        W(z) = nu * sum_n d_n / (z + s)_(n+1)
//! GammaPrefactor(t, m): W(z) = nu * sum_n h_n * Gamma(z + t + 1) / Gamma(z + t + m + n + 1)
//! ```
//!
//! The stored coefficients exclude `nu`, which is kept as a [`ScaleFactor`].

use alloc::format;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::gammaexp::{c_coefficients, invariants, GammaRatioSpec, ScaleFactor};
use crate::numerics::{cexp, factorial, gen_binomial, pochhammer, ComplexFloat, ComplexScalar, ComplexValue, Float, IntegerTest};
use crate::oracle::{keep_exact, GammaOracle};
use crate::series::ExpRoute;
use crate::special::{NoncentralStirlingTable, NorlundBernoulli, StirlingTable};
use crate::Error;

#[derive(Clone, Debug, PartialEq)]
pub enum SeriesForm<S> {
    PlainShift { sigma: S },
    GammaPrefactor { theta: S, mu: S },
}

impl<S: ComplexScalar> SeriesForm<S> {
    pub fn name(&self) -> &'static str {
        match self {
            SeriesForm::PlainShift { .. } => "plain_shift",
            SeriesForm::GammaPrefactor { .. } => "gamma_prefactor",
        }
    }

    /// Shift of the Pochhammer denominators: `s`, or `t + m` for the prefactor form.
    pub fn sigma(&self) -> S {
        match self {
            SeriesForm::PlainShift { sigma } => sigma.clone(),
            SeriesForm::GammaPrefactor { theta, mu } => theta.clone() + mu.clone(),
        }
    }

    /// `(x, m)` with term `n` equal to `coeff_n * Gamma(z + x) / Gamma(z + x + m + n)`.
    fn gamma_shape(&self) -> (S, S) {
        match self {
            SeriesForm::PlainShift { sigma } => (sigma.clone(), S::one()),
            SeriesForm::GammaPrefactor { theta, mu } => (theta.clone() + S::one(), mu.clone()),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct FactorialSeries<S: ComplexScalar> {
    pub form: SeriesForm<S>,
    pub nu: ScaleFactor,
    pub coeffs: Vec<S>,
    pub spec: GammaRatioSpec<S>,
}

impl<S: ComplexScalar> FactorialSeries<S> {
    /// Highest stored index `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn abscissa(&self) -> Result<AbscissaReport<S>, Error> {
        abscissa(&self.spec, &self.form, default_eps_log2(&self.spec))
    }
}

fn is_one<S: ComplexScalar>(x: &S, spec: &GammaRatioSpec<S>) -> bool {
    x.approx_eq(&S::one(), spec.tol_log2())
}

/// `sum_r C_r s_sigma(n, r)` for `n = 0..=N`.
fn stirling_combine<S: ComplexScalar>(c: &[S], sigma: &S, n_max: usize) -> Vec<S> {
    let table = NoncentralStirlingTable::new(n_max, sigma);
    (0..=n_max)
        .map(|n| (0..=n).fold(S::zero(), |acc, r| acc + c[r].clone() * table.get(n, r)))
        .collect()
}

/// Coefficients `d_n = sum_r C_r s_sigma(n, r)` of the plain-shift series; needs `mu = 1`.
pub fn theorem_coeffs<S: ComplexScalar>(spec: &GammaRatioSpec<S>, sigma: &S, n_max: usize, prec: u32) -> Result<FactorialSeries<S>, Error> {
    spec.require_balanced()?;
    let mu = spec.mu();
    if !is_one(&mu, spec) {
        return Err(Error::MuNotOne(format!("{}", mu.into_value())));
    }
    let inv = invariants(spec, prec)?;
    let c = c_coefficients(spec, n_max, ExpRoute::Recurrence)?;
    Ok(FactorialSeries {
        form: SeriesForm::PlainShift { sigma: sigma.clone() },
        nu: inv.nu,
        coeffs: stirling_combine(&c, sigma, n_max),
        spec: spec.clone(),
    })
}

fn prefactor_form<S: ComplexScalar>(spec: &GammaRatioSpec<S>, theta: &S, mu: S) -> SeriesForm<S> {
    if is_one(&mu, spec) {
        SeriesForm::PlainShift { sigma: theta.clone() + S::one() }
    } else {
        SeriesForm::GammaPrefactor { theta: theta.clone(), mu }
    }
}

/// `h_n` through the augmented spec `(A, 1; a, t + mu) / (B, 1; b, t + 1)`,
/// which has `mu = 1`, and the non-central Stirling numbers `s_(t+mu)`.
pub fn corollary_coeffs_stirling<S: ComplexScalar>(spec: &GammaRatioSpec<S>, theta: &S, n_max: usize, prec: u32) -> Result<FactorialSeries<S>, Error> {
    spec.require_balanced()?;
    let inv = invariants(spec, prec)?;
    let mu = inv.mu.clone();
    let sigma = theta.clone() + mu.clone();
    let aug = spec.augmented(sigma.clone(), theta.clone() + S::one());
    let c = c_coefficients(&aug, n_max, ExpRoute::Recurrence)?;
    Ok(FactorialSeries {
        form: prefactor_form(spec, theta, mu),
        nu: inv.nu,
        coeffs: stirling_combine(&c, &sigma, n_max),
        spec: spec.clone(),
    })
}

/// `h_n = sum_(r+k=n) (-1)^k C_r B_k^(n+mu)(-t) (r+mu)_(n-r) / k!`.
pub fn corollary_coeffs_nb<S: ComplexScalar>(spec: &GammaRatioSpec<S>, theta: &S, n_max: usize, prec: u32) -> Result<FactorialSeries<S>, Error> {
    spec.require_balanced()?;
    let inv = invariants(spec, prec)?;
    let mu = inv.mu.clone();
    if let IntegerTest::Integer(k) = mu.integer_test(spec.tol_log2()) {
        if k <= BigInt::zero() {
            return Err(Error::MuNonPositiveInteger(format!("{}", k)));
        }
    }
    let c = c_coefficients(spec, n_max, ExpRoute::Recurrence)?;
    let nb = NorlundBernoulli::new(n_max);
    let minus_theta = -theta.clone();
    let mut coeffs = Vec::with_capacity(n_max + 1);
    for n in 0..=n_max {
        let order = mu.clone() + S::from_i64(n as i64);
        let b = nb.values(n, &order, &minus_theta);
        let mut h = S::zero();
        for r in 0..=n {
            let k = n - r;
            let mut t = (c[r].clone() * b[k].clone() * pochhammer(&(mu.clone() + S::from_i64(r as i64)), k))
                .mul_rational(&BigRational::new(BigInt::one(), factorial(k)));
            if k % 2 == 1 {
                t = -t;
            }
            h = h + t;
        }
        coeffs.push(h);
    }
    Ok(FactorialSeries {
        form: prefactor_form(spec, theta, mu),
        nu: inv.nu,
        coeffs,
        spec: spec.clone(),
    })
}

/// Coefficients `b_n` of `sum_n b_n / (z)_(n+1)` from the Poincare
/// coefficients: `b_n = (-1)^n sum_r (-1)^r s(n, r) C_r`.
pub fn power_to_factorial<S: ComplexScalar>(c: &[S], n_max: usize) -> Vec<S> {
    let s = StirlingTable::new(n_max);
    (0..=n_max)
        .map(|n| {
            let mut acc = S::zero();
            for (r, cr) in c.iter().enumerate().take(n + 1) {
                let mut k = s.get(n, r);
                if (n + r) % 2 == 1 {
                    k = -k;
                }
                acc = acc + cr.mul_bigint(&k);
            }
            acc
        })
        .collect()
}

/// Moves `sum_k u_(k+1) k! / (z)_(k+1)` to `sum_k v_(k+1) k! / (z + s)_(k+1)`:
/// `v_(k+1) = sum_j (s)_j / j! u_(k+1-j)`. Entry `i` holds index `i + 1`.
pub fn shift_coeffs<S: ComplexScalar>(u: &[S], sigma: &S) -> Vec<S> {
    let w: Vec<S> = (0..u.len())
        .map(|j| pochhammer(sigma, j).mul_rational(&BigRational::new(BigInt::one(), factorial(j))))
        .collect();
    convolve(u, &w)
}

/// Inverse of [`shift_coeffs`]: `u_(k+1) = sum_j (-1)^j binom(s, j) v_(k+1-j)`.
pub fn unshift_coeffs<S: ComplexScalar>(v: &[S], sigma: &S) -> Vec<S> {
    let w: Vec<S> = (0..v.len())
        .map(|j| {
            let b = gen_binomial(sigma, j);
            if j % 2 == 1 {
                -b
            } else {
                b
            }
        })
        .collect();
    convolve(v, &w)
}

fn convolve<S: ComplexScalar>(u: &[S], w: &[S]) -> Vec<S> {
    (0..u.len())
        .map(|k| (0..=k).fold(S::zero(), |acc, j| acc + w[j].clone() * u[k - j].clone()))
        .collect()
}

/// Partial sum and truncation diagnostics.
#[derive(Clone, Debug)]
pub struct Evaluation {
    pub value: ComplexValue,
    /// `log2 |t_n|` for every term (`-inf` for vanishing terms).
    pub term_log2: Vec<f64>,
    /// `log2 (|t_N| / |S_N|)`.
    pub last_ratio_log2: f64,
}

fn log2_abs(z: &ComplexFloat) -> f64 {
    z.re.log2_abs().max(z.im.log2_abs())
}

fn cf(n: i64) -> ComplexFloat {
    Complex::new(Float::from_i64(n), Float::zero())
}

fn is_zero_at(y: &ComplexFloat, eps_log2: f64) -> bool {
    (y.re.is_zero() && y.im.is_zero()) || matches!(y.integer_test(eps_log2), IntegerTest::Integer(n) if n.is_zero())
}

fn to_value(z: ComplexFloat, prec: u32) -> ComplexValue {
    if z.re.is_exact() && z.im.is_exact() {
        ComplexValue::Exact(Complex::new(z.re.to_rational(), z.im.to_rational()))
    } else {
        ComplexValue::Float(Complex::new(z.re.round_to(prec), z.im.round_to(prec)))
    }
}

/// Plain partial sum `S_N` at `z`. Exact inputs give an exact result unless a
/// non-integer gamma prefactor forces log-gamma.
pub fn evaluate<S: ComplexScalar>(fs: &FactorialSeries<S>, z: &ComplexValue, n_max: usize, prec: u32) -> Result<Evaluation, Error> {
    if n_max > fs.order() {
        return Err(Error::Range { requested: n_max, available: fs.order() });
    }
    let wp = prec + 32;
    let eps = -(wp as f64) + 8.0;
    let z = match z {
        ComplexValue::Exact(g) => ComplexFloat::from_gauss(g),
        ComplexValue::Float(f) => f.clone(),
    };
    let (shift, m) = fs.form.gamma_shape();
    let x = z.clone() + keep_exact(&shift, wp);
    let mf = keep_exact(&m, wp);
    let nu = match &fs.nu.exact {
        Some(g) => ComplexFloat::from_gauss(g),
        None => fs.nu.value.clone(),
    };

    let m_int = match m.integer_test(f64::NEG_INFINITY) {
        IntegerTest::Integer(k) => i64::try_from(k).ok(),
        _ => None,
    };
    let mut oracle = GammaOracle::new();
    let lg_x = match m_int {
        Some(_) => None,
        None => {
            if let IntegerTest::Integer(k) = x.integer_test(eps) {
                if k <= BigInt::zero() {
                    return Err(Error::Pole(format!("Gamma(z + theta + 1) at z + theta + 1 = {}", k)));
                }
            }
            Some(oracle.log_gamma_any(&x.to_complex_float_keep(wp), wp)?)
        }
    };

    // ratio_n = Gamma(x) / Gamma(x + m + n)
    let mut ratio = cf(0);
    let mut fresh = true;
    let mut sum = cf(0);
    let mut term_log2 = Vec::with_capacity(n_max + 1);
    let mut last = cf(0);
    for n in 0..=n_max {
        let y = x.clone() + mf.clone() + cf(n as i64);
        match m_int {
            Some(k) => {
                let kn = k + n as i64;
                if fresh {
                    ratio = integer_ratio(&x, kn, eps)?;
                    fresh = false;
                } else {
                    let prev = y.clone() - cf(1);
                    if is_zero_at(&prev, eps) {
                        if kn >= 1 {
                            return Err(Error::Pole(format!("z = {} is on the excluded lattice", to_value(z.clone(), prec))));
                        }
                        ratio = integer_ratio(&x, kn, eps)?;
                    } else {
                        ratio = ratio / prev;
                    }
                }
            }
            None => {
                let pole = matches!(y.integer_test(eps), IntegerTest::Integer(k) if k <= BigInt::zero());
                if pole {
                    ratio = cf(0);
                    fresh = true;
                } else if fresh {
                    let lg_y = oracle.log_gamma_any(&y.to_complex_float_keep(wp), wp)?;
                    let d = lg_x.clone().unwrap() - lg_y;
                    ratio = cexp(&Complex::new(d.re.round_to(wp), d.im.round_to(wp)), wp);
                    fresh = false;
                } else {
                    ratio = ratio / (y.clone() - cf(1));
                }
            }
        }
        ratio = ratio.to_complex_float_keep(wp);
        let c = keep_exact(&fs.coeffs[n], wp);
        let t = (nu.clone() * c * ratio.clone()).to_complex_float_keep(wp);
        term_log2.push(log2_abs(&t));
        sum = (sum + t.clone()).to_complex_float_keep(wp);
        last = t;
    }
    let last_ratio_log2 = log2_abs(&last) - log2_abs(&sum);
    Ok(Evaluation {
        value: to_value(sum, prec),
        term_log2,
        last_ratio_log2,
    })
}

trait KeepExact {
    fn to_complex_float_keep(&self, prec: u32) -> Self;
}

impl KeepExact for ComplexFloat {
    fn to_complex_float_keep(&self, prec: u32) -> Self {
        let keep = |x: &Float| if x.is_exact() { x.clone() } else { x.round_to(prec) };
        Complex::new(keep(&self.re), keep(&self.im))
    }
}

/// `Gamma(x) / Gamma(x + k)` for integer `k` as a rational function of `x`.
fn integer_ratio(x: &ComplexFloat, k: i64, eps: f64) -> Result<ComplexFloat, Error> {
    if k >= 0 {
        let mut den = cf(1);
        for i in 0..k {
            let f = x.clone() + cf(i);
            if is_zero_at(&f, eps) {
                return Err(Error::Pole(format!("(z + shift)_{} vanishes", k)));
            }
            den = den * f;
        }
        Ok(cf(1) / den)
    } else {
        let mut num = cf(1);
        for i in k..0 {
            num = num * (x.clone() + cf(i));
        }
        Ok(num)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Classification {
    ExactAbscissa,
    UpperBoundOnly,
    CoincidentPoleIgnored,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::ExactAbscissa => "ExactAbscissa",
            Classification::UpperBoundOnly => "UpperBoundOnly",
            Classification::CoincidentPoleIgnored => "CoincidentPoleIgnored",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AbscissaReport<S: ComplexScalar> {
    /// Real part of the rightmost surviving pole; `None` when there is none
    /// (the abscissa is `-inf`).
    pub alpha: Option<S::Real>,
    pub classification: Classification,
    pub rightmost_pole: Option<S>,
    pub multiplicity: usize,
    /// Numerator candidates to the right of the rightmost pole that were canceled.
    pub canceled_candidates: Vec<S>,
    /// Abscissa after dropping a simple pole that coincides with `-sigma`.
    pub effective_alpha: Option<S::Real>,
    pub sigma: S,
}

impl<S: ComplexScalar> AbscissaReport<S> {
    pub fn alpha_f64(&self) -> f64 {
        self.alpha.as_ref().map_or(f64::NEG_INFINITY, S::real_to_f64)
    }

    pub fn effective_alpha_f64(&self) -> f64 {
        self.effective_alpha.as_ref().map_or(f64::NEG_INFINITY, S::real_to_f64)
    }
}

/// Coincidence tolerance `2^(-P/2)` of float specs.
pub fn default_eps_log2<S: ComplexScalar>(spec: &GammaRatioSpec<S>) -> f64 {
    match spec.precision() {
        Some(p) => -(p as f64) / 2.0,
        None => f64::NEG_INFINITY,
    }
}

/// Rounds of doubling the search window before declaring `W` entire.
const MAX_WIDENINGS: usize = 12;

/// Pole order of `prod Gamma(A_k z + a_k) / prod Gamma(B_j z + b_j)` at `z` (negative for zeros).
fn pole_order<S: ComplexScalar>(spec: &GammaRatioSpec<S>, z: &S, eps: f64) -> Result<i64, Error> {
    let mut order = 0i64;
    for (sc, sh) in spec.big_a().iter().zip(spec.a()) {
        if gamma_hits(&(S::from_real(sc) * z.clone() + sh.clone()), eps)? {
            order += 1;
        }
    }
    for (sc, sh) in spec.big_b().iter().zip(spec.b()) {
        if gamma_hits(&(S::from_real(sc) * z.clone() + sh.clone()), eps)? {
            order -= 1;
        }
    }
    Ok(order)
}

fn gamma_hits<S: ComplexScalar>(x: &S, eps: f64) -> Result<bool, Error> {
    match x.integer_test(eps) {
        IntegerTest::Integer(n) => Ok(n <= BigInt::zero()),
        IntegerTest::NotInteger => Ok(false),
        IntegerTest::Ambiguous if libm::round(S::real_to_f64(&x.re())) > 0.0 => Ok(false),
        IntegerTest::Ambiguous => Err(Error::Ambiguous(format!("{}", x.clone().into_value()))),
    }
}

/// Numerator pole candidates `-(a_k + l)/A_k` with real part at least `bound`,
/// sorted by decreasing real part.
fn candidates<S: ComplexScalar>(spec: &GammaRatioSpec<S>, bound: f64) -> Vec<S> {
    let mut out: Vec<S> = Vec::new();
    for (sc, sh) in spec.big_a().iter().zip(spec.a()) {
        let scale = S::from_real(sc);
        let af = S::real_to_f64(sc);
        let l_max = libm::floor(-S::real_to_f64(&sh.re()) - af * bound);
        if l_max < 0.0 {
            continue;
        }
        for l in 0..=(l_max as i64) {
            let p = -(sh.clone() + S::from_i64(l)) / scale.clone();
            if !out.iter().any(|q| q.approx_eq(&p, spec.tol_log2())) {
                out.push(p);
            }
        }
    }
    out.sort_by(|x, y| y.re().partial_cmp(&x.re()).unwrap_or(core::cmp::Ordering::Equal));
    out
}

/// Scans candidates strictly left of `after` (all of them when `None`),
/// widening the window until a surviving pole turns up. Returns the scanned
/// candidates and the first pole with its index and order.
#[allow(clippy::type_complexity)]
fn scan<S: ComplexScalar>(eff: &GammaRatioSpec<S>, after: Option<S::Real>, eps_log2: f64) -> Result<(Vec<S>, Option<(usize, S, usize)>), Error> {
    let crude = eff
        .big_a()
        .iter()
        .zip(eff.a())
        .map(|(sc, sh)| -S::real_to_f64(&sh.re()) / S::real_to_f64(sc))
        .fold(f64::NEG_INFINITY, f64::max);
    let base_width = eff.p() as f64 * eff.big_a().iter().map(|sc| 1.0 / S::real_to_f64(sc)).fold(0.0, f64::max);
    let start = after.as_ref().map_or(crude, |a| S::real_to_f64(a).min(crude));
    let mut width = base_width.max(1.0);
    let mut cands = Vec::new();
    for _ in 0..=MAX_WIDENINGS {
        cands = candidates(eff, start - width);
        if let Some(a) = &after {
            cands.retain(|c| c.re() < *a);
        }
        for (i, c) in cands.iter().enumerate() {
            let ord = pole_order(eff, c, eps_log2)?;
            if ord > 0 {
                return Ok((cands.clone(), Some((i, c.clone(), ord as usize))));
            }
        }
        width *= 2.0;
    }
    Ok((cands, None))
}

/// Rightmost surviving pole of `W` (or of `W Gamma(z+t+m)/Gamma(z+t+1)` for the
/// prefactor form) and the resulting convergence classification.
///
/// Cancelation is decided by pole order: a candidate survives when more
/// numerator than denominator gammas are singular there. `eps_log2` is the
/// float coincidence tolerance; exact parameters ignore it.
pub fn abscissa<S: ComplexScalar>(spec: &GammaRatioSpec<S>, form: &SeriesForm<S>, eps_log2: f64) -> Result<AbscissaReport<S>, Error> {
    spec.require_balanced()?;
    let sigma = form.sigma();
    let eff = match form {
        SeriesForm::PlainShift { .. } => spec.clone(),
        SeriesForm::GammaPrefactor { theta, mu } => spec.augmented(theta.clone() + mu.clone(), theta.clone() + S::one()),
    };

    let (cands, found) = scan(&eff, None, eps_log2)?;
    let Some((idx, pole, mult)) = found else {
        return Ok(AbscissaReport {
            alpha: None,
            classification: Classification::UpperBoundOnly,
            rightmost_pole: None,
            multiplicity: 0,
            canceled_candidates: cands,
            effective_alpha: None,
            sigma,
        });
    };
    let canceled: Vec<S> = cands[..idx].to_vec();
    let alpha = pole.re();

    let coincident = mult == 1 && pole.approx_eq(&-sigma.clone(), eps_log2.max(spec.tol_log2()));
    let (classification, effective_alpha) = if coincident {
        let next = scan(&eff, Some(alpha.clone()), eps_log2)?.1.map(|(_, p, _)| p.re());
        (Classification::CoincidentPoleIgnored, next)
    } else {
        let s = sigma.re() + alpha.clone();
        let class = if s > S::Real::zero() { Classification::ExactAbscissa } else { Classification::UpperBoundOnly };
        (class, Some(alpha.clone()))
    };

    Ok(AbscissaReport {
        alpha: Some(alpha),
        classification,
        rightmost_pole: Some(pole),
        multiplicity: mult,
        canceled_candidates: canceled,
        effective_alpha,
        sigma,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gammaexp::tests::arb_spec;
    use crate::numerics::{elementary, GaussRational, Scalar};
    use crate::oracle::w_direct;
    use alloc::vec;
    use proptest::prelude::*;

    type G = GaussRational;
    type Q = BigRational;

    fn q(n: i64, d: i64) -> Q {
        Q::new(n.into(), d.into())
    }

    fn g(n: i64, d: i64) -> G {
        Complex::new(q(n, d), Q::zero())
    }

    fn spec(big_a: &[i64], a: &[G], big_b: &[i64], b: &[G]) -> GammaRatioSpec<G> {
        let r = |v: &[i64]| v.iter().map(|&n| q(n, 1)).collect();
        GammaRatioSpec::new(r(big_a), a.to_vec(), r(big_b), b.to_vec()).unwrap()
    }

    fn ratio_1_over_z() -> GammaRatioSpec<G> {
        spec(&[1], &[g(0, 1)], &[1], &[g(1, 1)])
    }

    fn square_fixture() -> GammaRatioSpec<G> {
        spec(&[1, 1], &[g(0, 1), g(0, 1)], &[1, 1], &[g(1, 2), g(1, 2)])
    }

    fn half_ratio() -> GammaRatioSpec<G> {
        spec(&[1], &[g(0, 1)], &[1], &[g(1, 2)])
    }

    fn exact(v: &ComplexValue) -> G {
        match v {
            ComplexValue::Exact(x) => x.clone(),
            ComplexValue::Float(_) => panic!("expected an exact value"),
        }
    }

    #[test]
    fn theorem_examples() {
        let fs = theorem_coeffs(&ratio_1_over_z(), &g(0, 1), 6, 128).unwrap();
        assert_eq!(fs.coeffs[0], g(1, 1));
        assert!(fs.coeffs[1..].iter().all(|c| c.is_zero()));

        let fs = theorem_coeffs(&square_fixture(), &g(1, 1), 3, 128).unwrap();
        assert_eq!(fs.coeffs[0], g(1, 1));
        assert_eq!(fs.coeffs[1], g(5, 4));
        assert_eq!(fs.nu.exact, Some(G::one()));

        let fs = theorem_coeffs(&square_fixture(), &g(1, 1), 0, 128).unwrap();
        assert_eq!(fs.coeffs, vec![g(1, 1)]);

        assert!(matches!(theorem_coeffs(&half_ratio(), &g(0, 1), 3, 128), Err(Error::MuNotOne(_))));
        let unbalanced = spec(&[2], &[g(0, 1)], &[1], &[g(0, 1)]);
        assert!(matches!(theorem_coeffs(&unbalanced, &g(0, 1), 3, 128), Err(Error::Unbalanced { .. })));
    }

    #[test]
    fn corollary_examples() {
        let fs = corollary_coeffs_stirling(&half_ratio(), &g(0, 1), 4, 128).unwrap();
        assert_eq!(fs.form, SeriesForm::GammaPrefactor { theta: g(0, 1), mu: g(1, 2) });
        assert_eq!(fs.coeffs[0], g(1, 1));
        let nb = corollary_coeffs_nb(&half_ratio(), &g(0, 1), 4, 128).unwrap();
        assert_eq!(nb, fs);
        // mu (-1) B_1^(3/2)(0) + C_1 with C_1 = 1/8
        assert_eq!(nb.coeffs[1], g(1, 2) * g(3, 4) + g(1, 8));

        let mu_zero = spec(&[1, 1], &[g(0, 1), g(1, 2)], &[1, 1], &[g(1, 4), g(1, 4)]);
        assert!(matches!(corollary_coeffs_nb(&mu_zero, &g(0, 1), 4, 128), Err(Error::MuNonPositiveInteger(_))));
        assert!(corollary_coeffs_stirling(&mu_zero, &g(0, 1), 4, 128).is_ok());
    }

    #[test]
    fn corollary_reduces_to_theorem_when_mu_is_one() {
        for sigma in [g(1, 1), g(3, 2), g(-1, 3)] {
            let th = theorem_coeffs(&square_fixture(), &sigma, 8, 128).unwrap();
            let theta = sigma.clone() - G::one();
            let st = corollary_coeffs_stirling(&square_fixture(), &theta, 8, 128).unwrap();
            let nb = corollary_coeffs_nb(&square_fixture(), &theta, 8, 128).unwrap();
            assert_eq!(st, th);
            assert_eq!(nb, th);
        }
    }

    #[test]
    fn rational_ratio_terminates() {
        // Gamma(z) Gamma(z+1) / (Gamma(z+1) Gamma(z+2)) = 1/(z(z+1)), mu = 2
        let s = spec(&[1, 1], &[g(0, 1), g(1, 1)], &[1, 1], &[g(1, 1), g(2, 1)]);
        for fs in [
            corollary_coeffs_stirling(&s, &g(-1, 1), 10, 128).unwrap(),
            corollary_coeffs_nb(&s, &g(-1, 1), 10, 128).unwrap(),
        ] {
            assert_eq!(fs.coeffs[0], G::one());
            assert!(fs.coeffs[1..].iter().all(|c| c.is_zero()));
            let v = evaluate(&fs, &ComplexValue::Exact(g(3, 1)), 10, 64).unwrap();
            assert_eq!(exact(&v.value), g(1, 12));
        }
    }

    #[test]
    fn power_to_factorial_examples() {
        let c = vec![g(1, 1), g(2, 3), g(-5, 7), g(1, 9)];
        let b = power_to_factorial(&c, 3);
        assert_eq!(b[0], g(1, 1));
        assert_eq!(b[1], c[1]);
        assert_eq!(b[2], c[1].clone() + c[2].clone());
        let delta = power_to_factorial(&[g(1, 1), g(0, 1), g(0, 1)], 2);
        assert_eq!(delta, vec![g(1, 1), g(0, 1), g(0, 1)]);
    }

    #[test]
    fn shift_examples() {
        let u = vec![g(2, 1), g(-1, 3), g(5, 2)];
        let s = g(3, 4);
        let v = shift_coeffs(&u, &s);
        assert_eq!(v[0], u[0]);
        assert_eq!(v[1], u[1].clone() + s.clone() * u[0].clone());
        assert_eq!(unshift_coeffs(&v, &s), u);
    }

    #[test]
    fn evaluate_examples() {
        let fs = theorem_coeffs(&ratio_1_over_z(), &g(0, 1), 5, 128).unwrap();
        for n in 0..=5 {
            let v = evaluate(&fs, &ComplexValue::Exact(g(3, 1)), n, 128).unwrap();
            assert_eq!(exact(&v.value), g(1, 3));
        }
        assert!(matches!(evaluate(&fs, &ComplexValue::Exact(g(3, 1)), 6, 128), Err(Error::Range { requested: 6, available: 5 })));
        assert!(matches!(evaluate(&fs, &ComplexValue::Exact(g(0, 1)), 2, 128), Err(Error::Pole(_))));

        let fs = theorem_coeffs(&square_fixture(), &g(1, 1), 40, 128).unwrap();
        let z = ComplexValue::Exact(g(2, 1));
        assert_eq!(exact(&evaluate(&fs, &z, 0, 128).unwrap().value), g(1, 3));
        assert!(matches!(evaluate(&fs, &ComplexValue::Exact(g(-3, 1)), 5, 128), Err(Error::Pole(_))));

        let pi = elementary::pi(128).to_f64();
        let truth = 16.0 / (9.0 * pi);
        let mut prev = f64::INFINITY;
        for n in [5, 10, 20, 40] {
            let v = evaluate(&fs, &z, n, 128).unwrap();
            let err = (v.value.re_f64() - truth).abs();
            assert!(err < prev, "N = {n}: {err}");
            assert_eq!(v.term_log2.len(), n + 1);
            assert!(v.last_ratio_log2 < 0.0);
            prev = err;
        }

        let mut zero = fs.clone();
        zero.coeffs.iter_mut().for_each(|c| *c = G::zero());
        assert_eq!(exact(&evaluate(&zero, &z, 7, 64).unwrap().value), G::zero());
    }

    #[test]
    fn gamma_prefactor_evaluation_matches_oracle() {
        let s = half_ratio();
        let fs = corollary_coeffs_stirling(&s, &g(0, 1), 30, 128).unwrap();
        let z = g(3, 1);
        let truth = w_direct(&s, &ComplexFloat::from_gauss(&z), 128).unwrap().re.to_f64();
        let mut prev = f64::INFINITY;
        for n in [2, 5, 10, 30] {
            let v = evaluate(&fs, &ComplexValue::Exact(z.clone()), n, 128).unwrap();
            assert!(!v.value.is_exact(), "{:?}", v.value);
            let err = (v.value.re_f64() - truth).abs();
            assert!(err < prev);
            prev = err;
        }
        assert!(prev < 1e-4, "{prev}");
    }

    #[test]
    fn float_coefficients_match_exact() {
        let fq = theorem_coeffs(&square_fixture(), &g(1, 1), 12, 200).unwrap();
        let s = square_fixture();
        let fspec: GammaRatioSpec<ComplexFloat> = GammaRatioSpec::new(
            s.big_a().iter().map(|x| Float::with_prec(x, 200)).collect(),
            s.a().iter().map(|x| x.to_complex_float(200)).collect(),
            s.big_b().iter().map(|x| Float::with_prec(x, 200)).collect(),
            s.b().iter().map(|x| x.to_complex_float(200)).collect(),
        )
        .unwrap();
        let ff = theorem_coeffs(&fspec, &Complex::new(Float::from_i64(1), Float::zero()), 12, 200).unwrap();
        for (e, f) in fq.coeffs.iter().zip(&ff.coeffs) {
            assert!(e.to_complex_float(200).approx_eq(f, -180.0));
        }
        let z = ComplexValue::Exact(g(2, 1));
        let ve = evaluate(&fq, &z, 12, 200).unwrap().value.to_float(200);
        let vf = evaluate(&ff, &z, 12, 200).unwrap().value.to_float(200);
        assert!(ve.approx_eq(&vf, -170.0));
    }

    #[test]
    fn abscissa_examples() {
        let r = abscissa(&ratio_1_over_z(), &SeriesForm::PlainShift { sigma: g(1, 1) }, f64::NEG_INFINITY).unwrap();
        assert_eq!(r.alpha, Some(q(0, 1)));
        assert_eq!(r.multiplicity, 1);
        assert_eq!(r.classification, Classification::ExactAbscissa);

        let r = abscissa(&ratio_1_over_z(), &SeriesForm::PlainShift { sigma: g(0, 1) }, f64::NEG_INFINITY).unwrap();
        assert_eq!(r.classification, Classification::CoincidentPoleIgnored);
        assert_eq!(r.alpha, Some(q(0, 1)));
        assert_eq!(r.effective_alpha, None);

        let r = square_fixture();
        let rep = theorem_coeffs(&r, &g(1, 1), 2, 64).unwrap().abscissa().unwrap();
        assert_eq!(rep.alpha, Some(q(0, 1)));
        assert_eq!(rep.multiplicity, 2);
        assert_eq!(rep.classification, Classification::ExactAbscissa);

        let shifted = spec(&[1], &[g(2, 1)], &[1], &[g(3, 1)]);
        let rep = abscissa(&shifted, &SeriesForm::PlainShift { sigma: g(0, 1) }, f64::NEG_INFINITY).unwrap();
        assert_eq!(rep.alpha, Some(q(-2, 1)));
        assert_eq!(rep.classification, Classification::UpperBoundOnly);

        // z / (z + 3/2): the candidate z = -1 cancels against Gamma(z)
        let canc = spec(&[1, 1], &[g(1, 1), g(3, 2)], &[1, 1], &[g(0, 1), g(5, 2)]);
        let rep = abscissa(&canc, &SeriesForm::PlainShift { sigma: g(2, 1) }, f64::NEG_INFINITY).unwrap();
        assert_eq!(rep.alpha, Some(q(-3, 2)));
        assert_eq!(rep.canceled_candidates, vec![g(-1, 1)]);
        assert_eq!(rep.classification, Classification::ExactAbscissa);

        let entire = spec(&[1], &[g(1, 1)], &[1], &[g(0, 1)]);
        let rep = abscissa(&entire, &SeriesForm::PlainShift { sigma: g(0, 1) }, f64::NEG_INFINITY).unwrap();
        assert_eq!(rep.alpha, None);
        assert_eq!(rep.alpha_f64(), f64::NEG_INFINITY);

        // prefactor form: W Gamma(z + mu)/Gamma(z + 1) = Gamma(z)/Gamma(z + 1)
        let rep = abscissa(&half_ratio(), &SeriesForm::GammaPrefactor { theta: g(0, 1), mu: g(1, 2) }, f64::NEG_INFINITY).unwrap();
        assert_eq!(rep.alpha, Some(q(0, 1)));
        assert_eq!(rep.classification, Classification::ExactAbscissa);
    }

    #[test]
    fn float_abscissa_ambiguity() {
        let p = 256;
        let c = |x: f64| Complex::new(Float::from_f64(x, p), Float::zero());
        let one = Float::from_i64(1);
        let clear: GammaRatioSpec<ComplexFloat> = GammaRatioSpec::new(vec![one.clone()], vec![c(0.25)], vec![one.clone()], vec![c(1.0)]).unwrap();
        let eps = default_eps_log2(&clear);
        let rep = abscissa(&clear, &SeriesForm::PlainShift { sigma: c(1.0) }, eps).unwrap();
        assert_eq!(rep.alpha_f64(), -0.25);

        let near: GammaRatioSpec<ComplexFloat> = GammaRatioSpec::new(vec![one.clone()], vec![c(1.0)], vec![one], vec![c(1e-40)]).unwrap();
        assert!(matches!(abscissa(&near, &SeriesForm::PlainShift { sigma: c(1.0) }, eps), Err(Error::Ambiguous(_))));
    }

    fn arb_g() -> impl Strategy<Value = G> {
        (-20i64..20, 1i64..7, -6i64..6).prop_map(|(n, d, i)| Complex::new(q(n, d), q(i, 3)))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(16))]

        #[test]
        fn dual_routes_agree(s in arb_spec(), theta in arb_g()) {
            let mu = s.mu();
            prop_assume!(!matches!(mu.integer_test(f64::NEG_INFINITY), IntegerTest::Integer(k) if k <= BigInt::zero()));
            let st = corollary_coeffs_stirling(&s, &theta, 10, 64).unwrap();
            let nb = corollary_coeffs_nb(&s, &theta, 10, 64).unwrap();
            prop_assert_eq!(st.coeffs, nb.coeffs);
        }

        #[test]
        fn shift_round_trip(u in proptest::collection::vec(arb_g(), 1..=12), sigma in arb_g()) {
            prop_assert_eq!(unshift_coeffs(&shift_coeffs(&u, &sigma), &sigma), u.clone());
            prop_assert_eq!(shift_coeffs(&unshift_coeffs(&u, &sigma), &sigma), u);
        }

        #[test]
        fn stirling_form_equals_rearrange_then_shift(s in arb_spec(), theta in arb_g()) {
            // force mu = 1 by augmentation, then compare the two coefficient chains
            let mu = s.mu();
            let s = s.augmented(theta.clone() + mu, theta.clone() + G::one());
            let sigma = theta + G::one();
            let n = 10;
            let d = theorem_coeffs(&s, &sigma, n, 64).unwrap().coeffs;
            let c = c_coefficients(&s, n, ExpRoute::Recurrence).unwrap();
            let b = power_to_factorial(&c, n);
            let u: Vec<G> = b.iter().enumerate().map(|(k, x)| x.mul_rational(&Q::new(BigInt::one(), factorial(k)))).collect();
            let v = shift_coeffs(&u, &sigma);
            for (k, (dk, vk)) in d.iter().zip(&v).enumerate() {
                prop_assert_eq!(dk.clone(), vk.mul_bigint(&factorial(k)));
            }
        }
    }
}
