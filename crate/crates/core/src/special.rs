//! Bernoulli numbers and polynomials, Stirling numbers of the first kind,
//! non-central Stirling numbers and Norlund-Bernoulli polynomials.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numerics::{binomial, factorial, pochhammer, RatPoly, Scalar};
use crate::series::TruncatedSeries;

/// `B_0..=B_n` from the expansion of `t/(e^t - 1)` (so `B_1 = -1/2`).
pub fn bernoulli_numbers(n: usize) -> Vec<BigRational> {
    let gf = bernoulli_gf(n);
    gf.coeffs()
        .iter()
        .enumerate()
        .map(|(k, c)| c * BigRational::from_integer(factorial(k)))
        .collect()
}

/// `t/(e^t - 1)` to order `n`, by inverting `(e^t - 1)/t = sum t^k/(k+1)!`.
pub fn bernoulli_gf(n: usize) -> TruncatedSeries<BigRational> {
    let d = TruncatedSeries::new((0..=n).map(|k| BigRational::new(BigInt::one(), factorial(k + 1))).collect());
    d.reciprocal().expect("constant term is 1")
}

/// `B_2, B_4, ..., B_{2m}` from tangent numbers, using integer arithmetic only.
pub fn bernoulli_even_tangent(m: usize) -> Vec<BigRational> {
    if m == 0 {
        return Vec::new();
    }
    let mut t = vec![BigInt::zero(); m + 1];
    t[1] = BigInt::one();
    for k in 2..=m {
        t[k] = &t[k - 1] * BigInt::from(k - 1);
    }
    for k in 2..=m {
        for j in k..=m {
            t[j] = &t[j - 1] * BigInt::from(j - k) + &t[j] * BigInt::from(j - k + 2);
        }
    }
    (1..=m)
        .map(|k| {
            let four_k = BigInt::one() << (2 * k);
            let num = &t[k] * BigInt::from(2 * k);
            let b = BigRational::new(num, &four_k * (&four_k - BigInt::one()));
            if k % 2 == 1 {
                b
            } else {
                -b
            }
        })
        .collect()
}

/// `B_n(x) = sum_k binom(n,k) B_k x^(n-k)` in the symbol `x`.
pub fn bernoulli_poly(n: usize) -> RatPoly {
    let b = bernoulli_numbers(n);
    let x = RatPoly::var("x");
    let mut acc = RatPoly::zero();
    // Horner in x: coefficient of x^(n-k) is binom(n,k) B_k
    for (k, bk) in b.iter().enumerate() {
        let c = bk * BigRational::from_integer(binomial(n, k));
        acc = acc * x.clone() + RatPoly::constant(c);
    }
    acc
}

/// Signed Stirling numbers of the first kind `s(n, j)` for `n <= max_n`.
#[derive(Clone, Debug)]
pub struct StirlingTable {
    rows: Vec<Vec<BigInt>>,
}

impl StirlingTable {
    /// Fills rows by `s(n+1, j) = s(n, j-1) - n s(n, j)`.
    pub fn new(max_n: usize) -> Self {
        let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![BigInt::one()]);
        for n in 0..max_n {
            let prev = &rows[n];
            let mut row = vec![BigInt::zero(); n + 2];
            for j in 0..=n + 1 {
                let left = if j >= 1 { prev[j - 1].clone() } else { BigInt::zero() };
                let here = if j <= n { &prev[j] * BigInt::from(n) } else { BigInt::zero() };
                row[j] = left - here;
            }
            rows.push(row);
        }
        StirlingTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `s(n, j)`, zero for `j > n`. Panics if `n > max_n`.
    pub fn get(&self, n: usize, j: usize) -> BigInt {
        assert!(n <= self.max_n(), "row {} beyond table size {}", n, self.max_n());
        self.rows[n].get(j).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn row(&self, n: usize) -> &[BigInt] {
        &self.rows[n]
    }
}

/// `s(n, j)` from a fresh table.
pub fn stirling_first(n: usize, j: usize) -> BigInt {
    StirlingTable::new(n).get(n, j)
}

/// `s_sigma(n, r) = sum_{k=r}^n (-1)^(k+r) binom(n,k) (sigma)_{n-k} s(k,r)`.
pub fn noncentral_stirling<S: Scalar>(n: usize, r: usize, sigma: &S) -> S {
    noncentral_stirling_with(&StirlingTable::new(n), n, r, sigma)
}

/// As [`noncentral_stirling`], reusing a Stirling table with `max_n >= n`.
pub fn noncentral_stirling_with<S: Scalar>(table: &StirlingTable, n: usize, r: usize, sigma: &S) -> S {
    let mut acc = S::zero();
    for k in r..=n {
        let s = table.get(k, r);
        if s.is_zero() {
            continue;
        }
        let mut c = binomial(n, k) * s;
        if (k + r) % 2 == 1 {
            c = -c;
        }
        acc = acc + pochhammer(sigma, n - k).mul_bigint(&c);
    }
    acc
}

/// Triangle of `s_sigma(n, r)` built by `s_sigma(n+1, r) = (sigma+n) s_sigma(n, r) + s_sigma(n, r-1)`.
#[derive(Clone, Debug)]
pub struct NoncentralStirlingTable<S> {
    rows: Vec<Vec<S>>,
}

impl<S: Scalar> NoncentralStirlingTable<S> {
    pub fn new(max_n: usize, sigma: &S) -> Self {
        let mut rows: Vec<Vec<S>> = Vec::with_capacity(max_n + 1);
        rows.push(vec![S::one()]);
        for n in 0..max_n {
            let prev = &rows[n];
            let shift = sigma.clone() + S::from_i64(n as i64);
            let mut row = Vec::with_capacity(n + 2);
            for r in 0..=n + 1 {
                let mut v = if r <= n { shift.clone() * prev[r].clone() } else { S::zero() };
                if r >= 1 {
                    v = v + prev[r - 1].clone();
                }
                row.push(v);
            }
            rows.push(row);
        }
        NoncentralStirlingTable { rows }
    }

    pub fn max_n(&self) -> usize {
        self.rows.len() - 1
    }

    /// `s_sigma(n, r)`, zero for `r > n`.
    pub fn get(&self, n: usize, r: usize) -> S {
        self.rows[n].get(r).cloned().unwrap_or_else(S::zero)
    }
}

/// Norlund-Bernoulli polynomials `B_k^(gamma)(x) = k! [t^k] exp(gamma L(t) + x t)`
/// with `L = log(t/(e^t - 1))` cached up to `max_k`.
#[derive(Clone, Debug)]
pub struct NorlundBernoulli {
    log_gf: TruncatedSeries<BigRational>,
}

impl NorlundBernoulli {
    pub fn new(max_k: usize) -> Self {
        let log_gf = bernoulli_gf(max_k).log().expect("t/(e^t-1) starts with 1");
        NorlundBernoulli { log_gf }
    }

    pub fn max_k(&self) -> usize {
        self.log_gf.order()
    }

    /// All of `B_0^(gamma)(x) ..= B_k^(gamma)(x)`.
    pub fn values<S: Scalar>(&self, k: usize, gamma: &S, x: &S) -> Vec<S> {
        let gf = if k <= self.max_k() {
            self.log_gf.truncate(k)
        } else {
            bernoulli_gf(k).log().expect("t/(e^t-1) starts with 1")
        };
        let mut u: Vec<S> = gf.coeffs().iter().map(|c| gamma.mul_rational(c)).collect();
        if k >= 1 {
            u[1] = u[1].clone() + x.clone();
        }
        let v = TruncatedSeries::new(u).exp_recurrence().expect("zero constant term");
        v.into_coeffs()
            .into_iter()
            .enumerate()
            .map(|(j, c)| c.mul_bigint(&factorial(j)))
            .collect()
    }

    pub fn value<S: Scalar>(&self, k: usize, gamma: &S, x: &S) -> S {
        self.values(k, gamma, x).pop().expect("at least B_0")
    }
}

/// `B_k^(gamma)(x)` without a cached generating function.
pub fn norlund_bernoulli<S: Scalar>(k: usize, gamma: &S, x: &S) -> S {
    NorlundBernoulli::new(k).value(k, gamma, x)
}
