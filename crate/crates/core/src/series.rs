//! Truncated formal power series `c_0 + c_1 t + ... + c_N t^N`.
//!
//! Exponentiation comes in three independent routes: the convolution
//! recurrence (production), a sum over integer partitions and a determinant
//! formula. The last two exist to cross-check the first.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::numerics::{factorial, Field, Scalar};
use crate::Error;

/// Default cap on the order handled by [`TruncatedSeries::exp_partition`].
pub const PARTITION_MAX_ORDER: usize = 12;

/// Coefficients `c_0..=c_N` of a power series truncated after `t^N`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> TruncatedSeries<S> {
    /// Panics on an empty coefficient list.
    pub fn new(coeffs: Vec<S>) -> Self {
        assert!(!coeffs.is_empty(), "a truncated series needs at least c_0");
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        TruncatedSeries { coeffs: vec![S::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = S::one();
        s
    }

    /// `c0 + c1 t`, padded with zeros up to `order`.
    pub fn linear(c0: S, c1: S, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = c0;
        if order >= 1 {
            s.coeffs[1] = c1;
        }
        s
    }

    /// Truncation order `N`.
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &S {
        &self.coeffs[k]
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Keep the first `order + 1` coefficients, padding with zeros if needed.
    pub fn truncate(&self, order: usize) -> Self {
        let mut c: Vec<S> = self.coeffs.iter().take(order + 1).cloned().collect();
        c.resize(order + 1, S::zero());
        TruncatedSeries { coeffs: c }
    }

    pub fn scale(&self, s: &S) -> Self {
        TruncatedSeries { coeffs: self.coeffs.iter().map(|c| c.clone() * s.clone()).collect() }
    }

    /// Apply `f` to every coefficient, e.g. to change ring.
    pub fn map<T: Scalar>(&self, f: impl Fn(&S) -> T) -> TruncatedSeries<T> {
        TruncatedSeries { coeffs: self.coeffs.iter().map(f).collect() }
    }

    fn check_order(&self, other: &Self) -> Result<(), Error> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch(self.order(), other.order()));
        }
        Ok(())
    }

    /// Cauchy product truncated at the common order.
    pub fn mul(&self, other: &Self) -> Result<Self, Error> {
        self.check_order(other)?;
        let n = self.order();
        let mut out = vec![S::zero(); n + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_exact_zero() {
                continue;
            }
            for (j, b) in other.coeffs[..=n - i].iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Ok(TruncatedSeries { coeffs: out })
    }

    /// Termwise sum; orders must agree.
    pub fn try_add(&self, other: &Self) -> Result<Self, Error> {
        self.check_order(other)?;
        Ok(self.clone() + other.clone())
    }

    fn require_zero_constant(&self) -> Result<(), Error> {
        if !self.coeffs[0].is_exact_zero() {
            return Err(Error::ConstantTerm { expected: "0" });
        }
        Ok(())
    }

    /// `v = exp(u)` by `v_0 = 1`, `v_r = (1/r) sum_{k=1}^r k u_k v_{r-k}`.
    pub fn exp_recurrence(&self) -> Result<Self, Error> {
        self.require_zero_constant()?;
        let n = self.order();
        let mut v = Vec::with_capacity(n + 1);
        v.push(S::one());
        for r in 1..=n {
            let mut acc = S::zero();
            for k in 1..=r {
                let u = &self.coeffs[k];
                if u.is_exact_zero() {
                    continue;
                }
                acc = acc + u.clone().mul_bigint(&BigInt::from(k)) * v[r - k].clone();
            }
            v.push(acc.div_int(r as i64));
        }
        Ok(TruncatedSeries { coeffs: v })
    }

    /// `v = exp(u)` as a sum over partitions of each `r`, up to
    /// [`PARTITION_MAX_ORDER`].
    pub fn exp_partition(&self) -> Result<Self, Error> {
        self.exp_partition_capped(PARTITION_MAX_ORDER)
    }

    /// [`exp_partition`](Self::exp_partition) with an explicit order cap.
    pub fn exp_partition_capped(&self, max_order: usize) -> Result<Self, Error> {
        self.require_zero_constant()?;
        let n = self.order();
        if n > max_order {
            return Err(Error::Range { requested: n, available: max_order });
        }
        let mut v = Vec::with_capacity(n + 1);
        v.push(S::one());
        for r in 1..=n {
            let mut acc = S::zero();
            partition_terms(&self.coeffs, r, r, S::one(), &mut acc);
            v.push(acc);
        }
        Ok(TruncatedSeries { coeffs: v })
    }

    /// Inverse of [`exp_recurrence`](Self::exp_recurrence); needs `v_0 = 1` exactly.
    pub fn log(&self) -> Result<Self, Error> {
        if self.coeffs[0] != S::one() {
            return Err(Error::ConstantTerm { expected: "1" });
        }
        let n = self.order();
        let mut u = vec![S::zero(); n + 1];
        for r in 1..=n {
            let mut acc = S::zero();
            for k in 1..r {
                if u[k].is_exact_zero() {
                    continue;
                }
                acc = acc + u[k].clone().mul_bigint(&BigInt::from(k)) * self.coeffs[r - k].clone();
            }
            u[r] = self.coeffs[r].clone() - acc.div_int(r as i64);
        }
        Ok(TruncatedSeries { coeffs: u })
    }
}

/// Adds `sum prod u_i^{k_i}/k_i!` over partitions of `rest` into parts `<= max_part`.
fn partition_terms<S: Scalar>(u: &[S], rest: usize, max_part: usize, prod: S, acc: &mut S) {
    if rest == 0 {
        *acc = acc.clone() + prod;
        return;
    }
    for part in (1..=max_part.min(rest)).rev() {
        if u[part].is_exact_zero() {
            continue;
        }
        // take `m` copies of `part`, then only smaller parts
        let mut p = prod.clone();
        let mut m = 1usize;
        while m * part <= rest {
            p = (p * u[part].clone()).div_int(m as i64);
            partition_terms(u, rest - m * part, part - 1, p.clone(), acc);
            m += 1;
        }
    }
}

/// Which of the three exponentiation routes to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExpRoute {
    Recurrence,
    Partition,
    Nair,
}

impl ExpRoute {
    pub const ALL: [ExpRoute; 3] = [ExpRoute::Recurrence, ExpRoute::Partition, ExpRoute::Nair];

    pub fn name(self) -> &'static str {
        match self {
            ExpRoute::Recurrence => "recurrence",
            ExpRoute::Partition => "partition",
            ExpRoute::Nair => "nair",
        }
    }
}

impl core::str::FromStr for ExpRoute {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self, Error> {
        ExpRoute::ALL
            .into_iter()
            .find(|r| r.name() == s)
            .ok_or_else(|| Error::Parse(alloc::format!("unknown route {:?}", s)))
    }
}

impl<S: Field> TruncatedSeries<S> {
    pub fn exp_by(&self, route: ExpRoute) -> Result<Self, Error> {
        match route {
            ExpRoute::Recurrence => self.exp_recurrence(),
            ExpRoute::Partition => self.exp_partition(),
            ExpRoute::Nair => self.exp_nair(),
        }
    }

    /// `v = exp(u)` with `v_r = det(Omega_r)/r!`, where `Omega_r` is lower
    /// Hessenberg with `omega_{i,j} = (i-j+1) u_{i-j+1} (i-1)!/(j-1)!` for
    /// `i >= j` and `-1` on the superdiagonal.
    pub fn exp_nair(&self) -> Result<Self, Error> {
        self.require_zero_constant()?;
        let n = self.order();
        let mut v = Vec::with_capacity(n + 1);
        v.push(S::one());
        for r in 1..=n {
            let mut m = vec![vec![S::zero(); r]; r];
            for i in 1..=r {
                for j in 1..=r {
                    m[i - 1][j - 1] = if i >= j {
                        let d = i - j + 1;
                        let w = factorial(i - 1) / factorial(j - 1) * BigInt::from(d);
                        self.coeffs[d].clone().mul_bigint(&w)
                    } else if i + 1 == j {
                        -S::one()
                    } else {
                        S::zero()
                    };
                }
            }
            let det = determinant(m);
            let rf = BigRational::from_integer(factorial(r));
            v.push(det.mul_rational(&rf.recip()));
        }
        Ok(TruncatedSeries { coeffs: v })
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn reciprocal(&self) -> Result<Self, Error> {
        if self.coeffs[0].is_exact_zero() {
            return Err(Error::ConstantTerm { expected: "nonzero" });
        }
        let n = self.order();
        let c0 = self.coeffs[0].clone();
        let mut out: Vec<S> = Vec::with_capacity(n + 1);
        out.push(S::one() / c0.clone());
        for r in 1..=n {
            let mut acc = S::zero();
            for k in 1..=r {
                acc = acc + self.coeffs[k].clone() * out[r - k].clone();
            }
            out.push(-(acc / c0.clone()));
        }
        Ok(TruncatedSeries { coeffs: out })
    }
}

/// Determinant by Gaussian elimination, pivoting on the largest magnitude.
pub fn determinant<S: Field>(mut m: Vec<Vec<S>>) -> S {
    let n = m.len();
    let mut det = S::one();
    for col in 0..n {
        let mut piv = None;
        let mut best = f64::NEG_INFINITY;
        for (row, r) in m.iter().enumerate().skip(col) {
            if r[col].is_exact_zero() {
                continue;
            }
            let mag = r[col].magnitude();
            if piv.is_none() || mag > best {
                piv = Some(row);
                best = mag;
            }
        }
        let Some(p) = piv else {
            return S::zero();
        };
        if p != col {
            m.swap(p, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det = det * pivot.clone();
        for row in col + 1..n {
            if m[row][col].is_exact_zero() {
                continue;
            }
            let f = m[row][col].clone() / pivot.clone();
            for k in col..n {
                let t = f.clone() * m[col][k].clone();
                m[row][k] = m[row][k].clone() - t;
            }
        }
    }
    det
}

impl<S: Scalar> Add for TruncatedSeries<S> {
    type Output = Self;
    /// Panics if the orders differ; see [`TruncatedSeries::try_add`].
    fn add(self, rhs: Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series orders differ");
        TruncatedSeries { coeffs: self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a + b).collect() }
    }
}

impl<S: Scalar> Sub for TruncatedSeries<S> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        assert_eq!(self.order(), rhs.order(), "series orders differ");
        TruncatedSeries { coeffs: self.coeffs.into_iter().zip(rhs.coeffs).map(|(a, b)| a - b).collect() }
    }
}

impl<S: Scalar> Neg for TruncatedSeries<S> {
    type Output = Self;
    fn neg(self) -> Self {
        TruncatedSeries { coeffs: self.coeffs.into_iter().map(|c| -c).collect() }
    }
}

impl<S: Scalar> TruncatedSeries<S> {
    /// True when every coefficient is exactly zero.
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }
}

impl TruncatedSeries<BigRational> {
    /// Convenience constructor from integer pairs `(num, den)`.
    pub fn from_ratios(c: &[(i64, i64)]) -> Self {
        TruncatedSeries::new(c.iter().map(|&(n, d)| BigRational::new(n.into(), d.into())).collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{ComplexFloat, Float, RatPoly};
    use num_complex::Complex;
    use num_traits::Zero;
    use proptest::prelude::*;

    type Q = BigRational;

    fn s(c: &[(i64, i64)]) -> TruncatedSeries<Q> {
        TruncatedSeries::from_ratios(c)
    }

    #[test]
    fn exp_of_linear_term() {
        let u = s(&[(0, 1), (1, 1), (0, 1), (0, 1)]);
        let want = s(&[(1, 1), (1, 1), (1, 2), (1, 6)]);
        assert_eq!(u.exp_recurrence().unwrap(), want);
        assert_eq!(u.exp_partition().unwrap(), want);
        assert_eq!(u.exp_nair().unwrap(), want);
    }

    #[test]
    fn exp_of_zero() {
        let u = TruncatedSeries::<Q>::zero(5);
        for v in [u.exp_recurrence(), u.exp_partition(), u.exp_nair()] {
            assert_eq!(v.unwrap(), TruncatedSeries::one(5));
        }
    }

    #[test]
    fn low_order_closed_forms() {
        // v_1 = u_1, v_2 = u_2 + u_1^2/2
        let u = s(&[(0, 1), (3, 5), (-2, 7)]);
        let v = u.exp_partition().unwrap();
        assert_eq!(v.coeff(1), &Q::new(3.into(), 5.into()));
        assert_eq!(v.coeff(2), &(Q::new((-2).into(), 7.into()) + Q::new(9.into(), 50.into())));
        assert_eq!(u.exp_nair().unwrap(), v);
    }

    #[test]
    fn constant_term_errors() {
        let u = s(&[(1, 1), (1, 1)]);
        assert!(matches!(u.exp_recurrence(), Err(Error::ConstantTerm { .. })));
        assert!(matches!(u.exp_partition(), Err(Error::ConstantTerm { .. })));
        assert!(matches!(u.exp_nair(), Err(Error::ConstantTerm { .. })));
        let v = s(&[(2, 1), (1, 1)]);
        assert!(matches!(v.log(), Err(Error::ConstantTerm { expected: "1" })));
    }

    #[test]
    fn partition_cap() {
        let u = TruncatedSeries::<Q>::zero(13);
        assert!(matches!(u.exp_partition(), Err(Error::Range { requested: 13, available: 12 })));
        assert!(u.exp_partition_capped(13).is_ok());
    }

    #[test]
    fn log_examples() {
        assert!(TruncatedSeries::<Q>::one(4).log().unwrap().is_zero());
        assert_eq!(s(&[(1, 1), (1, 1), (1, 2)]).log().unwrap(), s(&[(0, 1), (1, 1), (0, 1)]));
    }

    #[test]
    fn mul_examples() {
        assert_eq!(s(&[(1, 1), (1, 1)]).mul(&s(&[(1, 1), (-1, 1)])).unwrap(), s(&[(1, 1), (0, 1)]));
        let x = s(&[(0, 1), (1, 1), (0, 1)]);
        assert_eq!(x.mul(&x).unwrap(), s(&[(0, 1), (0, 1), (1, 1)]));
        let a = s(&[(2, 3), (-1, 4), (5, 1)]);
        assert_eq!(a.mul(&TruncatedSeries::one(2)).unwrap(), a);
        assert_eq!(a.mul(&TruncatedSeries::one(3)), Err(Error::OrderMismatch(2, 3)));
    }

    #[test]
    fn reciprocal_of_geometric() {
        let one_minus_t = s(&[(1, 1), (-1, 1), (0, 1), (0, 1)]);
        assert_eq!(one_minus_t.reciprocal().unwrap(), s(&[(1, 1), (1, 1), (1, 1), (1, 1)]));
    }

    #[test]
    fn determinant_with_pivoting() {
        let q = |n: i64| Q::from_integer(n.into());
        let m = vec![vec![q(0), q(2), q(1)], vec![q(1), q(0), q(0)], vec![q(3), q(1), q(4)]];
        // expand along row 2: -1 * (2*4 - 1*1) = -7
        assert_eq!(determinant(m), q(-7));
    }

    #[test]
    fn symbolic_exp_over_polynomials() {
        // exp(g t) = sum g^k t^k / k!
        let g = RatPoly::var("g");
        let u = TruncatedSeries::linear(RatPoly::zero(), g.clone(), 3);
        let v = u.exp_recurrence().unwrap();
        assert_eq!(v.coeff(3), &(g.clone() * g.clone() * g.clone()).div_int(6));
        assert_eq!(u.exp_partition().unwrap(), v);
    }

    #[test]
    fn float_routes_agree() {
        let c = |re: f64, im: f64| -> ComplexFloat { Complex::new(Float::from_f64(re, 128), Float::from_f64(im, 128)) };
        let u = TruncatedSeries::new(vec![c(0.0, 0.0), c(0.3, -1.0), c(2.5, 0.25), c(-0.75, 0.5), c(1.0, 1.0)]);
        let a = u.exp_recurrence().unwrap();
        let b = u.exp_nair().unwrap();
        let p = u.exp_partition().unwrap();
        for k in 0..=4 {
            let d1 = a.coeff(k).clone() - b.coeff(k).clone();
            let d2 = a.coeff(k).clone() - p.coeff(k).clone();
            assert!(d1.re.log2_abs().max(d1.im.log2_abs()) < -110.0);
            assert!(d2.re.log2_abs().max(d2.im.log2_abs()) < -110.0);
        }
    }

    fn arb_series(max_order: usize) -> impl Strategy<Value = TruncatedSeries<Q>> {
        (1..=max_order).prop_flat_map(|n| {
            proptest::collection::vec((-20i64..20, 1i64..9), n).prop_map(|v| {
                let mut c = vec![Q::zero()];
                c.extend(v.into_iter().map(|(a, b)| Q::new(a.into(), b.into())));
                TruncatedSeries::new(c)
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn routes_are_identical(u in arb_series(8)) {
            let r = u.exp_recurrence().unwrap();
            prop_assert_eq!(&u.exp_partition().unwrap(), &r);
            prop_assert_eq!(&u.exp_nair().unwrap(), &r);
        }

        #[test]
        fn log_inverts_exp(u in arb_series(10)) {
            prop_assert_eq!(u.exp_recurrence().unwrap().log().unwrap(), u);
        }

        #[test]
        fn exp_is_a_homomorphism(u in arb_series(8), seed in any::<u64>()) {
            let n = u.order();
            let w = TruncatedSeries::new(
                (0..=n).map(|k| if k == 0 { Q::zero() } else {
                    Q::new(BigInt::from((seed >> (k % 60)) as i64 % 11 - 5), BigInt::from(k as i64))
                }).collect(),
            );
            let lhs = (u.clone() + w.clone()).exp_recurrence().unwrap();
            let rhs = u.exp_recurrence().unwrap().mul(&w.exp_recurrence().unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }
}
