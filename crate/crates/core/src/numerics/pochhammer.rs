use num_bigint::BigInt;
use num_traits::One;

use super::Scalar;

/// Rising factorial `z (z+1) ... (z+n-1)`; 1 for `n = 0`.
///
/// Float values carry their own binary exponent, so long products neither
/// overflow nor lose an exact zero factor.
pub fn pochhammer<S: Scalar>(z: &S, n: usize) -> S {
    let mut acc = S::one();
    for i in 0..n {
        let factor = z.clone() + S::from_i64(i as i64);
        if factor.is_exact_zero() {
            return S::zero();
        }
        acc = acc * factor;
    }
    acc
}

/// Generalized binomial coefficient `x (x-1) ... (x-k+1) / k!`.
pub fn gen_binomial<S: Scalar>(x: &S, k: usize) -> S {
    let mut acc = S::one();
    for i in 0..k {
        acc = acc * (x.clone() - S::from_i64(i as i64));
    }
    acc.mul_rational(&num_rational::BigRational::new(BigInt::one(), factorial(k)))
}

pub fn factorial(n: usize) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, i| acc * BigInt::from(i))
}

/// Ordinary binomial coefficient over the integers.
pub fn binomial(n: usize, k: usize) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    num_integer::binomial(BigInt::from(n), BigInt::from(k))
}
