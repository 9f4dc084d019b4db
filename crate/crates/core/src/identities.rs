//! Exact checks of two Norlund-Bernoulli identities in `(t, x)` and of the
//! connection formula between non-central Stirling and Norlund-Bernoulli
//! numbers in `sigma`.
//!
//! ```text
//! (I)   (t-x+1)_m / m! B_m^(t-x+m+1)(1-x)
//!         = sum_j B_j^(t-x+1)(t) (x-t)_j / j! sum_k (-1)^k binom(m,k) s(m-k,j) (t)_k
//! (II)  1/m! sum_j s(m,j) B_j^(t+x)(t) (1-t-x)_j / j!
//!         = sum_j binom(t, m-j) B_j^(t+x+j)(x) (t+x)_j / (j!)^2
//! (III) s_sigma(n,l) = (-1)^(n-l) (l+1)_(n-l) / (n-l)! B_(n-l)^(n+1)(1-sigma)
//! ```
//!
//! The generating functions of the non-central Stirling numbers are checked
//! the same way:
//!
//! ```text
//! horizontal  sum_l s_sigma(n,l) x^l = (sigma + x)_n
//! vertical    sum_n s_sigma(n,l) x^n / n! = (1-x)^(-sigma) (log 1/(1-x))^l / l!
//! double      sum_(n,l) s_sigma(n,l) y^l x^n / n! = (1-x)^(-sigma-y)
//! ```
//!
//! Each side is computed by one generic routine; instantiating it with
//! [`RatPoly`] gives the symbolic check and with rationals the spot checks.

use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::numerics::{binomial, factorial, gen_binomial, pochhammer, RatPoly, Scalar};
use crate::series::TruncatedSeries;
use crate::special::{noncentral_stirling_with, NoncentralStirlingTable, NorlundBernoulli, StirlingTable};

/// Outcome of one symbolic check; `residual` is `LHS - RHS`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityCheck {
    pub holds: bool,
    pub residual: RatPoly,
}

impl IdentityCheck {
    fn from_sides(lhs: RatPoly, rhs: RatPoly) -> Self {
        let residual = lhs - rhs;
        IdentityCheck { holds: residual.is_zero(), residual }
    }
}

fn inv_factorial(n: usize) -> BigRational {
    BigRational::new(BigInt::one(), factorial(n))
}

fn sign(k: usize) -> BigInt {
    if k % 2 == 1 {
        -BigInt::one()
    } else {
        BigInt::one()
    }
}

/// Both sides of (I).
pub fn identity_one_sides<S: Scalar>(m: usize, t: &S, x: &S) -> (S, S) {
    let nb = NorlundBernoulli::new(m);
    let one = S::one();
    let base = t.clone() - x.clone() + one.clone();
    let lhs = (pochhammer(&base, m) * nb.value(m, &(base.clone() + S::from_i64(m as i64)), &(one - x.clone()))).mul_rational(&inv_factorial(m));

    let stir = StirlingTable::new(m);
    let b = nb.values(m, &base, t);
    let x_minus_t = x.clone() - t.clone();
    let t_rising: Vec<S> = (0..=m).map(|k| pochhammer(t, k)).collect();
    let mut rhs = S::zero();
    for (j, bj) in b.iter().enumerate() {
        let mut inner = S::zero();
        for (k, tk) in t_rising.iter().enumerate() {
            if m - k < j {
                continue;
            }
            let c = sign(k) * binomial(m, k) * stir.get(m - k, j);
            if !c.is_zero() {
                inner = inner + tk.mul_bigint(&c);
            }
        }
        rhs = rhs + (bj.clone() * pochhammer(&x_minus_t, j) * inner).mul_rational(&inv_factorial(j));
    }
    (lhs, rhs)
}

/// Both sides of (II).
pub fn identity_two_sides<S: Scalar>(m: usize, t: &S, x: &S) -> (S, S) {
    let nb = NorlundBernoulli::new(m);
    let stir = StirlingTable::new(m);
    let tx = t.clone() + x.clone();
    let one_minus = S::one() - tx.clone();

    let b = nb.values(m, &tx, t);
    let mut lhs = S::zero();
    for (j, bj) in b.iter().enumerate() {
        let s = stir.get(m, j);
        if s.is_zero() {
            continue;
        }
        lhs = lhs + (bj.clone() * pochhammer(&one_minus, j)).mul_rational(&BigRational::new(s, factorial(j)));
    }
    let lhs = lhs.mul_rational(&inv_factorial(m));

    let mut rhs = S::zero();
    for j in 0..=m {
        let order = tx.clone() + S::from_i64(j as i64);
        let fj = factorial(j);
        rhs = rhs
            + (gen_binomial(t, m - j) * nb.value(j, &order, x) * pochhammer(&tx, j)).mul_rational(&BigRational::new(BigInt::one(), &fj * &fj));
    }
    (lhs, rhs)
}

/// Both sides of (III).
pub fn connection_sides<S: Scalar>(n: usize, l: usize, sigma: &S) -> (S, S) {
    assert!(l <= n, "need l <= n");
    let stir = StirlingTable::new(n);
    let lhs = noncentral_stirling_with(&stir, n, l, sigma);
    let k = n - l;
    let c = BigRational::new(sign(k) * factorial(n), factorial(l) * factorial(k));
    let rhs = NorlundBernoulli::new(k).value(k, &S::from_i64(n as i64 + 1), &(S::one() - sigma.clone())).mul_rational(&c);
    (lhs, rhs)
}

/// Symbolic check of (I) over `Q[t, x]`.
pub fn verify_identity_one(m: usize) -> IdentityCheck {
    let (l, r) = identity_one_sides(m, &RatPoly::var("t"), &RatPoly::var("x"));
    IdentityCheck::from_sides(l, r)
}

/// Symbolic check of (II) over `Q[t, x]`.
pub fn verify_identity_two(m: usize) -> IdentityCheck {
    let (l, r) = identity_two_sides(m, &RatPoly::var("t"), &RatPoly::var("x"));
    IdentityCheck::from_sides(l, r)
}

/// Symbolic check of (III) over `Q[sigma]`.
pub fn verify_connection(n: usize, l: usize) -> IdentityCheck {
    let (a, b) = connection_sides(n, l, &RatPoly::var("sigma"));
    IdentityCheck::from_sides(a, b)
}

/// `log(1/(1-x))` truncated at `x^n`.
fn log_recip_one_minus<S: Scalar>(n: usize) -> TruncatedSeries<S> {
    TruncatedSeries::new(
        (0..=n)
            .map(|k| if k == 0 { S::zero() } else { S::from_rational(&BigRational::new(BigInt::one(), BigInt::from(k))) })
            .collect(),
    )
}

/// Horizontal generating function at row `n`, over `Q[sigma, x]`.
pub fn verify_horizontal_gf(n: usize) -> IdentityCheck {
    let sigma = RatPoly::var("sigma");
    let x = RatPoly::var("x");
    let tab = NoncentralStirlingTable::new(n, &sigma);
    let mut lhs = RatPoly::zero();
    for l in (0..=n).rev() {
        lhs = lhs * x.clone() + tab.get(n, l);
    }
    IdentityCheck::from_sides(lhs, pochhammer(&(sigma + x), n))
}

/// Vertical generating function for column `l` through `x^n_max`; the
/// residual collects the coefficient mismatches as a polynomial in `x`.
pub fn verify_vertical_gf(l: usize, n_max: usize) -> IdentityCheck {
    let sigma = RatPoly::var("sigma");
    let x = RatPoly::var("x");
    let tab = NoncentralStirlingTable::new(n_max, &sigma);
    let lg = log_recip_one_minus::<RatPoly>(n_max);
    let mut rhs = lg.scale(&sigma).exp_recurrence().expect("zero constant term");
    for _ in 0..l {
        rhs = rhs.mul(&lg).expect("equal orders");
    }
    let rhs = rhs.scale(&RatPoly::constant(inv_factorial(l)));
    let (mut lhs_poly, mut rhs_poly, mut xn) = (RatPoly::zero(), RatPoly::zero(), RatPoly::one());
    for n in 0..=n_max {
        if n >= l {
            lhs_poly = lhs_poly + tab.get(n, l).mul_rational(&inv_factorial(n)) * xn.clone();
        }
        rhs_poly = rhs_poly + rhs.coeff(n).clone() * xn.clone();
        xn = xn * x.clone();
    }
    IdentityCheck::from_sides(lhs_poly, rhs_poly)
}

/// Coefficient of `x^n` in the double generating function, over `Q[sigma, y]`.
pub fn verify_double_gf(n: usize) -> IdentityCheck {
    let sigma = RatPoly::var("sigma");
    let y = RatPoly::var("y");
    let tab = NoncentralStirlingTable::new(n, &sigma);
    let rhs = log_recip_one_minus::<RatPoly>(n).scale(&(sigma + y.clone())).exp_recurrence().expect("zero constant term");
    let mut lhs = RatPoly::zero();
    for l in (0..=n).rev() {
        lhs = lhs * y.clone() + tab.get(n, l);
    }
    IdentityCheck::from_sides(lhs.mul_rational(&inv_factorial(n)), rhs.coeff(n).clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    type Q = BigRational;

    fn p(n: i64, d: i64) -> RatPoly {
        RatPoly::constant(Q::new(n.into(), d.into()))
    }

    #[test]
    fn small_cases_by_hand() {
        let t = RatPoly::var("t");
        let x = RatPoly::var("x");

        let (l, r) = identity_one_sides(0, &t, &x);
        assert_eq!((l, r), (RatPoly::one(), RatPoly::one()));
        let (l, r) = identity_one_sides(1, &t, &x);
        let want = -(t.clone() - x.clone() + RatPoly::one()) * (t.clone() + x.clone()) * p(1, 2);
        assert_eq!(l, want);
        assert_eq!(r, want);

        let (l, r) = identity_two_sides(0, &t, &x);
        assert_eq!((l, r), (RatPoly::one(), RatPoly::one()));
        let (l, r) = identity_two_sides(1, &t, &x);
        let d = t.clone() - x.clone();
        let want = d.clone() * p(1, 2) - d * (t + x) * p(1, 2);
        assert_eq!(l, want);
        assert_eq!(r, want);

        let sigma = RatPoly::var("sigma");
        assert_eq!(connection_sides(1, 0, &sigma), (sigma.clone(), sigma.clone()));
        for n in 0..4 {
            assert_eq!(connection_sides(n, n, &sigma), (RatPoly::one(), RatPoly::one()));
        }
    }

    #[test]
    fn identities_hold_symbolically() {
        for m in 0..=10 {
            let one = verify_identity_one(m);
            assert!(one.holds, "identity one, m = {m}: {}", one.residual);
            let two = verify_identity_two(m);
            assert!(two.holds, "identity two, m = {m}: {}", two.residual);
        }
        for n in 0..=10 {
            for l in 0..=n {
                let c = verify_connection(n, l);
                assert!(c.holds, "connection n = {n}, l = {l}: {}", c.residual);
            }
        }
    }

    #[test]
    fn generating_functions_hold() {
        for n in 0..=12 {
            assert!(verify_horizontal_gf(n).holds, "horizontal n = {n}");
        }
        for l in 0..=4 {
            assert!(verify_vertical_gf(l, 10).holds, "vertical l = {l}");
        }
        for n in 0..=8 {
            assert!(verify_double_gf(n).holds, "double n = {n}");
        }
    }

    #[test]
    fn perturbed_identity_leaves_a_residual() {
        let t = RatPoly::var("t");
        let x = RatPoly::var("x");
        let (l, r) = identity_one_sides(3, &t, &x);
        let bad = IdentityCheck::from_sides(l + t, r);
        assert!(!bad.holds);
        assert_eq!(bad.residual, RatPoly::var("t"));
    }

    #[test]
    fn identities_hold_at_random_rational_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        let rat = |rng: &mut ChaCha8Rng| Q::new(rng.gen_range(-40i64..40).into(), rng.gen_range(1i64..9).into());
        for _ in 0..20 {
            let t = rat(&mut rng);
            let x = rat(&mut rng);
            let m = rng.gen_range(0..=8);
            let (a, b) = identity_one_sides(m, &t, &x);
            assert_eq!(a, b, "identity one at t = {t}, x = {x}, m = {m}");
            let (a, b) = identity_two_sides(m, &t, &x);
            assert_eq!(a, b, "identity two at t = {t}, x = {x}, m = {m}");
            let n = rng.gen_range(0..=8);
            let l = rng.gen_range(0..=n);
            let (a, b) = connection_sides(n, l, &t);
            assert_eq!(a, b, "connection at sigma = {t}, n = {n}, l = {l}");
        }
    }
}
