//! Polynomials over the rationals in at most two named symbols.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::{fmt_rational, Scalar};
use crate::Error;

type Exps = [u32; 2];

/// Sparse rational polynomial. Symbols are kept sorted and only those that
/// actually occur are stored, so structural equality is value equality.
#[derive(Clone, PartialEq, Eq)]
pub struct RatPoly {
    symbols: Vec<String>,
    terms: BTreeMap<Exps, BigRational>,
}

impl RatPoly {
    pub fn constant(q: BigRational) -> Self {
        let mut terms = BTreeMap::new();
        if !q.is_zero() {
            terms.insert([0, 0], q);
        }
        RatPoly { symbols: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert([1, 0], BigRational::one());
        RatPoly {
            symbols: vec![name.to_string()],
            terms,
        }
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Nonzero terms as (exponents aligned with [`symbols`](Self::symbols), coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (&[u32; 2], &BigRational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Constant term value if the polynomial has no symbols.
    pub fn as_constant(&self) -> Option<BigRational> {
        if self.symbols.is_empty() {
            Some(self.terms.get(&[0, 0]).cloned().unwrap_or_else(BigRational::zero))
        } else {
            None
        }
    }

    pub fn degree_in(&self, symbol: &str) -> u32 {
        match self.symbols.iter().position(|s| s == symbol) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    /// Coefficient of `sym0^e0 * sym1^e1` in this polynomial's symbol order.
    pub fn coeff(&self, exps: [u32; 2]) -> BigRational {
        self.terms.get(&exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Coefficient of `symbol^k`, as a polynomial in the remaining symbol.
    pub fn coeff_of(&self, symbol: &str, k: u32) -> RatPoly {
        let idx = match self.symbols.iter().position(|s| s == symbol) {
            Some(i) => i,
            None => {
                return if k == 0 { self.clone() } else { RatPoly::zero() };
            }
        };
        let mut terms = BTreeMap::new();
        for (e, c) in &self.terms {
            if e[idx] == k {
                let mut e2 = *e;
                e2[idx] = 0;
                terms.insert(e2, c.clone());
            }
        }
        canonical(self.symbols.clone(), terms)
    }

    fn aligned(&self, symbols: &[String]) -> BTreeMap<Exps, BigRational> {
        let map: Vec<usize> = self
            .symbols
            .iter()
            .map(|s| symbols.iter().position(|t| t == s).expect("symbol in union"))
            .collect();
        self.terms
            .iter()
            .map(|(e, c)| {
                let mut ne = [0u32; 2];
                for (i, &j) in map.iter().enumerate() {
                    ne[j] = e[i];
                }
                (ne, c.clone())
            })
            .collect()
    }
}

fn union(a: &[String], b: &[String]) -> Vec<String> {
    let mut out: Vec<String> = a.to_vec();
    for s in b {
        if !out.contains(s) {
            out.push(s.clone());
        }
    }
    out.sort();
    assert!(out.len() <= 2, "RatPoly supports at most two symbols, got {:?}", out);
    out
}

/// Drop zero terms and unused symbols, sort symbols.
fn canonical(symbols: Vec<String>, terms: BTreeMap<Exps, BigRational>) -> RatPoly {
    let terms: BTreeMap<Exps, BigRational> = terms.into_iter().filter(|(_, c)| !c.is_zero()).collect();
    let used: Vec<usize> = (0..symbols.len()).filter(|&i| terms.keys().any(|e| e[i] > 0)).collect();
    let mut keep: Vec<(String, usize)> = used.iter().map(|&i| (symbols[i].clone(), i)).collect();
    keep.sort();
    if keep.len() == symbols.len() && keep.iter().enumerate().all(|(k, (_, i))| k == *i) {
        return RatPoly { symbols, terms };
    }
    let new_terms = terms
        .into_iter()
        .map(|(e, c)| {
            let mut ne = [0u32; 2];
            for (k, (_, i)) in keep.iter().enumerate() {
                ne[k] = e[*i];
            }
            (ne, c)
        })
        .collect();
    RatPoly {
        symbols: keep.into_iter().map(|(s, _)| s).collect(),
        terms: new_terms,
    }
}

impl Zero for RatPoly {
    fn zero() -> Self {
        RatPoly::constant(BigRational::zero())
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
}

impl One for RatPoly {
    fn one() -> Self {
        RatPoly::constant(BigRational::one())
    }
}

impl Add for RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: RatPoly) -> RatPoly {
        &self + &rhs
    }
}

impl<'a> Add<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn add(self, rhs: &RatPoly) -> RatPoly {
        let symbols = union(&self.symbols, &rhs.symbols);
        let mut terms = self.aligned(&symbols);
        for (e, c) in rhs.aligned(&symbols) {
            let slot = terms.entry(e).or_insert_with(BigRational::zero);
            *slot += c;
        }
        canonical(symbols, terms)
    }
}

impl Neg for RatPoly {
    type Output = RatPoly;
    fn neg(self) -> RatPoly {
        RatPoly {
            symbols: self.symbols,
            terms: self.terms.into_iter().map(|(e, c)| (e, -c)).collect(),
        }
    }
}

impl Sub for RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: RatPoly) -> RatPoly {
        &self + &(-rhs)
    }
}

impl<'a> Sub<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn sub(self, rhs: &RatPoly) -> RatPoly {
        self + &(-rhs.clone())
    }
}

impl Mul for RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: RatPoly) -> RatPoly {
        &self * &rhs
    }
}

impl<'a> Mul<&'a RatPoly> for &'a RatPoly {
    type Output = RatPoly;
    fn mul(self, rhs: &RatPoly) -> RatPoly {
        if self.terms.is_empty() || rhs.terms.is_empty() {
            return RatPoly::zero();
        }
        let symbols = union(&self.symbols, &rhs.symbols);
        let a = self.aligned(&symbols);
        let b = rhs.aligned(&symbols);
        let mut terms: BTreeMap<Exps, BigRational> = BTreeMap::new();
        for (ea, ca) in &a {
            for (eb, cb) in &b {
                let e = [ea[0] + eb[0], ea[1] + eb[1]];
                let slot = terms.entry(e).or_insert_with(BigRational::zero);
                *slot += ca * cb;
            }
        }
        canonical(symbols, terms)
    }
}

impl Scalar for RatPoly {
    fn from_rational(q: &BigRational) -> Self {
        RatPoly::constant(q.clone())
    }
    fn mul_rational(&self, q: &BigRational) -> Self {
        if q.is_zero() {
            return RatPoly::zero();
        }
        RatPoly {
            symbols: self.symbols.clone(),
            terms: self.terms.iter().map(|(e, c)| (*e, c * q)).collect(),
        }
    }
    fn div_int(&self, n: i64) -> Self {
        self.mul_rational(&BigRational::new(BigInt::one(), BigInt::from(n)))
    }
}

/// Substitute values for every symbol of `p`. Nested Horner in the first
/// symbol, then the second.
pub fn poly_eval<S: Scalar>(p: &RatPoly, point: &BTreeMap<&str, S>) -> Result<S, Error> {
    let mut vals: Vec<S> = Vec::with_capacity(p.symbols.len());
    for s in &p.symbols {
        match point.get(s.as_str()) {
            Some(v) => vals.push(v.clone()),
            None => return Err(Error::UnboundSymbol(s.clone())),
        }
    }
    if p.terms.is_empty() {
        return Ok(S::zero());
    }
    if vals.is_empty() {
        return Ok(S::from_rational(&p.coeff([0, 0])));
    }
    let d0 = p.terms.keys().map(|e| e[0]).max().unwrap_or(0) as usize;
    let d1 = p.terms.keys().map(|e| e[1]).max().unwrap_or(0) as usize;
    // rows[i][j] = coefficient of x0^i x1^j
    let mut rows: Vec<Vec<Option<&BigRational>>> = vec![vec![None; d1 + 1]; d0 + 1];
    for (e, c) in &p.terms {
        rows[e[0] as usize][e[1] as usize] = Some(c);
    }
    let horner1 = |row: &Vec<Option<&BigRational>>| -> S {
        let mut acc = S::zero();
        for c in row.iter().rev() {
            if vals.len() > 1 {
                acc = acc * vals[1].clone();
            }
            if let Some(c) = c {
                acc = acc + S::from_rational(c);
            }
        }
        acc
    };
    let mut acc = S::zero();
    for row in rows.iter().rev() {
        acc = acc * vals[0].clone() + horner1(row);
    }
    Ok(acc)
}

impl fmt::Display for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let mut mono = String::new();
            for (i, s) in self.symbols.iter().enumerate() {
                if e[i] == 0 {
                    continue;
                }
                if !mono.is_empty() {
                    mono.push('*');
                }
                if e[i] == 1 {
                    mono.push_str(s);
                } else {
                    mono.push_str(&format!("{}^{}", s, e[i]));
                }
            }
            let neg = c.is_negative();
            let mag = c.abs();
            let body = if mono.is_empty() {
                fmt_rational(&mag)
            } else if mag.is_one() {
                mono
            } else {
                format!("{}*{}", fmt_rational(&mag), mono)
            };
            if first {
                write!(f, "{}{}", if neg { "-" } else { "" }, body)?;
            } else {
                write!(f, " {} {}", if neg { "-" } else { "+" }, body)?;
            }
            first = false;
        }
        Ok(())
    }
}

impl fmt::Debug for RatPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatPoly({})", self)
    }
}
