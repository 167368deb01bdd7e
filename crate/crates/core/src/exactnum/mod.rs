//! Exact arithmetic in cyclotomic fields ℚ(ζ_N).
//!
//! A [`CycNumber`] is stored in the power basis 1, ζ_N, …, ζ_N^{φ(N)−1} of its
//! minimal field ℚ(ζ_N), i.e. reduced modulo the cyclotomic polynomial Φ_N and with
//! N shrunk as far as the element allows. Two values are equal iff their stored
//! representations are equal. Binary operations work in ℚ(ζ_lcm) and shrink the
//! result again.

mod cyclotomic;
mod root_sum;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

pub use cyclotomic::cyclotomic_polynomial;
pub use root_sum::RootSum;

use crate::arith::{euler_phi, gcd, lcm, mod_inv, modulo, prime_divisors};
use crate::error::{Error, Result};

pub type Rational = num_rational::BigRational;

/// Rational `n/d`.
pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Parses "n", "-n" or "n/d".
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Fractional part in [0, 1).
pub fn frac(x: &Rational) -> Rational {
    x - x.floor()
}

/// A root of unity e(num/den) with 0 ≤ num < den and gcd(num, den) = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct RootOfUnity {
    num: u64,
    den: u64,
}

impl RootOfUnity {
    pub fn one() -> Self {
        RootOfUnity { num: 0, den: 1 }
    }

    /// e(a/b).
    pub fn e(a: i64, b: u64) -> Self {
        assert!(b > 0, "root of unity with zero denominator");
        let num = modulo(a, b);
        let g = gcd(num, b);
        RootOfUnity { num: num / g, den: b / g }
    }

    /// e(x) for a rational x.
    pub fn from_rational(x: &Rational) -> Self {
        let f = frac(x);
        let num = f.numer().to_i64().expect("root of unity numerator overflow");
        let den = f.denom().to_u64().expect("root of unity denominator overflow");
        Self::e(num, den)
    }

    pub fn numerator(&self) -> u64 {
        self.num
    }

    /// Multiplicative order.
    pub fn order(&self) -> u64 {
        self.den
    }

    pub fn mul(&self, other: &Self) -> Self {
        let d = lcm(self.den, other.den);
        Self::e((self.num * (d / self.den) + other.num * (d / other.den)) as i64, d)
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::e((self.num as i128 * k as i128).rem_euclid(self.den as i128) as i64, self.den)
    }

    pub fn conj(&self) -> Self {
        Self::e(-(self.num as i64), self.den)
    }

    /// Exponent of this root as a power of ζ_n (requires order | n).
    pub fn exponent_in(&self, n: u64) -> u64 {
        assert!(n.is_multiple_of(self.den), "e({}/{}) is not an {n}-th root of unity", self.num, self.den);
        self.num * (n / self.den)
    }

    pub fn to_cyc(&self) -> CycNumber {
        CycNumber::root_of_unity(self.num as i64, self.den)
    }
}

/// Exact element of the cyclotomic field ℚ(ζ_N).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycNumber {
    conductor: u64,
    // canonical: exponents < φ(conductor), nonzero coefficients, ascending
    terms: Vec<(u64, Rational)>,
}

impl CycNumber {
    pub fn zero() -> Self {
        CycNumber { conductor: 1, terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_rational(Rational::one())
    }

    pub fn from_rational(r: Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycNumber { conductor: 1, terms: vec![(0, r)] }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(int(n))
    }

    /// e(a/b) = exp(2πi·a/b).
    pub fn root_of_unity(a: i64, b: u64) -> Self {
        assert!(b >= 1, "root_of_unity requires b >= 1");
        let mut dense = vec![Rational::zero(); b as usize];
        dense[modulo(a, b) as usize] = Rational::one();
        Self::from_dense(b, dense)
    }

    /// ζ_n^e.
    pub fn zeta(n: u64, e: i64) -> Self {
        Self::root_of_unity(e, n)
    }

    /// i = ζ_4.
    pub fn i() -> Self {
        Self::zeta(4, 1)
    }

    /// Builds Σ coeffs[e] ζ_n^e from a dense vector of any length (exponents taken mod n).
    pub fn from_dense(n: u64, coeffs: Vec<Rational>) -> Self {
        let reduced = cyclotomic::reduce_dense(n, coeffs);
        Self::from_reduced(n, reduced).minimized()
    }

    /// Builds Σ c·ζ_n^e from (exponent, coefficient) pairs, exponents taken mod n.
    pub fn from_terms(n: u64, terms: &[(i64, Rational)]) -> Self {
        let mut dense = vec![Rational::zero(); n as usize];
        for (e, c) in terms {
            dense[modulo(*e, n) as usize] += c;
        }
        Self::from_dense(n, dense)
    }

    fn from_reduced(n: u64, reduced: Vec<Rational>) -> Self {
        let terms: Vec<_> = reduced
            .into_iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(e, c)| (e as u64, c))
            .collect();
        if terms.is_empty() {
            return Self::zero();
        }
        CycNumber { conductor: n, terms }
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    /// Canonical (exponent, coefficient) pairs in the power basis of ℚ(ζ_conductor).
    pub fn terms(&self) -> &[(u64, Rational)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.conductor == 1 && self.terms.len() == 1 && self.terms[0].1.is_one()
    }

    pub fn as_rational(&self) -> Option<Rational> {
        match (self.conductor, self.terms.as_slice()) {
            (_, []) => Some(Rational::zero()),
            (1, [(0, c)]) => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    /// Dense representation lifted into ℚ(ζ_n), n a multiple of the conductor,
    /// not yet reduced modulo Φ_n.
    fn lifted_dense(&self, n: u64) -> Vec<Rational> {
        debug_assert!(n.is_multiple_of(self.conductor));
        let step = n / self.conductor;
        let mut dense = vec![Rational::zero(); n as usize];
        for (e, c) in &self.terms {
            dense[(e * step) as usize] += c;
        }
        dense
    }

    /// Canonical coefficients in ℚ(ζ_n) for a multiple n of the conductor.
    pub fn coefficients_in(&self, n: u64) -> Vec<Rational> {
        assert!(n.is_multiple_of(self.conductor), "conductor {} does not divide {n}", self.conductor);
        cyclotomic::reduce_dense(n, self.lifted_dense(n))
    }

    /// Shrinks the conductor to the smallest N' with the element in ℚ(ζ_N').
    fn minimized(mut self) -> Self {
        if self.terms.is_empty() {
            return Self::zero();
        }
        'outer: loop {
            if self.conductor == 1 {
                return self;
            }
            for p in prime_divisors(self.conductor) {
                if let Some(smaller) = self.try_shrink(p) {
                    self = smaller;
                    continue 'outer;
                }
            }
            return self;
        }
    }

    fn try_shrink(&self, p: u64) -> Option<Self> {
        let n = self.conductor;
        let m = n / p;
        if m.is_multiple_of(p) {
            // ℚ(ζ_m) ⊂ ℚ(ζ_n) is spanned by the basis powers divisible by p
            if self.terms.iter().all(|(e, _)| e % p == 0) {
                let terms = self.terms.iter().map(|(e, c)| (e / p, c.clone())).collect();
                return Some(CycNumber { conductor: m, terms });
            }
            return None;
        }
        // p ∥ n: average over Gal(ℚ(ζ_n)/ℚ(ζ_m)) ≅ (ℤ/p)^*, then test fixedness
        let p_inv = if m == 1 { 0 } else { mod_inv(p as i64, m).unwrap() };
        let m_inv = mod_inv(m as i64, p).unwrap_or(0);
        let mut dense = vec![Rational::zero(); m as usize];
        let weight_fixed = int(p as i64 - 1);
        let weight_moved = int(-1);
        for (e, c) in &self.terms {
            let a = if m == 1 { 0 } else { (e % m) * p_inv % m };
            let b = (e % p) * m_inv % p;
            let w = if b == 0 { &weight_fixed } else { &weight_moved };
            dense[a as usize] += c * w;
        }
        let scale = int(p as i64 - 1);
        for c in dense.iter_mut() {
            *c /= &scale;
        }
        let candidate = Self::from_reduced(m, cyclotomic::reduce_dense(m, dense));
        if p == 2 {
            return Some(candidate);
        }
        let back = Self::from_reduced(n, cyclotomic::reduce_dense(n, candidate.lifted_dense(n)));
        if back.terms == self.terms {
            Some(candidate)
        } else {
            None
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let n = lcm(self.conductor, other.conductor);
        let mut dense = self.lifted_dense(n);
        let step = n / other.conductor;
        for (e, c) in &other.terms {
            dense[(e * step) as usize] += c;
        }
        Self::from_dense(n, dense)
    }

    /// Sum of many values with a single reduction.
    pub fn sum_all<'a>(items: impl IntoIterator<Item = &'a CycNumber>) -> Self {
        let items: Vec<&CycNumber> = items.into_iter().filter(|c| !c.is_zero()).collect();
        match items.len() {
            0 => return Self::zero(),
            1 => return items[0].clone(),
            _ => {}
        }
        let n = items.iter().fold(1, |acc, c| lcm(acc, c.conductor));
        let mut dense = vec![Rational::zero(); n as usize];
        for c in items {
            let step = n / c.conductor;
            for (e, v) in &c.terms {
                dense[(e * step) as usize] += v;
            }
        }
        Self::from_dense(n, dense)
    }

    pub fn neg(&self) -> Self {
        CycNumber {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, r: &Rational) -> Self {
        if r.is_zero() {
            return Self::zero();
        }
        CycNumber {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(e, c)| (*e, c * r)).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(r) = self.as_rational() {
            return other.scale(&r);
        }
        if let Some(r) = other.as_rational() {
            return self.scale(&r);
        }
        let n = lcm(self.conductor, other.conductor);
        let (sa, sb) = (n / self.conductor, n / other.conductor);
        let mut dense = vec![Rational::zero(); n as usize];
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ((ea * sa + eb * sb) % n) as usize;
                dense[e] += ca * cb;
            }
        }
        Self::from_dense(n, dense)
    }

    /// Multiplication by a root of unity.
    pub fn mul_root(&self, z: &RootOfUnity) -> Self {
        if z.num == 0 || self.is_zero() {
            return self.clone();
        }
        let n = lcm(self.conductor, z.den);
        let step = n / self.conductor;
        let shift = z.exponent_in(n);
        let mut dense = vec![Rational::zero(); n as usize];
        for (e, c) in &self.terms {
            dense[((e * step + shift) % n) as usize] += c;
        }
        Self::from_dense(n, dense)
    }

    pub fn pow(&self, mut k: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = &base * &base;
            k >>= 1;
        }
        acc
    }

    /// Image under ζ ↦ ζ^{-1}, i.e. complex conjugation.
    pub fn conjugate(&self) -> Self {
        self.galois(-1)
    }

    /// Image under the automorphism ζ_N ↦ ζ_N^t (gcd(t, N) = 1).
    pub fn galois(&self, t: i64) -> Self {
        if self.conductor == 1 {
            return self.clone();
        }
        let n = self.conductor;
        let t = modulo(t, n);
        assert_eq!(gcd(t, n), 1, "ζ ↦ ζ^{t} is not an automorphism of ℚ(ζ_{n})");
        let mut dense = vec![Rational::zero(); n as usize];
        for (e, c) in &self.terms {
            dense[(e * t % n) as usize] += c;
        }
        Self::from_reduced(n, cyclotomic::reduce_dense(n, dense))
    }

    /// If the value equals c·ζ_N^e for a rational c, returns (c, e) with the
    /// least such e in [0, N) after allowing a sign change on c for even N.
    pub fn as_monomial(&self) -> Option<(Rational, u64)> {
        if self.is_zero() {
            return None;
        }
        if let Some(r) = self.as_rational() {
            return Some((r, 0));
        }
        let n = self.conductor;
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return Some(normalize_monomial(c.clone(), *e, n));
        }
        for e in 0..n {
            let candidate = self.mul_root(&RootOfUnity::e(-(e as i64), n));
            if let Some(c) = candidate.as_rational() {
                return Some(normalize_monomial(c, e, n));
            }
        }
        None
    }

    pub fn invert(&self) -> Result<Self> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if let Some(r) = self.as_rational() {
            return Ok(Self::from_rational(r.recip()));
        }
        if self.terms.len() == 1 {
            let (e, c) = &self.terms[0];
            return Ok(Self::from_rational(c.recip()).mul_root(&RootOfUnity::e(-(*e as i64), self.conductor)));
        }
        Ok(self.invert_by_elimination())
    }

    /// Solves x·y = 1 as a linear system over ℚ in the power basis.
    fn invert_by_elimination(&self) -> Self {
        let n = self.conductor;
        let d = euler_phi(n) as usize;
        // column j holds x·ζ^j
        let mut mat: Vec<Vec<Rational>> = vec![vec![Rational::zero(); d + 1]; d];
        for j in 0..d {
            let mut dense = vec![Rational::zero(); n as usize];
            for (e, c) in &self.terms {
                dense[((e + j as u64) % n) as usize] += c;
            }
            let col = cyclotomic::reduce_dense(n, dense);
            for (i, v) in col.into_iter().enumerate() {
                mat[i][j] = v;
            }
        }
        mat[0][d] = Rational::one();
        for col in 0..d {
            let pivot = (col..d).find(|&r| !mat[r][col].is_zero()).expect("nonzero field element is invertible");
            mat.swap(col, pivot);
            let inv = mat[col][col].recip();
            for v in mat[col].iter_mut() {
                *v *= &inv;
            }
            let pivot_row = mat[col].clone();
            for (r, row) in mat.iter_mut().enumerate() {
                if r == col || row[col].is_zero() {
                    continue;
                }
                let f = row[col].clone();
                for (v, pv) in row.iter_mut().zip(pivot_row.iter()) {
                    *v -= &f * pv;
                }
            }
        }
        let sol: Vec<Rational> = mat.into_iter().map(|row| row[d].clone()).collect();
        Self::from_dense(n, sol)
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        Ok(self.mul(&other.invert()?))
    }

    /// Numerical embedding ζ_N ↦ exp(2πi/N). For display and diagnostics only.
    pub fn to_complex(&self) -> Complex64 {
        let n = self.conductor as f64;
        self.terms.iter().fold(Complex64::new(0.0, 0.0), |acc, (e, c)| {
            let angle = 2.0 * std::f64::consts::PI * (*e as f64) / n;
            acc + Complex64::from_polar(c.to_f64().unwrap_or(f64::NAN), angle)
        })
    }
}

fn normalize_monomial(c: Rational, e: u64, n: u64) -> (Rational, u64) {
    if n.is_multiple_of(2) && e >= n / 2 {
        (-c, e - n / 2)
    } else {
        (c, e)
    }
}

impl Default for CycNumber {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<Rational> for CycNumber {
    fn from(r: Rational) -> Self {
        Self::from_rational(r)
    }
}

impl From<i64> for CycNumber {
    fn from(n: i64) -> Self {
        Self::from_int(n)
    }
}

impl From<RootOfUnity> for CycNumber {
    fn from(z: RootOfUnity) -> Self {
        z.to_cyc()
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $inner:ident) => {
        impl $trait<&CycNumber> for &CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                CycNumber::$inner(self, rhs)
            }
        }
        impl $trait<CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: CycNumber) -> CycNumber {
                CycNumber::$inner(&self, &rhs)
            }
        }
        impl $trait<&CycNumber> for CycNumber {
            type Output = CycNumber;
            fn $method(self, rhs: &CycNumber) -> CycNumber {
                CycNumber::$inner(&self, rhs)
            }
        }
    };
}

forward_binop!(Add, add, add);
forward_binop!(Sub, sub, sub);
forward_binop!(Mul, mul, mul);

impl Neg for CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber::neg(&self)
    }
}

impl Neg for &CycNumber {
    type Output = CycNumber;
    fn neg(self) -> CycNumber {
        CycNumber::neg(self)
    }
}

impl std::iter::Sum for CycNumber {
    fn sum<I: Iterator<Item = CycNumber>>(iter: I) -> Self {
        let items: Vec<CycNumber> = iter.collect();
        CycNumber::sum_all(&items)
    }
}

fn fmt_coeff_times(f: &mut fmt::Formatter<'_>, c: &Rational, atom: &str, first: bool) -> fmt::Result {
    let neg = c.is_negative();
    let abs = c.abs();
    match (first, neg) {
        (true, true) => write!(f, "-")?,
        (true, false) => {}
        (false, true) => write!(f, " - ")?,
        (false, false) => write!(f, " + ")?,
    }
    if atom.is_empty() {
        write!(f, "{abs}")
    } else if abs.is_one() {
        write!(f, "{atom}")
    } else {
        write!(f, "{abs}*{atom}")
    }
}

impl fmt::Display for CycNumber {
    /// Prints c*zetaN^e for monomials, otherwise the canonical polynomial in zetaN.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let n = self.conductor;
        let atom = |e: u64| match e {
            0 => String::new(),
            1 => format!("zeta{n}"),
            _ => format!("zeta{n}^{e}"),
        };
        if let Some((c, e)) = self.as_monomial() {
            // odd N: absorb a negative sign by passing to ζ_2N
            if c.is_negative() && e != 0 && n % 2 == 1 {
                let (m, e) = (2 * n, (2 * e + n) % (2 * n));
                let a = if e == 1 { format!("zeta{m}") } else { format!("zeta{m}^{e}") };
                return fmt_coeff_times(f, &-c, &a, true);
            }
            return fmt_coeff_times(f, &c, &atom(e), true);
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            fmt_coeff_times(f, c, &atom(*e), i == 0)?;
        }
        Ok(())
    }
}

impl fmt::Debug for CycNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycNumber({self})")
    }
}

impl PartialOrd for RootOfUnity {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for RootOfUnity {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

/// JSON form: {"conductor": N, "terms": [[e, "num/den"], ...]}.
#[derive(Serialize, Deserialize)]
struct CycJson {
    conductor: u64,
    terms: Vec<(i64, String)>,
}

impl Serialize for CycNumber {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CycJson {
            conductor: self.conductor,
            terms: self.terms.iter().map(|(e, c)| (*e as i64, c.to_string())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CycNumber {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CycJson::deserialize(d)?;
        if raw.conductor == 0 {
            return Err(serde::de::Error::custom("conductor must be positive"));
        }
        let terms = raw
            .terms
            .iter()
            .map(|(e, c)| parse_rational(c).map(|c| (*e, c)))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(CycNumber::from_terms(raw.conductor, &terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: u64, e: i64) -> CycNumber {
        CycNumber::zeta(n, e)
    }

    #[test]
    fn roots_of_unity_basics() {
        assert_eq!(CycNumber::root_of_unity(1, 2), CycNumber::from_int(-1));
        assert_eq!(CycNumber::root_of_unity(1, 1), CycNumber::one());
        let x = CycNumber::root_of_unity(7, 20);
        assert_eq!(x.conductor(), 20);
        assert!(x.pow(20).is_one());
        assert_eq!(x.pow(10), CycNumber::from_int(-1));
        // e(2/4) = -1 has conductor 1
        assert_eq!(CycNumber::root_of_unity(2, 4).conductor(), 1);
        // e(3/6) = -1, e(1/6) lives in ℚ(ζ_3)
        assert_eq!(CycNumber::root_of_unity(1, 6).conductor(), 3);
    }

    #[test]
    fn vanishing_sums() {
        let s: CycNumber = (0..5).map(|e| z(5, e)).sum();
        assert!(s.is_zero());
        assert!((z(4, 1) + z(4, 3)).is_zero());
        let x = z(20, 3) + CycNumber::from_int(2);
        assert_eq!(&x + &CycNumber::zero(), x);
    }

    #[test]
    fn multiplication_and_inverse() {
        assert_eq!(z(8, 1) * z(8, 1), z(4, 1));
        let x = CycNumber::from_int(-2) * z(20, 4);
        let inv = x.invert().unwrap();
        assert_eq!(inv, CycNumber::from_rational(rat(-1, 2)) * z(20, 16));
        assert_eq!(CycNumber::from_int(2).invert().unwrap(), CycNumber::from_rational(rat(1, 2)));
        assert_eq!(z(12, 5).invert().unwrap(), z(12, 7));
        assert_eq!(CycNumber::zero().invert(), Err(Error::DivisionByZero));
        // non-monomial inverse
        let y = CycNumber::one() + z(5, 1) + z(5, 1) * z(5, 1) * CycNumber::from_int(3);
        assert!((y.invert().unwrap() * &y).is_one());
    }

    #[test]
    fn conjugation() {
        assert_eq!(CycNumber::i().conjugate(), -CycNumber::i());
        let r = CycNumber::from_rational(rat(3, 7));
        assert_eq!(r.conjugate(), r);
    }

    #[test]
    fn minimal_conductor_after_mixing() {
        // ζ_12^4 = ζ_3
        assert_eq!(z(12, 4).conductor(), 3);
        // ζ_20^5 = i
        assert_eq!(z(20, 5), CycNumber::i());
        // √5 = ζ5 - ζ5^2 - ζ5^3 + ζ5^4, expressed via ζ_20 terms still shrinks to 5
        let s = z(20, 4) - z(20, 8) - z(20, 12) + z(20, 16);
        assert_eq!(s.conductor(), 5);
        assert_eq!(&s * &s, CycNumber::from_int(5));
        // i·√5 lives in ℚ(ζ_20)
        assert_eq!((s * CycNumber::i()).conductor(), 20);
    }

    #[test]
    fn complex_embedding() {
        assert_eq!(CycNumber::zero().to_complex(), Complex64::new(0.0, 0.0));
        let i = CycNumber::i().to_complex();
        assert!((i - Complex64::new(0.0, 1.0)).norm() < 1e-12);
        let x = (CycNumber::from_int(-2) * z(20, 4)).to_complex();
        let expect = Complex64::from_polar(-2.0, 2.0 * std::f64::consts::PI / 5.0);
        assert!((x - expect).norm() < 1e-12);
    }

    #[test]
    fn display_prefers_monomials() {
        assert_eq!((CycNumber::from_int(2) * z(20, 6)).to_string(), "2*zeta10^3");
        assert_eq!((CycNumber::from_int(-1) * z(12, 1)).to_string(), "-zeta12");
        assert_eq!((CycNumber::from_int(-4) * z(20, 1)).to_string(), "-4*zeta20");
        assert_eq!((CycNumber::from_int(52) * CycNumber::i()).to_string(), "52*zeta4");
        assert_eq!(CycNumber::from_rational(rat(-1, 2)).to_string(), "-1/2");
    }

    #[test]
    fn json_round_trip_and_canonicalization() {
        let x = CycNumber::from_int(-2) * z(20, 9);
        let s = serde_json::to_string(&x).unwrap();
        let back: CycNumber = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        // non-canonical input is canonicalized
        let raw = r#"{"conductor": 4, "terms": [[1, "1"], [3, "1"], [0, "1/2"]]}"#;
        let y: CycNumber = serde_json::from_str(raw).unwrap();
        assert_eq!(y, CycNumber::from_rational(rat(1, 2)));
    }

    #[test]
    fn root_of_unity_type() {
        let a = RootOfUnity::e(7, 20);
        assert_eq!(a.order(), 20);
        assert_eq!(a.pow(20), RootOfUnity::one());
        assert_eq!(a.mul(&a.conj()), RootOfUnity::one());
        assert_eq!(RootOfUnity::from_rational(&rat(-1, 4)), RootOfUnity::e(3, 4));
        assert_eq!(a.to_cyc(), z(20, 7));
    }
}
