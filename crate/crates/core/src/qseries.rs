//! Truncated q-expansions with rational exponents and cyclotomic coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{gcd, lcm};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::exactnum::{int, parse_rational, CycNumber, Rational};

/// Σ c(n) qⁿ over n ∈ (1/D)ℤ, known exactly for all n < precision.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    denominator: u64,
    // key k stands for the exponent k/denominator
    terms: BTreeMap<i64, CycNumber>,
    precision: Rational,
}

fn to_i64(x: &BigInt) -> i64 {
    x.to_i64().expect("exponent numerator out of range")
}

fn to_u64(x: &BigInt) -> u64 {
    x.to_u64().expect("exponent denominator out of range")
}

impl QSeries {
    /// The zero series known up to `precision`.
    pub fn zero(precision: Rational) -> Self {
        QSeries { denominator: 1, terms: BTreeMap::new(), precision }
    }

    pub fn one(precision: Rational) -> Self {
        Self::monomial(CycNumber::one(), Rational::zero(), precision)
    }

    pub fn monomial(c: CycNumber, exponent: Rational, precision: Rational) -> Self {
        Self::from_terms(vec![(exponent, c)], precision)
    }

    /// Builds a series from (exponent, coefficient) pairs; repeated exponents are summed
    /// and terms at or beyond the precision are dropped.
    pub fn from_terms(terms: impl IntoIterator<Item = (Rational, CycNumber)>, precision: Rational) -> Self {
        let terms: Vec<_> = terms.into_iter().filter(|(e, _)| *e < precision).collect();
        let d = terms.iter().fold(1u64, |acc, (e, _)| lcm(acc, to_u64(e.denom())));
        let mut groups: BTreeMap<i64, Vec<CycNumber>> = BTreeMap::new();
        for (e, c) in terms {
            let k = to_i64(&(e * int(d as i64)).to_integer());
            groups.entry(k).or_default().push(c);
        }
        let map = groups.into_iter().map(|(k, cs)| (k, CycNumber::sum_all(&cs))).collect();
        Self::normalized(d, map, precision)
    }

    /// Σ c_i·f_i, reducing each coefficient once; the precision is the smallest one.
    pub fn linear_combination<'a>(parts: impl IntoIterator<Item = (&'a QSeries, CycNumber)>) -> Self {
        let mut precision: Option<Rational> = None;
        let mut terms = Vec::new();
        for (s, c) in parts {
            precision = Some(match precision {
                Some(p) => p.min(s.precision.clone()),
                None => s.precision.clone(),
            });
            if c.is_zero() {
                continue;
            }
            terms.extend(s.iter().map(|(e, v)| (e, v.mul(&c))));
        }
        Self::from_terms(terms, precision.unwrap_or_else(Rational::zero))
    }

    /// Integer exponents and integer coefficients.
    pub fn from_int_terms(terms: &[(i64, i64)], precision: i64) -> Self {
        Self::from_terms(terms.iter().map(|&(e, c)| (int(e), CycNumber::from_int(c))), int(precision))
    }

    fn normalized(d: u64, mut map: BTreeMap<i64, CycNumber>, precision: Rational) -> Self {
        map.retain(|_, c| !c.is_zero());
        let g = map.keys().fold(d, |acc, &k| gcd(acc, k.unsigned_abs()));
        let (d, map) = if g > 1 {
            (d / g, map.into_iter().map(|(k, c)| (k / g as i64, c)).collect())
        } else {
            (d, map)
        };
        QSeries { denominator: d, terms: map, precision }
    }

    pub fn denominator(&self) -> u64 {
        self.denominator
    }

    pub fn precision(&self) -> &Rational {
        &self.precision
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    fn exponent(&self, k: i64) -> Rational {
        Rational::new(BigInt::from(k), BigInt::from(self.denominator))
    }

    /// Nonzero terms in increasing exponent order.
    pub fn iter(&self) -> impl Iterator<Item = (Rational, &CycNumber)> + '_ {
        self.terms.iter().map(|(&k, c)| (self.exponent(k), c))
    }

    pub fn terms(&self) -> Vec<(Rational, CycNumber)> {
        self.iter().map(|(e, c)| (e, c.clone())).collect()
    }

    /// Smallest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<Rational> {
        self.terms.keys().next().map(|&k| self.exponent(k))
    }

    /// Lower bound for the exponents of the unknown-or-nonzero part: the valuation, or
    /// the precision for a series known to vanish.
    fn effective_valuation(&self) -> Rational {
        self.valuation().unwrap_or_else(|| self.precision.clone())
    }

    /// Exact coefficient of qⁿ; an error when n is at or beyond the precision.
    pub fn coefficient(&self, n: &Rational) -> Result<CycNumber> {
        if *n >= self.precision {
            return Err(Error::shortfall(n.clone(), self.precision.clone()));
        }
        let scaled = n * int(self.denominator as i64);
        if !scaled.is_integer() {
            return Ok(CycNumber::zero());
        }
        Ok(self.terms.get(&to_i64(&scaled.to_integer())).cloned().unwrap_or_default())
    }

    pub fn coefficient_int(&self, n: i64) -> Result<CycNumber> {
        self.coefficient(&int(n))
    }

    /// The same series with a lower precision.
    pub fn truncate(&self, precision: &Rational) -> Self {
        let p = precision.min(&self.precision).clone();
        let map = self
            .terms
            .iter()
            .filter(|(&k, _)| self.exponent(k) < p)
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        Self::normalized(self.denominator, map, p)
    }

    fn rekeyed(&self, d: u64) -> BTreeMap<i64, CycNumber> {
        let f = (d / self.denominator) as i64;
        self.terms.iter().map(|(&k, c)| (k * f, c.clone())).collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        let d = lcm(self.denominator, other.denominator);
        let precision = self.precision.clone().min(other.precision.clone());
        let mut map = self.rekeyed(d);
        let f = (d / other.denominator) as i64;
        for (&k, c) in &other.terms {
            let slot = map.entry(k * f).or_insert_with(CycNumber::zero);
            *slot = slot.add(c);
        }
        let p = precision.clone();
        map.retain(|&k, _| Rational::new(k.into(), (d as i64).into()) < p);
        Self::normalized(d, map, precision)
    }

    pub fn neg(&self) -> Self {
        QSeries {
            denominator: self.denominator,
            terms: self.terms.iter().map(|(&k, c)| (k, c.neg())).collect(),
            precision: self.precision.clone(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &CycNumber) -> Self {
        let map = self.terms.iter().map(|(&k, x)| (k, x.mul(c))).collect();
        Self::normalized(self.denominator, map, self.precision.clone())
    }

    pub fn scale_rational(&self, r: &Rational) -> Self {
        self.scale(&CycNumber::from_rational(r.clone()))
    }

    /// Cauchy product; precision min(P_f + v(g), P_g + v(f)).
    pub fn mul(&self, other: &Self) -> Self {
        let precision = (self.precision.clone() + other.effective_valuation())
            .min(other.precision.clone() + self.effective_valuation());
        let d = lcm(self.denominator, other.denominator);
        let a = self.rekeyed(d);
        let b = other.rekeyed(d);
        let bound = &precision * int(d as i64);
        let mut map: BTreeMap<i64, CycNumber> = BTreeMap::new();
        for (ka, ca) in &a {
            for (kb, cb) in &b {
                let k = ka + kb;
                if int(k) >= bound {
                    break;
                }
                let slot = map.entry(k).or_insert_with(CycNumber::zero);
                *slot = slot.add(&ca.mul(cb));
            }
        }
        Self::normalized(d, map, precision)
    }

    /// Substitution τ ↦ mτ.
    pub fn scale_tau(&self, m: u64) -> Self {
        assert!(m >= 1);
        self.substitute(&int(m as i64))
    }

    /// Substitution q ↦ q^r for a positive rational r.
    pub fn substitute(&self, r: &Rational) -> Self {
        assert!(r.is_positive(), "substitution factor must be positive");
        let terms = self.iter().map(|(e, c)| (e * r, c.clone())).collect::<Vec<_>>();
        Self::from_terms(terms, &self.precision * r)
    }

    /// Multiplication by q^a.
    pub fn shift(&self, a: &Rational) -> Self {
        let terms = self.iter().map(|(e, c)| (e + a, c.clone())).collect::<Vec<_>>();
        Self::from_terms(terms, &self.precision + a)
    }

    /// Σ c(n)qⁿ ↦ Σ c(pn)qⁿ; requires integer exponents.
    pub fn u_p(&self, p: u64) -> Result<Self> {
        if self.denominator != 1 {
            return Err(Error::invalid(format!(
                "U_{p} needs integer exponents, series has denominator {}",
                self.denominator
            )));
        }
        let p = p as i64;
        let map = self
            .terms
            .iter()
            .filter(|(&k, _)| k.is_multiple_of(&p))
            .map(|(&k, c)| (k / p, c.clone()))
            .collect();
        Ok(Self::normalized(1, map, &self.precision / int(p)))
    }

    /// Keeps only the terms whose exponent satisfies `keep`.
    pub fn filter(&self, keep: impl Fn(&Rational) -> bool) -> Self {
        let map = self
            .terms
            .iter()
            .filter(|(&k, _)| keep(&self.exponent(k)))
            .map(|(&k, c)| (k, c.clone()))
            .collect();
        Self::normalized(self.denominator, map, self.precision.clone())
    }

    /// Applies a coefficient map termwise.
    pub fn map_coefficients(&self, f: impl Fn(&Rational, &CycNumber) -> CycNumber) -> Self {
        let map = self.terms.iter().map(|(&k, c)| (k, f(&self.exponent(k), c))).collect();
        Self::normalized(self.denominator, map, self.precision.clone())
    }

    /// ϑ = Σ_{r∈ℤ} q^{r²}.
    pub fn theta(precision: &Rational) -> Self {
        Self::theta_with(precision, |_| CycNumber::one())
    }

    /// ϑ_χ = Σ_{r∈ℤ} χ(r) q^{r²}.
    pub fn theta_twisted(chi: &DirichletCharacter, precision: &Rational) -> Self {
        Self::theta_with(precision, |r| chi.evaluate(r))
    }

    fn theta_with(precision: &Rational, weight: impl Fn(i64) -> CycNumber) -> Self {
        let mut terms = Vec::new();
        let mut r = 0i64;
        while int(r * r) < *precision {
            let c = if r == 0 { weight(0) } else { weight(r).add(&weight(-r)) };
            terms.push((int(r * r), c));
            r += 1;
        }
        Self::from_terms(terms, precision.clone())
    }

    /// First exponent below the common precision (and below `bound`, if given) where the
    /// two series differ.
    pub fn first_difference(&self, other: &Self, bound: Option<&Rational>) -> Option<Rational> {
        let mut limit = self.precision.clone().min(other.precision.clone());
        if let Some(b) = bound {
            limit = limit.min(b.clone());
        }
        let diff = self.sub(other);
        diff.valuation().filter(|v| *v < limit)
    }

    /// Equality of all coefficients below the common precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.first_difference(other, None).is_none()
    }

    /// Parses the display syntax, e.g. "2*q - 52*zeta4*q^4 + q^(1/5)". Coefficients are a
    /// rational, a power of a root of unity, or a product of the two.
    pub fn parse(text: &str, precision: Rational) -> Result<Self> {
        let mut terms = Vec::new();
        let cleaned: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let mut pieces: Vec<(bool, String)> = Vec::new();
        let mut current = String::new();
        let mut negative = false;
        let mut depth = 0;
        for ch in cleaned.chars() {
            match ch {
                '(' => {
                    depth += 1;
                    current.push(ch);
                }
                ')' => {
                    depth -= 1;
                    current.push(ch);
                }
                '+' | '-' if depth == 0 && !current.ends_with('^') => {
                    if !current.is_empty() {
                        pieces.push((negative, std::mem::take(&mut current)));
                    }
                    negative = ch == '-';
                }
                _ => current.push(ch),
            }
        }
        if !current.is_empty() {
            pieces.push((negative, current));
        }
        for (neg, piece) in pieces {
            let (c, e) = parse_term(&piece)?;
            terms.push((e, if neg { c.neg() } else { c }));
        }
        Ok(Self::from_terms(terms, precision))
    }
}

fn parse_term(piece: &str) -> Result<(CycNumber, Rational)> {
    let bad = || Error::Parse(format!("cannot parse series term {piece:?}"));
    let mut coeff = CycNumber::one();
    let mut exponent = Rational::zero();
    let mut saw_q = false;
    for factor in piece.split('*') {
        if factor.is_empty() {
            return Err(bad());
        }
        let (base, power) = match factor.split_once('^') {
            Some((b, p)) => (b, Some(p.trim_start_matches('(').trim_end_matches(')'))),
            None => (factor, None),
        };
        if base == "q" {
            saw_q = true;
            exponent += match power {
                Some(p) => parse_rational(p)?,
                None => Rational::one(),
            };
        } else if base == "i" {
            let e: i64 = power.map(|p| p.parse().map_err(|_| bad())).transpose()?.unwrap_or(1);
            coeff = coeff.mul(&CycNumber::zeta(4, e));
        } else if let Some(n) = base.strip_prefix("zeta") {
            let n: u64 = n.parse().map_err(|_| bad())?;
            let e: i64 = power.map(|p| p.parse().map_err(|_| bad())).transpose()?.unwrap_or(1);
            coeff = coeff.mul(&CycNumber::zeta(n, e));
        } else {
            if power.is_some() {
                return Err(bad());
            }
            coeff = coeff.scale(&parse_rational(base.trim_start_matches('(').trim_end_matches(')'))?);
        }
    }
    if !saw_q && piece.contains('q') {
        return Err(bad());
    }
    Ok((coeff, exponent))
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, c) in self.iter() {
            let q = if e.is_zero() {
                String::new()
            } else if e.is_one() {
                "q".to_string()
            } else if e.is_integer() {
                format!("q^{e}")
            } else {
                format!("q^({e})")
            };
            let text = c.to_string();
            let (neg, body) = match text.strip_prefix('-') {
                Some(rest) if c.as_monomial().is_some() => (true, rest.to_string()),
                _ => (false, text),
            };
            let body = if c.as_monomial().is_none() { format!("({body})") } else { body };
            let sep = match (first, neg) {
                (true, true) => "-",
                (true, false) => "",
                (false, true) => " - ",
                (false, false) => " + ",
            };
            let term = match (body.as_str(), q.is_empty()) {
                (b, true) => b.to_string(),
                ("1", false) => q,
                (b, false) => format!("{b}*{q}"),
            };
            write!(f, "{sep}{term}")?;
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.precision)
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

#[derive(Serialize, Deserialize)]
struct QSeriesJson {
    denominator: u64,
    precision: String,
    terms: Vec<(String, CycNumber)>,
}

impl Serialize for QSeries {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        QSeriesJson {
            denominator: self.denominator,
            precision: self.precision.to_string(),
            terms: self.iter().map(|(e, c)| (e.to_string(), c.clone())).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for QSeries {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = QSeriesJson::deserialize(d)?;
        if raw.denominator == 0 {
            return Err(D::Error::custom("denominator must be positive"));
        }
        let precision = parse_rational(&raw.precision).map_err(D::Error::custom)?;
        let mut terms = Vec::new();
        for (e, c) in raw.terms {
            let e = parse_rational(&e).map_err(D::Error::custom)?;
            if (&e * int(raw.denominator as i64)).denom() != &BigInt::one() {
                return Err(D::Error::custom(format!("exponent {e} is not in (1/{})Z", raw.denominator)));
            }
            if e >= precision {
                return Err(D::Error::custom(format!("exponent {e} is not below the precision {precision}")));
            }
            terms.push((e, c));
        }
        Ok(QSeries::from_terms(terms, precision))
    }
}
