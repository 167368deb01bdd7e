//! Dirichlet characters modulo odd primes and products of distinct odd primes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arith::{discrete_log, gcd, is_prime, least_primitive_root, mod_mul, modulo};
use crate::error::{Error, Result};
use crate::exactnum::{CycNumber, Rational, RootOfUnity};

/// A character modulo an odd prime, normalized to the least primitive root.
#[derive(Clone, PartialEq, Eq, Hash)]
struct PrimeCharacter {
    p: u64,
    g: u64,
    generator_value: RootOfUnity,
    // values[n] = χ(n) for 1 ≤ n < p
    values: Vec<RootOfUnity>,
}

impl PrimeCharacter {
    fn new(p: u64, generator_value: RootOfUnity) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::invalid(format!("character modulus {p} is not an odd prime")));
        }
        if !(p - 1).is_multiple_of(generator_value.order()) {
            return Err(Error::invalid(format!(
                "generator value of order {} is not a ({})-th root of unity",
                generator_value.order(),
                p - 1
            )));
        }
        let g = least_primitive_root(p);
        let mut values = vec![RootOfUnity::one(); p as usize];
        let mut x = 1u64;
        let mut v = RootOfUnity::one();
        for _ in 0..p - 1 {
            values[x as usize] = v;
            x = mod_mul(x, g, p);
            v = v.mul(&generator_value);
        }
        Ok(PrimeCharacter { p, g, generator_value, values })
    }

    fn value(&self, n: i64) -> Option<RootOfUnity> {
        let r = modulo(n, self.p);
        if r == 0 {
            None
        } else {
            Some(self.values[r as usize])
        }
    }
}

/// A Dirichlet character modulo a squarefree product of odd primes, stored as
/// its prime components (ascending by prime).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DirichletCharacter {
    components: Vec<PrimeCharacter>,
}

impl DirichletCharacter {
    /// The character mod `p` sending the least primitive root to `generator_value`.
    pub fn new(p: u64, generator_value: RootOfUnity) -> Result<Self> {
        Ok(DirichletCharacter { components: vec![PrimeCharacter::new(p, generator_value)?] })
    }

    /// The character mod `p` sending a given primitive root `g` to `value`.
    pub fn with_primitive_root(p: u64, g: u64, value: RootOfUnity) -> Result<Self> {
        if p < 3 || !is_prime(p) {
            return Err(Error::invalid(format!("character modulus {p} is not an odd prime")));
        }
        let least = least_primitive_root(p);
        if g == least {
            return Self::new(p, value);
        }
        if crate::arith::mult_order(modulo(g as i64, p), p) != p - 1 {
            return Err(Error::invalid(format!("{g} is not a primitive root mod {p}")));
        }
        // least = g^k, so χ(least) = value^k
        let k = discrete_log(least, g, p).expect("primitive root generates");
        Self::new(p, value.pow(k as i64))
    }

    /// χ(g) = e(num/den) on the least primitive root g mod p.
    pub fn from_exponent(p: u64, num: i64, den: u64) -> Result<Self> {
        Self::new(p, RootOfUnity::e(num, den))
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, RootOfUnity::one())
    }

    /// The Legendre symbol (·/p).
    pub fn legendre(p: u64) -> Result<Self> {
        Self::new(p, RootOfUnity::e(1, 2))
    }

    pub fn modulus(&self) -> u64 {
        self.components.iter().map(|c| c.p).product()
    }

    pub fn primes(&self) -> Vec<u64> {
        self.components.iter().map(|c| c.p).collect()
    }

    /// The prime-modulus factor of this character at `p`.
    pub fn component(&self, p: u64) -> Option<DirichletCharacter> {
        self.components
            .iter()
            .find(|c| c.p == p)
            .map(|c| DirichletCharacter { components: vec![c.clone()] })
    }

    /// χ(n) as a root of unity, or `None` when gcd(n, modulus) > 1.
    pub fn value(&self, n: i64) -> Option<RootOfUnity> {
        let mut acc = RootOfUnity::one();
        for c in &self.components {
            acc = acc.mul(&c.value(n)?);
        }
        Some(acc)
    }

    pub fn evaluate(&self, n: i64) -> CycNumber {
        match self.value(n) {
            Some(z) => z.to_cyc(),
            None => CycNumber::zero(),
        }
    }

    /// χ(−1) ∈ {+1, −1}.
    pub fn parity(&self) -> i32 {
        if self.value(-1).expect("-1 is a unit") == RootOfUnity::one() {
            1
        } else {
            -1
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.components.iter().all(|c| c.generator_value == RootOfUnity::one())
    }

    /// Order of χ in the character group.
    pub fn order(&self) -> u64 {
        self.components
            .iter()
            .fold(1, |acc, c| crate::arith::lcm(acc, c.generator_value.order()))
    }

    /// Pointwise product. Shared primes multiply componentwise; coprime moduli combine by CRT.
    pub fn multiply(&self, other: &Self) -> Self {
        let mut out: Vec<PrimeCharacter> = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (a, b) = (&self.components, &other.components);
        while i < a.len() || j < b.len() {
            match (a.get(i), b.get(j)) {
                (Some(x), Some(y)) if x.p == y.p => {
                    out.push(PrimeCharacter::new(x.p, x.generator_value.mul(&y.generator_value)).unwrap());
                    i += 1;
                    j += 1;
                }
                (Some(x), Some(y)) if x.p < y.p => {
                    out.push(x.clone());
                    i += 1;
                }
                (Some(_), Some(y)) => {
                    out.push(y.clone());
                    j += 1;
                }
                (Some(x), None) => {
                    out.push(x.clone());
                    i += 1;
                }
                (None, Some(y)) => {
                    out.push(y.clone());
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        DirichletCharacter { components: out }
    }

    /// The inverse character χ̄.
    pub fn conjugate_char(&self) -> Self {
        DirichletCharacter {
            components: self
                .components
                .iter()
                .map(|c| PrimeCharacter::new(c.p, c.generator_value.conj()).unwrap())
                .collect(),
        }
    }

    pub fn pow(&self, k: i64) -> Self {
        DirichletCharacter {
            components: self
                .components
                .iter()
                .map(|c| PrimeCharacter::new(c.p, c.generator_value.pow(k)).unwrap())
                .collect(),
        }
    }

    /// g(χ) = Σ_{n mod p} χ(n) e(n/p) for a character of prime modulus.
    pub fn gauss_sum(&self) -> Result<CycNumber> {
        let [c] = self.components.as_slice() else {
            return Err(Error::invalid("Gauss sums are implemented for prime moduli only"));
        };
        let p = c.p;
        let n = crate::arith::lcm(p, self.order());
        let terms: Vec<(i64, Rational)> = (1..p)
            .map(|m| {
                let z = c.values[m as usize].mul(&RootOfUnity::e(m as i64, p));
                (z.exponent_in(n) as i64, Rational::from_integer(1.into()))
            })
            .collect();
        Ok(CycNumber::from_terms(n, &terms))
    }

    /// All characters modulo the odd prime `p`, indexed by the exponent k in χ(g) = e(k/(p−1)).
    pub fn all_mod(p: u64) -> Result<Vec<Self>> {
        (0..p - 1).map(|k| Self::from_exponent(p, k as i64, p - 1)).collect()
    }
}

/// Σ_{n mod p} e(αn²/p), which equals χ_p(α)·ε_p·√p.
pub fn quadratic_gauss_constant(alpha: i64, p: u64) -> Result<CycNumber> {
    if p < 3 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    if modulo(alpha, p) == 0 {
        return Err(Error::invalid(format!("quadratic Gauss sum needs p ∤ α, got α = {alpha}, p = {p}")));
    }
    let one = Rational::from_integer(1.into());
    let terms: Vec<(i64, Rational)> = (0..p)
        .map(|n| (modulo(alpha * (n * n % p) as i64, p) as i64, one.clone()))
        .collect();
    Ok(CycNumber::from_terms(p, &terms))
}

/// ε_p = 1 for p ≡ 1 (mod 4), i for p ≡ 3 (mod 4).
pub fn epsilon_p(p: u64) -> CycNumber {
    if p % 4 == 1 {
        CycNumber::one()
    } else {
        CycNumber::i()
    }
}

/// The positive square root of the odd prime p, as a Gauss sum divided by ε_p.
pub fn sqrt_prime(p: u64) -> Result<CycNumber> {
    let g = quadratic_gauss_constant(1, p)?;
    Ok(if p % 4 == 1 { g } else { g.mul(&CycNumber::zeta(4, 3)) })
}

/// √2 = ζ₈ + ζ₈⁻¹.
pub fn sqrt_two() -> CycNumber {
    CycNumber::zeta(8, 1).add(&CycNumber::zeta(8, 7))
}

/// Positive square root of a positive squarefree integer built from 2 and odd primes.
pub fn sqrt_squarefree(n: u64) -> Result<CycNumber> {
    let mut acc = CycNumber::one();
    for (q, e) in crate::arith::factorize(n) {
        if e != 1 {
            return Err(Error::invalid(format!("{n} is not squarefree")));
        }
        acc = acc.mul(&if q == 2 { sqrt_two() } else { sqrt_prime(q)? });
    }
    Ok(acc)
}

impl fmt::Debug for DirichletCharacter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .components
            .iter()
            .map(|c| format!("mod {}: {} -> {}", c.p, c.g, c.generator_value.to_cyc()))
            .collect();
        write!(f, "DirichletCharacter[{}]", parts.join("; "))
    }
}

#[derive(Serialize, Deserialize)]
struct PrimeCharacterJson {
    modulus: u64,
    primitive_root: u64,
    generator_value: CycNumber,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum CharacterJson {
    Prime(PrimeCharacterJson),
    Product(Vec<PrimeCharacterJson>),
}

fn root_from_cyc(v: &CycNumber, p: u64) -> Result<RootOfUnity> {
    // the value must be a (p−1)-th root of unity
    let n = crate::arith::lcm(p - 1, 2);
    for e in 0..n {
        let z = RootOfUnity::e(e as i64, n);
        if &z.to_cyc() == v {
            return Ok(z);
        }
    }
    Err(Error::invalid(format!("generator value {v} is not a ({})-th root of unity", p - 1)))
}

impl PrimeCharacterJson {
    fn from_component(c: &PrimeCharacter) -> Self {
        PrimeCharacterJson { modulus: c.p, primitive_root: c.g, generator_value: c.generator_value.to_cyc() }
    }

    fn build(&self) -> Result<DirichletCharacter> {
        if self.modulus < 3 || !is_prime(self.modulus) {
            return Err(Error::invalid(format!("character modulus {} is not an odd prime", self.modulus)));
        }
        if gcd(self.primitive_root, self.modulus) != 1 {
            return Err(Error::invalid("primitive root shares a factor with the modulus"));
        }
        let z = root_from_cyc(&self.generator_value, self.modulus)?;
        DirichletCharacter::with_primitive_root(self.modulus, self.primitive_root, z)
    }
}

impl Serialize for DirichletCharacter {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let parts: Vec<_> = self.components.iter().map(PrimeCharacterJson::from_component).collect();
        if parts.len() == 1 {
            CharacterJson::Prime(parts.into_iter().next().unwrap()).serialize(s)
        } else {
            CharacterJson::Product(parts).serialize(s)
        }
    }
}

impl<'de> Deserialize<'de> for DirichletCharacter {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = CharacterJson::deserialize(d)?;
        let parts = match raw {
            CharacterJson::Prime(p) => vec![p],
            CharacterJson::Product(v) => v,
        };
        let mut acc: Option<DirichletCharacter> = None;
        for part in &parts {
            let c = part.build().map_err(serde::de::Error::custom)?;
            if let Some(prev) = &acc {
                if prev.primes().contains(&part.modulus) {
                    return Err(serde::de::Error::custom("repeated prime in character product"));
                }
            }
            acc = Some(match acc {
                None => c,
                Some(prev) => prev.multiply(&c),
            });
        }
        acc.ok_or_else(|| serde::de::Error::custom("empty character product"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::legendre;
    use crate::exactnum::int;

    fn psi5() -> DirichletCharacter {
        DirichletCharacter::from_exponent(5, 1, 4).unwrap()
    }

    fn psi11() -> DirichletCharacter {
        DirichletCharacter::from_exponent(11, 1, 10).unwrap()
    }

    #[test]
    fn example_values() {
        assert_eq!(psi5().evaluate(7), CycNumber::i());
        assert_eq!(psi11().evaluate(7), CycNumber::zeta(10, 7));
        assert_eq!(psi11().evaluate(7).scale(&int(2)), CycNumber::zeta(20, 4).scale(&int(-2)));
        assert_eq!(psi11().evaluate(3), CycNumber::zeta(20, 16));
        assert_eq!(psi5().evaluate(1), CycNumber::one());
        assert!(psi5().evaluate(10).is_zero());
        let chi = psi5().multiply(&psi11());
        assert_eq!(chi.modulus(), 55);
        assert_eq!(chi.evaluate(7), CycNumber::i().mul(&CycNumber::zeta(10, 7)));
    }

    #[test]
    fn parities() {
        assert_eq!(psi5().parity(), -1);
        assert_eq!(DirichletCharacter::legendre(13).unwrap().parity(), 1);
        assert_eq!(DirichletCharacter::trivial(7).unwrap().parity(), 1);
        assert_eq!(psi11().parity(), -1);
    }

    #[test]
    fn gauss_sums() {
        assert_eq!(DirichletCharacter::trivial(7).unwrap().gauss_sum().unwrap(), CycNumber::from_int(-1));
        let g = DirichletCharacter::legendre(5).unwrap().gauss_sum().unwrap();
        assert_eq!(&g * &g, CycNumber::from_int(5));
        let g = psi5().gauss_sum().unwrap();
        assert_eq!(&g * &g.conjugate(), CycNumber::from_int(5));
    }

    #[test]
    fn quadratic_constants() {
        let g5 = quadratic_gauss_constant(1, 5).unwrap();
        assert_eq!(&g5 * &g5, CycNumber::from_int(5));
        let g3 = quadratic_gauss_constant(1, 3).unwrap();
        assert_eq!(&g3 * &g3, CycNumber::from_int(-3));
        for p in [3u64, 5, 7, 11, 13] {
            for a in 1..p as i64 {
                let lhs = quadratic_gauss_constant(a, p).unwrap();
                let rhs = quadratic_gauss_constant(1, p).unwrap().scale(&int(legendre(a, p) as i64));
                assert_eq!(lhs, rhs);
            }
        }
        assert!(quadratic_gauss_constant(10, 5).is_err());
        for p in [3u64, 5, 7, 13, 47] {
            let r = sqrt_prime(p).unwrap();
            assert_eq!(&r * &r, CycNumber::from_int(p as i64));
            assert!(r.to_complex().re > 0.0);
        }
        assert_eq!(&sqrt_two() * &sqrt_two(), CycNumber::from_int(2));
    }

    #[test]
    fn products_and_conjugates() {
        let chi = psi5();
        assert_eq!(chi.multiply(&DirichletCharacter::trivial(5).unwrap()), chi);
        assert!(chi.multiply(&chi.conjugate_char()).is_trivial());
        assert_eq!(chi.pow(2), DirichletCharacter::legendre(5).unwrap());
    }

    #[test]
    fn other_primitive_root() {
        // 3 is a primitive root mod 5 and 3 = 2^3, so χ(3) = i^3 = -i for ψ₅
        let c = DirichletCharacter::with_primitive_root(5, 3, RootOfUnity::e(3, 4)).unwrap();
        assert_eq!(c, psi5());
    }

    #[test]
    fn json_round_trip() {
        let chi = psi5().multiply(&psi11());
        let s = serde_json::to_string(&chi).unwrap();
        let back: DirichletCharacter = serde_json::from_str(&s).unwrap();
        assert_eq!(back, chi);
        let one = serde_json::to_string(&psi5()).unwrap();
        assert!(one.starts_with("{\"modulus\":5,\"primitive_root\":2"));
        let back: DirichletCharacter = serde_json::from_str(&one).unwrap();
        assert_eq!(back, psi5());
    }
}
