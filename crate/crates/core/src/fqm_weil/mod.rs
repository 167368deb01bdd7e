//! Finite quadratic modules of order p and 2p, their signatures, the dual Weil
//! representation, and vector-valued forms.

mod form;
mod weil;

use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

pub use form::{VectorValuedForm, Violation};
pub use weil::{rho_diag_action, CycMatrix, PhaseMatrix, RelationReport, SignedPermutation};

use crate::arith::{is_prime, legendre, modulo};
use crate::characters::sqrt_squarefree;
use crate::error::{Error, Result};
use crate::exactnum::{frac, CycNumber, Rational, RootOfUnity};

/// (ℤ/pℤ, αγ²/p) or (ℤ/2pℤ, δγ₁²/4 + αγ₂²/p) with γ₁ = γ mod 2 and γ₂ = γ mod p.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FiniteQuadraticModule {
    OrderP { p: u64, alpha: u64 },
    Order2P { p: u64, alpha: u64, delta: i32 },
}

fn check_prime(p: u64) -> Result<()> {
    if p < 3 || !is_prime(p) {
        return Err(Error::invalid(format!("{p} is not an odd prime")));
    }
    Ok(())
}

impl FiniteQuadraticModule {
    pub fn order_p(p: u64, alpha: i64) -> Result<Self> {
        check_prime(p)?;
        let alpha = modulo(alpha, p);
        if alpha == 0 {
            return Err(Error::Degenerate(format!("α ≡ 0 mod {p}")));
        }
        Ok(FiniteQuadraticModule::OrderP { p, alpha })
    }

    /// δ is read modulo 4 and must be odd.
    pub fn order_2p(p: u64, alpha: i64, delta: i64) -> Result<Self> {
        check_prime(p)?;
        let alpha = modulo(alpha, p);
        if alpha == 0 {
            return Err(Error::Degenerate(format!("α ≡ 0 mod {p}")));
        }
        let delta = match modulo(delta, 4) {
            1 => 1,
            3 => -1,
            _ => return Err(Error::Degenerate(format!("δ = {delta} is even"))),
        };
        Ok(FiniteQuadraticModule::Order2P { p, alpha, delta })
    }

    /// Recovers α from the value Q(1) on the generator 1 of ℤ/pℤ.
    pub fn identify_order_p(p: u64, q_of_one: &Rational) -> Result<Self> {
        let alpha = scaled_residue(q_of_one, p)?;
        Self::order_p(p, alpha)
    }

    /// Recovers δ and α from Q(p) = δ/4 and Q(p+1) = α/p.
    pub fn identify_order_2p(p: u64, q_two_part: &Rational, q_p_part: &Rational) -> Result<Self> {
        let delta = scaled_residue(q_two_part, 4)?;
        let alpha = scaled_residue(q_p_part, p)?;
        Self::order_2p(p, alpha, delta)
    }

    pub fn p(&self) -> u64 {
        match *self {
            FiniteQuadraticModule::OrderP { p, .. } | FiniteQuadraticModule::Order2P { p, .. } => p,
        }
    }

    pub fn alpha(&self) -> u64 {
        match *self {
            FiniteQuadraticModule::OrderP { alpha, .. } | FiniteQuadraticModule::Order2P { alpha, .. } => alpha,
        }
    }

    pub fn delta(&self) -> Option<i32> {
        match *self {
            FiniteQuadraticModule::OrderP { .. } => None,
            FiniteQuadraticModule::Order2P { delta, .. } => Some(delta),
        }
    }

    pub fn is_order_p(&self) -> bool {
        matches!(self, FiniteQuadraticModule::OrderP { .. })
    }

    pub fn order(&self) -> u64 {
        match *self {
            FiniteQuadraticModule::OrderP { p, .. } => p,
            FiniteQuadraticModule::Order2P { p, .. } => 2 * p,
        }
    }

    /// ε = χ_p(α).
    pub fn epsilon(&self) -> i32 {
        legendre(self.alpha() as i64, self.p())
    }

    /// Common denominator of all values of Q.
    pub fn level(&self) -> u64 {
        match *self {
            FiniteQuadraticModule::OrderP { p, .. } => p,
            FiniteQuadraticModule::Order2P { p, .. } => 4 * p,
        }
    }

    pub fn elements(&self) -> impl Iterator<Item = u64> {
        0..self.order()
    }

    pub fn neg(&self, g: u64) -> u64 {
        let n = self.order();
        (n - g % n) % n
    }

    /// The residue of γ modulo p, which is what characters see.
    pub fn p_part(&self, g: u64) -> u64 {
        g % self.p()
    }

    /// γ₁ = γ mod 2 for order 2p; always 0 for order p.
    pub fn two_part(&self, g: u64) -> u64 {
        if self.is_order_p() {
            0
        } else {
            g % 2
        }
    }

    /// level·Q(γ) as a residue modulo the level.
    pub fn q_numerator(&self, g: u64) -> u64 {
        match *self {
            FiniteQuadraticModule::OrderP { p, alpha } => {
                let g = g % p;
                alpha * g % p * g % p
            }
            FiniteQuadraticModule::Order2P { p, alpha, delta } => {
                let n = 4 * p;
                let g1 = g % 2;
                let g2 = g % p;
                let two = modulo(delta as i64 * (g1 * g1) as i64 * p as i64, n);
                let odd = 4 * (alpha * g2 % p * g2 % p);
                (two + odd) % n
            }
        }
    }

    /// Q(γ) in [0, 1).
    pub fn q_value(&self, g: u64) -> Rational {
        Rational::new(BigInt::from(self.q_numerator(g)), BigInt::from(self.level()))
    }

    /// level·(β, γ) as a residue modulo the level.
    pub fn bilinear_numerator(&self, b: u64, g: u64) -> u64 {
        let n = self.level() as i64;
        let s = self.q_numerator((b + g) % self.order()) as i64
            - self.q_numerator(b) as i64
            - self.q_numerator(g) as i64;
        modulo(s, n as u64)
    }

    /// (β, γ) = Q(β+γ) − Q(β) − Q(γ) in [0, 1).
    pub fn bilinear(&self, b: u64, g: u64) -> Rational {
        Rational::new(BigInt::from(self.bilinear_numerator(b, g)), BigInt::from(self.level()))
    }

    /// Σ_γ e(Q(γ)).
    pub fn gauss_sum(&self) -> CycNumber {
        let n = self.level();
        let one = Rational::from_integer(1.into());
        let terms: Vec<(i64, Rational)> =
            self.elements().map(|g| (self.q_numerator(g) as i64, one.clone())).collect();
        CycNumber::from_terms(n, &terms)
    }

    /// Signature mod 8 from the normalized Gauss sum Σ e(Q(γ))/√|A| = e(sig/8).
    pub fn signature(&self) -> Result<u8> {
        let g = self.gauss_sum();
        let root = sqrt_squarefree(self.order())?;
        for s in 0..8u8 {
            if RootOfUnity::e(s as i64, 8).to_cyc().mul(&root) == g {
                return Ok(s);
            }
        }
        Err(Error::Degenerate(format!("Gauss sum of {self} is not e(s/8)·√{}", self.order())))
    }

    /// Closed-form signature from (p mod 4, ε) and δ.
    pub fn signature_table(&self) -> u8 {
        let base: i64 = match (self.p() % 4, self.epsilon()) {
            (1, 1) => 0,
            (1, _) => 4,
            (_, 1) => 2,
            _ => 6,
        };
        let delta = self.delta().unwrap_or(0) as i64;
        modulo(base + delta, 8) as u8
    }

    /// e(sig/8).
    pub fn sig_root(&self) -> Result<RootOfUnity> {
        Ok(RootOfUnity::e(self.signature()? as i64, 8))
    }

    pub fn descriptor(&self) -> ModuleDescriptor {
        match *self {
            FiniteQuadraticModule::OrderP { p, alpha } => {
                ModuleDescriptor { variant: "p".into(), p, alpha: alpha as i64, delta: None }
            }
            FiniteQuadraticModule::Order2P { p, alpha, delta } => {
                ModuleDescriptor { variant: "2p".into(), p, alpha: alpha as i64, delta: Some(delta as i64) }
            }
        }
    }
}

fn scaled_residue(q: &Rational, m: u64) -> Result<i64> {
    let x = frac(q) * Rational::from_integer(BigInt::from(m));
    if !x.is_integer() {
        return Err(Error::invalid(format!("Q-value {q} is not in (1/{m})Z")));
    }
    Ok(x.to_integer().try_into().expect("small residue"))
}

impl fmt::Display for FiniteQuadraticModule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FiniteQuadraticModule::OrderP { p, alpha } => write!(f, "(Z/{p}, {alpha}x^2/{p})"),
            FiniteQuadraticModule::Order2P { p, alpha, delta } => {
                write!(f, "(Z/{}, {delta}x1^2/4 + {alpha}x2^2/{p})", 2 * p)
            }
        }
    }
}

/// JSON form {"variant": "p"|"2p", "p": .., "alpha": .., "delta": ..}.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModuleDescriptor {
    pub variant: String,
    pub p: u64,
    pub alpha: i64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<i64>,
}

impl ModuleDescriptor {
    pub fn build(&self) -> Result<FiniteQuadraticModule> {
        match (self.variant.as_str(), self.delta) {
            ("p", None) => FiniteQuadraticModule::order_p(self.p, self.alpha),
            ("p", Some(_)) => Err(Error::invalid("order-p module takes no delta")),
            ("2p", Some(d)) => FiniteQuadraticModule::order_2p(self.p, self.alpha, d),
            ("2p", None) => Err(Error::invalid("order-2p module needs delta")),
            (v, _) => Err(Error::invalid(format!("unknown module variant {v:?}"))),
        }
    }
}

impl Serialize for FiniteQuadraticModule {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for FiniteQuadraticModule {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ModuleDescriptor::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}
