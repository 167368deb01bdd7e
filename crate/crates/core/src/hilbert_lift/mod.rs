//! Real quadratic field data for the theta contraction: the field ℚ(√p), a totally
//! positive λ of prime norm ℓ, and the identification of O_K^#/O_K with ℤ/pℤ.

mod lift;

use std::fmt;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

pub use lift::{dn_restriction_direct, theta_product_check, scalar_shimura, shimura_lift, theta_contract, ThetaProductReport};

use crate::arith::{is_prime, mod_inv, modulo};
use crate::characters::DirichletCharacter;
use crate::error::{Error, Result};
use crate::exactnum::{int, parse_rational, CycNumber, Rational};
use crate::fqm_weil::FiniteQuadraticModule;

/// x + y√p with rational x, y.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadElt {
    pub x: Rational,
    pub y: Rational,
}

impl QuadElt {
    pub fn new(x: Rational, y: Rational) -> Self {
        QuadElt { x, y }
    }

    pub fn rational(x: Rational) -> Self {
        QuadElt { x, y: Rational::zero() }
    }

    pub fn add(&self, o: &Self) -> Self {
        QuadElt::new(&self.x + &o.x, &self.y + &o.y)
    }

    pub fn sub(&self, o: &Self) -> Self {
        QuadElt::new(&self.x - &o.x, &self.y - &o.y)
    }

    pub fn mul(&self, o: &Self, p: u64) -> Self {
        let p = int(p as i64);
        QuadElt::new(&self.x * &o.x + &self.y * &o.y * p, &self.x * &o.y + &self.y * &o.x)
    }

    pub fn scale(&self, r: &Rational) -> Self {
        QuadElt::new(&self.x * r, &self.y * r)
    }

    /// Galois conjugate x − y√p.
    pub fn conj(&self) -> Self {
        QuadElt::new(self.x.clone(), -&self.y)
    }

    pub fn norm(&self, p: u64) -> Rational {
        &self.x * &self.x - &self.y * &self.y * int(p as i64)
    }

    pub fn trace(&self) -> Rational {
        &self.x * int(2)
    }

    pub fn div(&self, o: &Self, p: u64) -> Result<Self> {
        let n = o.norm(p);
        if n.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(self.mul(&o.conj(), p).scale(&n.recip()))
    }

    /// Both real embeddings positive.
    pub fn is_totally_positive(&self, p: u64) -> bool {
        self.x.is_positive() && self.norm(p).is_positive()
    }

    /// Membership in O_K = ℤ[(1+√p)/2] for p ≡ 1 mod 4.
    pub fn is_integral(&self) -> bool {
        let u = &self.x * int(2);
        let v = &self.y * int(2);
        u.is_integer() && v.is_integer() && (u.to_integer() - v.to_integer()) % 2 == 0.into()
    }

    /// The class c ∈ ℤ/pℤ with self ≡ c/√p mod O_K, for self ∈ O_K^# = (1/√p)O_K.
    pub fn dual_label(&self, p: u64) -> Result<u64> {
        // self·√p = py + x√p must lie in O_K
        let scaled = QuadElt::new(&self.y * int(p as i64), self.x.clone());
        if !scaled.is_integral() {
            return Err(Error::invalid(format!("{self} is not in the inverse different")));
        }
        let u: i64 = (&self.y * int(2 * p as i64)).to_integer().try_into().expect("small label");
        Ok(modulo(u, p) * mod_inv(2, p).unwrap() % p)
    }
}

impl fmt::Display for QuadElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}*sqrt", self.x, self.y)
    }
}

/// The data (p, λ, ℓ, b) together with the resulting modules and coset bijection.
#[derive(Debug, Clone, PartialEq)]
pub struct HilbertContext {
    p: u64,
    lambda: QuadElt,
    ell: u64,
    b: i64,
    sign: i32,
    // label_of_index[r] = c with γ_r ≡ c/√p
    label_of_index: Vec<u64>,
    index_of_label: Vec<u64>,
    source: FiniteQuadraticModule,
    target: FiniteQuadraticModule,
}

impl HilbertContext {
    pub fn new(p: u64, lambda: QuadElt, ell: u64, b: i64) -> Result<Self> {
        if !is_prime(p) || p % 4 != 1 {
            return Err(Error::invalid(format!("p = {p} must be a prime congruent to 1 mod 4")));
        }
        if !lambda.is_integral() || !lambda.is_totally_positive(p) {
            return Err(Error::invalid("lambda must be a totally positive integer of the field"));
        }
        if lambda.norm(p) != int(ell as i64) || !is_prime(ell) || ell == 2 {
            return Err(Error::invalid(format!("N(lambda) = {} must equal the odd prime ell = {ell}", lambda.norm(p))));
        }
        if modulo(b * b - p as i64, 4 * ell) != 0 {
            return Err(Error::invalid(format!("b^2 = {} is not p mod 4*ell", b * b)));
        }
        let two_lambda = lambda.scale(&int(2));
        let sign = [1i32, -1]
            .into_iter()
            .find(|&s| {
                let num = QuadElt::new(int(b), int(s as i64));
                num.div(&two_lambda, p).map(|q| q.is_integral()).unwrap_or(false)
            })
            .ok_or_else(|| Error::invalid("neither (b ± sqrt p)/(2 lambda) is integral"))?;

        let mut ctx = HilbertContext {
            p,
            lambda,
            ell,
            b,
            sign,
            label_of_index: Vec::new(),
            index_of_label: vec![u64::MAX; p as usize],
            source: FiniteQuadraticModule::order_p(p, 1)?,
            target: FiniteQuadraticModule::order_2p(ell, -(mod_inv(4, ell).unwrap() as i64), -(ell as i64))?,
        };
        for r in 0..p {
            let label = ctx.index_representative(r)?.dual_label(p)?;
            ctx.label_of_index.push(label);
        }
        for (r, &c) in ctx.label_of_index.iter().enumerate() {
            if ctx.index_of_label[c as usize] != u64::MAX {
                return Err(Error::Degenerate("the coset map is not a bijection".into()));
            }
            ctx.index_of_label[c as usize] = r as u64;
        }
        // Q(γ_r) = −N(γ_r) must equal αr²/p for a single α
        let q1 = crate::exactnum::frac(&-ctx.index_representative(1)?.norm(p));
        ctx.source = FiniteQuadraticModule::identify_order_p(p, &q1)?;
        for r in 0..p {
            let q = crate::exactnum::frac(&-ctx.index_representative(r)?.norm(p));
            if q != ctx.source.q_value(r) {
                return Err(Error::Degenerate(format!("the coset map is not an isometry at {r}")));
            }
        }
        for a in 0..2 * ell {
            let expect = crate::exactnum::frac(&Rational::new((-((a * a) as i64)).into(), ((4 * ell) as i64).into()));
            if ctx.target.q_value(a) != expect {
                return Err(Error::Degenerate("target module does not match -a^2/(4 ell)".into()));
            }
        }
        Ok(ctx)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn ell(&self) -> u64 {
        self.ell
    }

    pub fn b(&self) -> i64 {
        self.b
    }

    pub fn lambda(&self) -> &QuadElt {
        &self.lambda
    }

    /// The sign s with (b + s√p)/(2λ) integral; γ_{a,r} = (a + s·r/√p)/(2λ).
    pub fn sign(&self) -> i32 {
        self.sign
    }

    pub fn source_module(&self) -> &FiniteQuadraticModule {
        &self.source
    }

    pub fn target_module(&self) -> &FiniteQuadraticModule {
        &self.target
    }

    /// Gram matrix [[−2ℓ, −b], [−b, (p − b²)/(2ℓ)]].
    pub fn gram(&self) -> [[Rational; 2]; 2] {
        let l = self.ell as i64;
        [
            [int(-2 * l), int(-self.b)],
            [int(-self.b), Rational::new((self.p as i64 - self.b * self.b).into(), (2 * l).into())],
        ]
    }

    /// γ_{a,r} = (a + s·r/√p)/(2λ).
    pub fn gamma(&self, a: i64, r: i64) -> Result<QuadElt> {
        let num = QuadElt::new(int(a), Rational::new((self.sign as i64 * r).into(), (self.p as i64).into()));
        num.div(&self.lambda.scale(&int(2)), self.p)
    }

    /// The representative of the coset with index r: γ_{a,r} with r ≡ ab (mod 2ℓ) when
    /// ℓ ≠ p, and r(1+√p)/(2λ) when ℓ = p.
    pub fn index_representative(&self, r: u64) -> Result<QuadElt> {
        if self.ell == self.p {
            let num = QuadElt::new(int(r as i64), int(r as i64));
            num.div(&self.lambda.scale(&int(2)), self.p)
        } else {
            let (a, _) = self.coset_of_r(r as i64)?;
            self.gamma(a as i64, r as i64)
        }
    }

    /// For ℓ ≠ p: the residue a mod 2ℓ with r ≡ ab, and Q(γ_{a,r}) = −N(γ_{a,r}) mod 1.
    pub fn coset_of_r(&self, r: i64) -> Result<(u64, Rational)> {
        if self.ell == self.p {
            return Err(Error::invalid("coset_of_r needs ell != p"));
        }
        let m = 2 * self.ell;
        let binv = mod_inv(self.b, m).ok_or_else(|| Error::invalid("b is not a unit mod 2 ell"))?;
        let a = modulo(r, m) * binv % m;
        let g = self.gamma(a as i64, r)?;
        Ok((a, crate::exactnum::frac(&-g.norm(self.p))))
    }

    pub fn label_of_index(&self, r: u64) -> u64 {
        self.label_of_index[(r % self.p) as usize]
    }

    pub fn index_of_label(&self, c: u64) -> u64 {
        self.index_of_label[(c % self.p) as usize]
    }

    /// Index of the coset of an element of O_K^#.
    pub fn index_of(&self, nu: &QuadElt) -> Result<u64> {
        Ok(self.index_of_label(nu.dual_label(self.p)?))
    }

    /// ψ_p on the cosets, listed by index: ψ_p(γ_r) = ψ_p(r).
    pub fn psi_on_cosets(&self, psi: &DirichletCharacter) -> Result<Vec<CycNumber>> {
        if psi.modulus() != self.p {
            return Err(Error::ModulusMismatch { expected: self.p, found: psi.modulus() });
        }
        Ok((0..self.p).map(|r| psi.evaluate(r as i64)).collect())
    }

    /// ψ_p on the coset of an element of O_K^#.
    pub fn psi_on(&self, psi: &DirichletCharacter, nu: &QuadElt) -> Result<CycNumber> {
        Ok(psi.evaluate(self.index_of(nu)? as i64))
    }

    pub fn descriptor(&self) -> ContextDescriptor {
        ContextDescriptor {
            p: self.p,
            lambda: [self.lambda.x.to_string(), self.lambda.y.to_string()],
            ell: self.ell,
            b: self.b,
        }
    }
}

/// JSON form {"p": 5, "lambda": ["4", "1"], "ell": 11, "b": 7} with λ = u + v√p.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContextDescriptor {
    pub p: u64,
    pub lambda: [String; 2],
    pub ell: u64,
    pub b: i64,
}

impl ContextDescriptor {
    pub fn build(&self) -> Result<HilbertContext> {
        let lambda = QuadElt::new(parse_rational(&self.lambda[0])?, parse_rational(&self.lambda[1])?);
        HilbertContext::new(self.p, lambda, self.ell, self.b)
    }
}

impl Serialize for HilbertContext {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.descriptor().serialize(s)
    }
}

impl<'de> Deserialize<'de> for HilbertContext {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        ContextDescriptor::deserialize(d)?.build().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::rat;

    pub(crate) fn example_one() -> HilbertContext {
        HilbertContext::new(5, QuadElt::new(int(4), int(1)), 11, 7).unwrap()
    }

    pub(crate) fn example_two() -> HilbertContext {
        HilbertContext::new(13, QuadElt::new(rat(13, 2), rat(3, 2)), 13, 13).unwrap()
    }

    #[test]
    fn example_one_context() {
        let ctx = example_one();
        assert_eq!(ctx.sign(), -1);
        assert_eq!(ctx.source_module(), &FiniteQuadraticModule::order_p(5, -1).unwrap());
        assert_eq!(ctx.target_module(), &FiniteQuadraticModule::order_2p(11, 8, 1).unwrap());
        // r = 7 gives a ≡ 1 mod 22, and γ_{1,7} lies in the coset of 1/√5
        let (a, _) = ctx.coset_of_r(7).unwrap();
        assert_eq!(a, 1);
        assert_eq!(ctx.gamma(1, 7).unwrap().dual_label(5).unwrap(), 1);
        assert_eq!(ctx.index_of_label(1), 2);
        let (a, q) = ctx.coset_of_r(0).unwrap();
        assert_eq!((a, q), (0, rat(0, 1)));
        let psi5 = DirichletCharacter::from_exponent(5, 1, 4).unwrap();
        let one_over_sqrt5 = QuadElt::new(int(0), rat(1, 5));
        assert_eq!(ctx.psi_on(&psi5, &one_over_sqrt5).unwrap(), CycNumber::i());
        assert!(ctx.psi_on_cosets(&psi5).unwrap()[0].is_zero());
    }

    #[test]
    fn example_two_context() {
        let ctx = example_two();
        assert_eq!(ctx.source_module(), &FiniteQuadraticModule::order_p(13, 3).unwrap());
        assert_eq!(ctx.target_module(), &FiniteQuadraticModule::order_2p(13, 3, -1).unwrap());
        let lambda_inv = QuadElt::rational(int(1)).div(ctx.lambda(), 13).unwrap();
        assert_eq!(lambda_inv.dual_label(13).unwrap(), 5);
        for a in 1..13u64 {
            let nu = lambda_inv.scale(&int(a as i64));
            assert_eq!(ctx.index_of(&nu).unwrap(), 2 * a % 13);
        }
    }

    #[test]
    fn gram_matrix_determinant() {
        for ctx in [example_one(), example_two()] {
            let g = ctx.gram();
            let det = &g[0][0] * &g[1][1] - &g[0][1] * &g[1][0];
            assert_eq!(det, int(-(ctx.p() as i64)));
        }
    }

    #[test]
    fn bad_contexts_are_rejected() {
        assert!(HilbertContext::new(7, QuadElt::new(int(4), int(1)), 9, 7).is_err());
        assert!(HilbertContext::new(5, QuadElt::new(int(4), int(1)), 11, 5).is_err());
        assert!(HilbertContext::new(5, QuadElt::new(int(1), int(2)), 11, 7).is_err());
    }
}
