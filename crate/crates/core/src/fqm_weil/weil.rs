//! Matrices of the dual Weil representation ρ* and exact checks of its relations.

use crate::arith::{lcm, legendre, modulo};
use crate::characters::sqrt_squarefree;
use crate::error::{Error, Result};
use crate::exactnum::{rat, CycNumber, RootOfUnity, RootSum};

use super::FiniteQuadraticModule;

/// A matrix whose entries are `scale`·ζ_n^e or zero.
#[derive(Debug, Clone, PartialEq)]
pub struct PhaseMatrix {
    size: usize,
    n: u64,
    scale: CycNumber,
    exponents: Vec<Option<u64>>,
}

impl PhaseMatrix {
    /// ρ*(T)𝔢_γ = e(−Q(γ))𝔢_γ.
    pub fn rho_t(a: &FiniteQuadraticModule) -> Self {
        let size = a.order() as usize;
        let n = a.level();
        let mut exponents = vec![None; size * size];
        for g in a.elements() {
            let i = g as usize;
            exponents[i * size + i] = Some((n - a.q_numerator(g)) % n);
        }
        PhaseMatrix { size, n, scale: CycNumber::one(), exponents }
    }

    /// ρ*(S)𝔢_γ = e(sig/8)/√|A| · Σ_β e((β,γ))𝔢_β.
    pub fn rho_s(a: &FiniteQuadraticModule) -> Result<Self> {
        let size = a.order() as usize;
        let n = a.level();
        let scale = s_scale(a)?;
        let mut exponents = vec![None; size * size];
        for b in a.elements() {
            for g in a.elements() {
                exponents[b as usize * size + g as usize] = Some(a.bilinear_numerator(b, g));
            }
        }
        Ok(PhaseMatrix { size, n, scale, exponents })
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn scale(&self) -> &CycNumber {
        &self.scale
    }

    /// Entry (row, col) as a root of unity before scaling.
    pub fn phase(&self, row: usize, col: usize) -> Option<RootOfUnity> {
        self.exponents[row * self.size + col].map(|e| RootOfUnity::e(e as i64, self.n))
    }

    pub fn entry(&self, row: usize, col: usize) -> CycNumber {
        match self.phase(row, col) {
            Some(z) => self.scale.mul_root(&z),
            None => CycNumber::zero(),
        }
    }

    pub fn to_dense(&self) -> CycMatrix {
        let mut m = CycMatrix::zero(self.size);
        for r in 0..self.size {
            for c in 0..self.size {
                m.set(r, c, self.entry(r, c));
            }
        }
        m
    }
}

/// e(sig/8)/√|A|.
fn s_scale(a: &FiniteQuadraticModule) -> Result<CycNumber> {
    let root = sqrt_squarefree(a.order())?;
    let inv = root.scale(&rat(1, a.order() as i64));
    Ok(inv.mul_root(&a.sig_root()?))
}

/// Dense square matrix over cyclotomic numbers; an oracle for small modules.
#[derive(Debug, Clone, PartialEq)]
pub struct CycMatrix {
    size: usize,
    entries: Vec<CycNumber>,
}

impl CycMatrix {
    pub fn zero(size: usize) -> Self {
        CycMatrix { size, entries: vec![CycNumber::zero(); size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zero(size);
        for i in 0..size {
            m.set(i, i, CycNumber::one());
        }
        m
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn get(&self, r: usize, c: usize) -> &CycNumber {
        &self.entries[r * self.size + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: CycNumber) {
        self.entries[r * self.size + c] = v;
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.size, other.size);
        let n = self.size;
        let mut out = Self::zero(n);
        for r in 0..n {
            for c in 0..n {
                let mut acc = CycNumber::zero();
                for k in 0..n {
                    let (x, y) = (self.get(r, k), other.get(k, c));
                    if !x.is_zero() && !y.is_zero() {
                        acc = acc.add(&x.mul(y));
                    }
                }
                out.set(r, c, acc);
            }
        }
        out
    }

    pub fn scale(&self, s: &CycNumber) -> Self {
        CycMatrix { size: self.size, entries: self.entries.iter().map(|x| x.mul(s)).collect() }
    }

    pub fn conj_transpose(&self) -> Self {
        let mut out = Self::zero(self.size);
        for r in 0..self.size {
            for c in 0..self.size {
                out.set(c, r, self.get(r, c).conjugate());
            }
        }
        out
    }

    /// The permutation matrix 𝔢_γ ↦ 𝔢_{−γ}.
    pub fn negation(a: &FiniteQuadraticModule) -> Self {
        let n = a.order() as usize;
        let mut m = Self::zero(n);
        for g in a.elements() {
            m.set(a.neg(g) as usize, g as usize, CycNumber::one());
        }
        m
    }
}

/// Outcome of the exact relation checks for one module.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RelationReport {
    pub unitary: bool,
    pub s_squared: bool,
    pub st_cubed: bool,
}

impl RelationReport {
    pub fn all_hold(&self) -> bool {
        self.unitary && self.s_squared && self.st_cubed
    }
}

/// 1/c = e(−sig/8)·√|A| as an integer combination of N-th roots of unity.
fn inverse_scale_root_sum(a: &FiniteQuadraticModule, n: u64) -> Result<RootSum> {
    let p = a.p();
    let mut s = RootSum::new(n);
    // √p = ε_p⁻¹ Σ_m e(m²/p)
    for m in 0..p {
        s.add_term(((m * m % p) * (n / p)) as i64, 1);
    }
    if p % 4 == 3 {
        s.rotate(-((n / 4) as i64));
    }
    if !a.is_order_p() {
        // √2 = ζ₈ + ζ₈⁻¹
        let mut t = s.clone();
        s.rotate((n / 8) as i64);
        t.rotate(-((n / 8) as i64));
        s.add_assign(&t);
    }
    s.rotate(-((a.signature()? as u64 * n / 8) as i64));
    Ok(s)
}

impl FiniteQuadraticModule {
    /// Verifies unitarity of ρ*(S), ρ*(S)² = e(sig/4)·(𝔢_γ ↦ 𝔢_{−γ}) and
    /// (ρ*(S)ρ*(T))³ = ρ*(S)², exactly, row by row.
    ///
    /// The cubic relation is checked in the equivalent form STS = T⁻¹ S T⁻¹.
    pub fn check_weil_relations(&self) -> Result<RelationReport> {
        let size = self.order() as usize;
        let level = self.level();
        let n = lcm(level, 8);
        let f = n / level;
        let s = PhaseMatrix::rho_s(self)?;
        let c = s.scale().clone();
        let order = CycNumber::from_int(self.order() as i64);
        let x = |i: usize, j: usize| s.exponents[i * size + j].unwrap() * f;
        let q: Vec<u64> = self.elements().map(|g| self.q_numerator(g) * f).collect();

        // c·c̄ = 1/|A| and e(sig/4)/c² = |A| reduce the first two checks to integers
        let mut unitary = c.mul(&c.conjugate()).mul(&order).is_one();
        let sig4 = RootOfUnity::e(2 * self.signature()? as i64, 8).to_cyc();
        let mut s_squared = sig4.div(&c.mul(&c))? == order;
        let inv_c = inverse_scale_root_sum(self, n)?;
        let mut st_cubed = inv_c.to_cyc().mul(&c).is_one();

        let m = self.order() as i128;
        for i in 0..size {
            for j in 0..size {
                if unitary {
                    let mut acc = RootSum::new(n);
                    for k in 0..size {
                        acc.add_term(x(i, k) as i64 - x(j, k) as i64, 1);
                    }
                    if i == j {
                        acc.add_term(0, -m);
                    }
                    unitary = acc.is_zero();
                }
                if s_squared {
                    let mut acc = RootSum::new(n);
                    for k in 0..size {
                        acc.add_term((x(i, k) + x(k, j)) as i64, 1);
                    }
                    if j as u64 == self.neg(i as u64) {
                        acc.add_term(0, -m);
                    }
                    s_squared = acc.is_zero();
                }
                if st_cubed {
                    // Σ_k e(x_ik − Q_k + x_kj) against (1/c)·e(Q_i + x_ij + Q_j)
                    let mut acc = RootSum::new(n);
                    for k in 0..size {
                        acc.add_term(x(i, k) as i64 - q[k] as i64 + x(k, j) as i64, 1);
                    }
                    let mut rhs = inv_c.clone();
                    rhs.rotate((q[i] + x(i, j) + q[j]) as i64);
                    rhs.scale(-1);
                    acc.add_assign(&rhs);
                    st_cubed = acc.is_zero();
                }
            }
        }
        Ok(RelationReport { unitary, s_squared, st_cubed })
    }

    /// The same three relations by dense matrix multiplication.
    pub fn check_weil_relations_dense(&self) -> Result<RelationReport> {
        let s = PhaseMatrix::rho_s(self)?.to_dense();
        let t = PhaseMatrix::rho_t(self).to_dense();
        let id = CycMatrix::identity(s.size());
        let s2 = s.mul(&s);
        let st = s.mul(&t);
        let st3 = st.mul(&st).mul(&st);
        let sig4 = RootOfUnity::e(2 * self.signature()? as i64, 8).to_cyc();
        Ok(RelationReport {
            unitary: s.mul(&s.conj_transpose()) == id,
            s_squared: s2 == CycMatrix::negation(self).scale(&sig4),
            st_cubed: st3 == s2,
        })
    }
}

/// The map 𝔢_γ ↦ sign·𝔢_{π(γ)}.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SignedPermutation {
    pub sign: i32,
    pub perm: Vec<u64>,
}

impl SignedPermutation {
    pub fn apply(&self, g: u64) -> (i32, u64) {
        (self.sign, self.perm[g as usize])
    }

    /// self ∘ other.
    pub fn compose(&self, other: &Self) -> Self {
        SignedPermutation {
            sign: self.sign * other.sign,
            perm: other.perm.iter().map(|&g| self.perm[g as usize]).collect(),
        }
    }

    pub fn to_dense(&self) -> CycMatrix {
        let mut m = CycMatrix::zero(self.perm.len());
        for (g, &h) in self.perm.iter().enumerate() {
            m.set(h as usize, g, CycNumber::from_int(self.sign as i64));
        }
        m
    }
}

/// 𝔢_γ ↦ χ_p(d)𝔢_{dγ} on an order-p module.
pub fn rho_diag_action(a: &FiniteQuadraticModule, d: i64) -> Result<SignedPermutation> {
    if !a.is_order_p() {
        return Err(Error::invalid("the diagonal action is defined here for order-p modules"));
    }
    let p = a.p();
    let d = modulo(d, p);
    if d == 0 {
        return Err(Error::invalid(format!("d must be a unit mod {p}")));
    }
    Ok(SignedPermutation { sign: legendre(d as i64, p), perm: (0..p).map(|g| g * d % p).collect() })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rho_t_entries() {
        let a = FiniteQuadraticModule::order_p(5, 4).unwrap();
        let t = PhaseMatrix::rho_t(&a);
        assert_eq!(t.entry(2, 2), CycNumber::zeta(5, -1));
        assert!(t.entry(1, 2).is_zero());
    }

    #[test]
    fn relations_streaming_and_dense_agree() {
        for p in [3u64, 5, 7] {
            for alpha in [1i64, 2] {
                let a = FiniteQuadraticModule::order_p(p, alpha).unwrap();
                let fast = a.check_weil_relations().unwrap();
                assert!(fast.all_hold(), "{a}");
                assert_eq!(fast, a.check_weil_relations_dense().unwrap());
                for delta in [1, -1] {
                    let b = FiniteQuadraticModule::order_2p(p, alpha, delta).unwrap();
                    let fast = b.check_weil_relations().unwrap();
                    assert!(fast.all_hold(), "{b}");
                    assert_eq!(fast, b.check_weil_relations_dense().unwrap());
                }
            }
        }
    }

    #[test]
    fn fourth_power_is_scalar() {
        let a = FiniteQuadraticModule::order_2p(5, 2, -1).unwrap();
        let s = PhaseMatrix::rho_s(&a).unwrap().to_dense();
        let s4 = s.mul(&s).mul(&s).mul(&s);
        let sig2 = RootOfUnity::e(4 * a.signature().unwrap() as i64, 8).to_cyc();
        assert_eq!(s4, CycMatrix::identity(10).scale(&sig2));
    }

    #[test]
    fn wrong_sign_convention_is_detected() {
        // conjugating the S-matrix (the non-dual representation with the dual T) breaks (ST)^3 = S^2
        let a = FiniteQuadraticModule::order_p(7, 1).unwrap();
        let s = PhaseMatrix::rho_s(&a).unwrap().to_dense().conj_transpose();
        let t = PhaseMatrix::rho_t(&a).to_dense();
        let st = s.mul(&t);
        assert_ne!(st.mul(&st).mul(&st), s.mul(&s));
    }

    #[test]
    fn diagonal_action_is_a_group_action() {
        let a = FiniteQuadraticModule::order_p(7, 3).unwrap();
        let id = rho_diag_action(&a, 1).unwrap();
        assert_eq!(id.to_dense(), CycMatrix::identity(7));
        let minus = rho_diag_action(&a, -1).unwrap();
        assert_eq!(minus.apply(2), (-1, 5));
        for d1 in 1..7 {
            for d2 in 1..7 {
                let lhs = rho_diag_action(&a, d1).unwrap().compose(&rho_diag_action(&a, d2).unwrap());
                assert_eq!(lhs, rho_diag_action(&a, d1 * d2).unwrap());
            }
            let act = rho_diag_action(&a, d1).unwrap();
            for g in 0..7u64 {
                let (_, h) = act.apply(g);
                assert_eq!(a.q_numerator(h), (d1 as u64 * d1 as u64 % 7) * a.q_numerator(g) % 7);
            }
        }
        assert!(rho_diag_action(&a, 14).is_err());
    }
}
