//! Twisted component sums φ_χ between vector-valued forms on modules of order p
//! or 2p and scalar forms, with their inverses and the Atkin–Lehner transforms.
//!
//! A [`ScalarFormDecomposition`] keeps one series per module element γ. For
//! φ_χ(F) the piece at γ is χ(γ)F_γ(Nτ) (N = p or 4p), so the pieces at γ and −γ
//! agree whenever the parity of χ matches the symmetry of F, and each carries
//! half of the scalar coefficients in its Q-class.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::characters::{sqrt_squarefree, DirichletCharacter};
use crate::error::{Error, Result};
use crate::exactnum::{int, parse_rational, rat, CycNumber, Rational, RootOfUnity};
use crate::fqm_weil::{FiniteQuadraticModule, PhaseMatrix, VectorValuedForm};
use crate::qseries::QSeries;

#[derive(Debug, Clone, PartialEq)]
pub struct ScalarFormDecomposition {
    module: FiniteQuadraticModule,
    character: DirichletCharacter,
    weight2: i64,
    components: Vec<QSeries>,
}

impl ScalarFormDecomposition {
    pub fn module(&self) -> &FiniteQuadraticModule {
        &self.module
    }

    pub fn character(&self) -> &DirichletCharacter {
        &self.character
    }

    pub fn weight2(&self) -> i64 {
        self.weight2
    }

    /// N in the substitution τ ↦ Nτ: p for order p, 4p for order 2p.
    pub fn level_scale(&self) -> u64 {
        level_scale(&self.module)
    }

    pub fn component(&self, g: u64) -> &QSeries {
        &self.components[g as usize]
    }

    pub fn components(&self) -> &[QSeries] {
        &self.components
    }

    /// G = Σ_γ G_γ.
    pub fn total(&self) -> QSeries {
        sum_series(self.components.iter())
    }

    /// The component-wise twist G_ψ = Σ_γ ψ(γ)G_γ, recorded with character ψχ.
    pub fn twist(&self, psi: &DirichletCharacter) -> Result<Self> {
        check_modulus(&self.module, psi)?;
        let components = self
            .module
            .elements()
            .map(|g| scale_by_value(&self.components[g as usize], psi.value(self.module.p_part(g) as i64)))
            .collect();
        Ok(ScalarFormDecomposition {
            module: self.module,
            character: psi.multiply(&self.character),
            weight2: self.weight2,
            components,
        })
    }

    /// Keeps the components at γ with `keep(γ)`, zeroing the rest.
    fn restricted(&self, keep: impl Fn(u64) -> bool) -> Self {
        let components = self
            .module
            .elements()
            .map(|g| {
                let c = &self.components[g as usize];
                if keep(g) {
                    c.clone()
                } else {
                    QSeries::zero(c.precision().clone())
                }
            })
            .collect();
        ScalarFormDecomposition { components, ..self.clone() }
    }

    /// Even part (γ₁ = 0, i.e. 4pQ(γ) even) and odd part of an order-2p decomposition.
    pub fn even_odd_parts(&self) -> Result<(Self, Self)> {
        if self.module.is_order_p() {
            return Err(Error::invalid("even and odd parts need an order-2p module"));
        }
        let m = self.module;
        Ok((self.restricted(|g| m.two_part(g) == 0), self.restricted(|g| m.two_part(g) == 1)))
    }
}

fn level_scale(a: &FiniteQuadraticModule) -> u64 {
    if a.is_order_p() {
        a.p()
    } else {
        4 * a.p()
    }
}

fn check_modulus(a: &FiniteQuadraticModule, chi: &DirichletCharacter) -> Result<()> {
    if chi.modulus() != a.p() {
        return Err(Error::ModulusMismatch { expected: a.p(), found: chi.modulus() });
    }
    Ok(())
}

fn scale_by_value(s: &QSeries, v: Option<RootOfUnity>) -> QSeries {
    match v {
        Some(z) => s.scale(&z.to_cyc()),
        None => QSeries::zero(s.precision().clone()),
    }
}

fn sum_series<'a>(it: impl Iterator<Item = &'a QSeries>) -> QSeries {
    QSeries::linear_combination(it.map(|s| (s, CycNumber::one())))
}

/// φ_χ(F) for a form on an order-p module: G_γ = χ(γ)F_γ(pτ).
pub fn phi_p(f: &VectorValuedForm, chi: &DirichletCharacter) -> Result<ScalarFormDecomposition> {
    if !f.module().is_order_p() {
        return Err(Error::invalid("phi_p needs a form on an order-p module"));
    }
    phi(f, chi)
}

/// φ_χ(F) for a form on an order-2p module: G_γ = χ(γ)F_γ(4pτ).
pub fn phi_2p(f: &VectorValuedForm, chi: &DirichletCharacter) -> Result<ScalarFormDecomposition> {
    if f.module().is_order_p() {
        return Err(Error::invalid("phi_2p needs a form on an order-2p module"));
    }
    phi(f, chi)
}

/// φ_χ(F) on either module size.
pub fn phi(f: &VectorValuedForm, chi: &DirichletCharacter) -> Result<ScalarFormDecomposition> {
    let a = *f.module();
    check_modulus(&a, chi)?;
    let n = level_scale(&a);
    let components = a
        .elements()
        .map(|g| scale_by_value(&f.component(g).scale_tau(n), chi.value(a.p_part(g) as i64)))
        .collect();
    Ok(ScalarFormDecomposition { module: a, character: chi.clone(), weight2: f.weight2(), components })
}

/// The classes γ with Nn/N ∈ ℤ − Q(γ), keyed by n mod N (N the level scale),
/// excluding γ with p | γ.
fn exponent_classes(a: &FiniteQuadraticModule) -> HashMap<u64, Vec<u64>> {
    let n = level_scale(a);
    let mut out: HashMap<u64, Vec<u64>> = HashMap::new();
    for g in a.elements() {
        if a.p_part(g) == 0 {
            continue;
        }
        // n/N ≡ −Q(γ) and level(A) = N
        let r = (n - a.q_numerator(g)) % n;
        out.entry(r).or_default().push(g);
    }
    out
}

/// The first exponent of `g` that violates the ε-condition, if any.
pub fn epsilon_violation(g: &QSeries, a: &FiniteQuadraticModule) -> Option<Rational> {
    let classes = exponent_classes(a);
    let n = level_scale(a) as i64;
    for (e, _) in g.iter() {
        if !e.is_integer() {
            return Some(e);
        }
        let k: i64 = e.to_integer().try_into().expect("exponent fits");
        if !classes.contains_key(&(k.rem_euclid(n) as u64)) {
            return Some(e);
        }
    }
    None
}

/// True iff every nonzero coefficient sits at an exponent allowed by some class γ (p ∤ γ).
pub fn epsilon_condition_check(g: &QSeries, a: &FiniteQuadraticModule) -> bool {
    epsilon_violation(g, a).is_none()
}

/// Splits a scalar series into its class pieces, half of each class to γ and half to −γ.
pub fn split_components(
    g: &QSeries,
    a: &FiniteQuadraticModule,
    chi: &DirichletCharacter,
    weight2: i64,
) -> Result<ScalarFormDecomposition> {
    check_modulus(a, chi)?;
    if let Some(e) = epsilon_violation(g, a) {
        return Err(Error::EpsilonCondition { exponent: e });
    }
    let classes = exponent_classes(a);
    let n = level_scale(a) as i64;
    let mut parts: Vec<Vec<(Rational, CycNumber)>> = vec![Vec::new(); a.order() as usize];
    for (e, c) in g.iter() {
        let k: i64 = e.to_integer().try_into().expect("exponent fits");
        let gammas = &classes[&(k.rem_euclid(n) as u64)];
        let share = c.scale(&rat(1, gammas.len() as i64));
        for &h in gammas {
            parts[h as usize].push((e.clone(), share.clone()));
        }
    }
    let components = parts.into_iter().map(|t| QSeries::from_terms(t, g.precision().clone())).collect();
    Ok(ScalarFormDecomposition { module: *a, character: chi.clone(), weight2, components })
}

/// Which combination of the order-2p W-transform is meant: G_ψ itself, or the twist
/// of G_ψ by (−1)^{γ₁} (even part minus odd part).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AlVariant {
    Plus,
    Minus,
}

/// w_β = Σ_γ η(γ)·s(γ)·ρ*(S)_{βγ}, with s(γ) = (−1)^{γ₁} for the minus variant.
fn s_matrix_weights(a: &FiniteQuadraticModule, eta: &DirichletCharacter, variant: AlVariant) -> Result<Vec<CycNumber>> {
    let s = PhaseMatrix::rho_s(a)?;
    let size = a.order() as usize;
    let mut out = Vec::with_capacity(size);
    let n = crate::arith::lcm(a.level(), crate::arith::lcm(eta.order(), 2));
    let one = int(1);
    for b in 0..size {
        let mut terms = Vec::new();
        for g in a.elements() {
            let Some(v) = eta.value(a.p_part(g) as i64) else { continue };
            let mut z = v.mul(&s.phase(b, g as usize).expect("dense S"));
            if variant == AlVariant::Minus && a.two_part(g) == 1 {
                z = z.mul(&RootOfUnity::e(1, 2));
            }
            terms.push((z.exponent_in(n) as i64, one.clone()));
        }
        out.push(CycNumber::from_terms(n, &terms).mul(s.scale()));
    }
    Ok(out)
}

/// e(k/4) = i^k for the weight k = weight2/2.
fn i_power(weight2: i64) -> RootOfUnity {
    RootOfUnity::e(weight2, 8)
}

/// G_ψ|W_{p²} for G = φ_χ(F), computed from F through ρ*(S):
/// Σ_γ ψχ(γ) Σ_β ρ*(S)_{βγ} F_β(pτ).
pub fn al_transform_p(f: &VectorValuedForm, chi: &DirichletCharacter, psi: &DirichletCharacter) -> Result<QSeries> {
    let a = *f.module();
    if !a.is_order_p() {
        return Err(Error::invalid("al_transform_p needs an order-p module"));
    }
    check_modulus(&a, chi)?;
    check_modulus(&a, psi)?;
    let w = s_matrix_weights(&a, &psi.multiply(chi), AlVariant::Plus)?;
    Ok(weighted_sum(f, &w, a.p()))
}

/// G_ψ|W_{16p²} (plus variant) or (G_ψ^even − G_ψ^odd)|W_{16p²} (minus variant) for
/// G = φ_χ(F), computed from F through ρ*(S): i^k Σ_γ s(γ)ψχ(γ) Σ_β ρ*(S)_{βγ} F_β(4pτ).
pub fn al_transform_2p(
    f: &VectorValuedForm,
    chi: &DirichletCharacter,
    psi: &DirichletCharacter,
    variant: AlVariant,
) -> Result<QSeries> {
    let a = *f.module();
    if a.is_order_p() {
        return Err(Error::invalid("al_transform_2p needs an order-2p module"));
    }
    check_modulus(&a, chi)?;
    check_modulus(&a, psi)?;
    let w = s_matrix_weights(&a, &psi.multiply(chi), variant)?;
    let ik = i_power(f.weight2()).to_cyc();
    let w: Vec<_> = w.iter().map(|x| x.mul(&ik)).collect();
    Ok(weighted_sum(f, &w, 4 * a.p()))
}

fn weighted_sum(f: &VectorValuedForm, w: &[CycNumber], n: u64) -> QSeries {
    let prec = &f.precision() * int(n as i64);
    let scaled: Vec<QSeries> = f.components().iter().map(|c| c.scale_tau(n)).collect();
    let sum = QSeries::linear_combination(scaled.iter().zip(w.iter().cloned()));
    sum.truncate(&prec)
}

/// The right-hand side of the Atkin–Lehner condition, computed from G alone.
///
/// Order p: conj(ψχ(2α))·g(ψχ)/√p·e(sig/8)·G_{ψ̄χ̄²}.
/// Order 2p: conj(ψχ(2α))·√2·g(ψχ)/√p·e(sig/8)·i^k·(G_{ψ̄χ̄²})^{even} (odd part for the minus variant).
pub fn al_expected(g: &ScalarFormDecomposition, psi: &DirichletCharacter, variant: AlVariant) -> Result<QSeries> {
    let a = *g.module();
    check_modulus(&a, psi)?;
    let eta = psi.multiply(g.character());
    let p = a.p();
    let two_alpha = (2 * a.alpha() % p) as i64;
    let gauss = eta.gauss_sum()?;
    let root = sqrt_squarefree(p)?;
    // 1/√p = √p/p
    let mut constant = gauss
        .mul(&root)
        .scale(&rat(1, p as i64))
        .mul_root(&eta.value(two_alpha).expect("2α is a unit").conj())
        .mul_root(&a.sig_root()?);
    let twist_char = psi.conjugate_char().multiply(&g.character().conjugate_char().pow(2));
    let twisted = g.twist(&twist_char)?;
    let target = if a.is_order_p() {
        twisted
    } else {
        constant = constant.mul(&crate::characters::sqrt_two()).mul_root(&i_power(g.weight2()));
        let (even, odd) = twisted.even_odd_parts()?;
        match variant {
            AlVariant::Plus => even,
            AlVariant::Minus => odd,
        }
    };
    Ok(target.total().scale(&constant))
}

/// Result of comparing both sides of the Atkin–Lehner condition for one ψ.
#[derive(Debug, Clone, PartialEq)]
pub struct AlCase {
    /// k with ψ(g) = e(k/(p−1)) on the least primitive root g.
    pub psi_index: u64,
    pub variant: AlVariant,
    /// Coefficients were compared below this exponent.
    pub compared_below: Rational,
    pub first_difference: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AlReport {
    pub cases: Vec<AlCase>,
}

impl AlReport {
    pub fn all_hold(&self) -> bool {
        self.cases.iter().all(|c| c.first_difference.is_none())
    }
}

/// Checks the Atkin–Lehner condition for G = φ_χ(F) and every ψ ≠ χ̄ mod p, the left side
/// from F via ρ*(S), the right side from G alone. With `required`, a comparison range
/// shorter than `required` is a precision error rather than a pass.
pub fn al_condition_check(f: &VectorValuedForm, chi: &DirichletCharacter, required: Option<&Rational>) -> Result<AlReport> {
    let a = *f.module();
    let g = phi(f, chi)?;
    let chibar = chi.conjugate_char();
    let variants: &[AlVariant] = if a.is_order_p() { &[AlVariant::Plus] } else { &[AlVariant::Plus, AlVariant::Minus] };
    let mut cases = Vec::new();
    for (k, psi) in DirichletCharacter::all_mod(a.p())?.into_iter().enumerate() {
        if psi == chibar {
            continue;
        }
        for &variant in variants {
            let lhs = if a.is_order_p() {
                al_transform_p(f, chi, &psi)?
            } else {
                al_transform_2p(f, chi, &psi, variant)?
            };
            let rhs = al_expected(&g, &psi, variant)?;
            let below = lhs.precision().clone().min(rhs.precision().clone());
            if let Some(req) = required {
                if below < *req {
                    return Err(Error::shortfall(req.clone(), below));
                }
            }
            cases.push(AlCase {
                psi_index: k as u64,
                variant,
                first_difference: lhs.first_difference(&rhs, None),
                compared_below: below,
            });
        }
    }
    Ok(AlReport { cases })
}

/// Order-p AL check (see [`al_condition_check`]).
pub fn al_condition_check_p(f: &VectorValuedForm, chi: &DirichletCharacter) -> Result<AlReport> {
    if !f.module().is_order_p() {
        return Err(Error::invalid("al_condition_check_p needs an order-p module"));
    }
    al_condition_check(f, chi, None)
}

/// Order-2p AL check (see [`al_condition_check`]).
pub fn al_condition_check_2p(f: &VectorValuedForm, chi: &DirichletCharacter) -> Result<AlReport> {
    if f.module().is_order_p() {
        return Err(Error::invalid("al_condition_check_2p needs an order-2p module"));
    }
    al_condition_check(f, chi, None)
}

/// F_γ(τ) = χ̄(γ)G_γ(τ/N) for γ with p ∤ γ.
fn inverse_unit_components(g: &ScalarFormDecomposition) -> Vec<QSeries> {
    let a = g.module();
    let n = int(g.level_scale() as i64);
    let chibar = g.character().conjugate_char();
    a.elements()
        .map(|h| {
            let c = g.component(h);
            let inv = c.substitute(&(int(1) / &n));
            scale_by_value(&inv, chibar.value(a.p_part(h) as i64))
        })
        .collect()
}

/// Inverse of φ_χ on order p. `al` is G_χ̄|W_{p²}, where G_χ̄ is the twist of G by χ̄;
/// it determines F₀ through G₀ = √p/(p−1)·e(−sig/8)·(G_χ̄|W_{p²}) + G_χ̄/(p−1).
pub fn phi_p_inverse(g: &ScalarFormDecomposition, al: &QSeries) -> Result<VectorValuedForm> {
    let a = *g.module();
    if !a.is_order_p() {
        return Err(Error::invalid("phi_p_inverse needs an order-p decomposition"));
    }
    let p = a.p();
    let mut comps = inverse_unit_components(g);
    let g_chibar = g.twist(&g.character().conjugate_char())?.total();
    let inv_sig = a.sig_root()?.conj();
    let c = sqrt_squarefree(p)?.mul_root(&inv_sig);
    let g0 = al.scale(&c).add(&g_chibar).scale_rational(&rat(1, p as i64 - 1));
    comps[0] = g0.substitute(&rat(1, p as i64));
    Ok(VectorValuedForm::new(a, g.weight2(), comps))
}

/// Inverse of φ_χ on order 2p. `al_plus` is G_χ̄|W_{16p²} and `al_minus` the same for
/// the (even − odd) combination; they determine F₀ and F_p through
/// F₀(4pτ) = (e(−k/4)e(−sig/8)√(2p)·al_plus + 2G_χ̄^even)/(2(p−1)) and the odd analogue.
pub fn phi_2p_inverse(g: &ScalarFormDecomposition, al_plus: &QSeries, al_minus: &QSeries) -> Result<VectorValuedForm> {
    let a = *g.module();
    if a.is_order_p() {
        return Err(Error::invalid("phi_2p_inverse needs an order-2p decomposition"));
    }
    let p = a.p();
    let mut comps = inverse_unit_components(g);
    let g_chibar = g.twist(&g.character().conjugate_char())?;
    let (even, odd) = g_chibar.even_odd_parts()?;
    let c = sqrt_squarefree(2 * p)?
        .mul_root(&a.sig_root()?.conj())
        .mul_root(&i_power(g.weight2()).conj());
    let scale = rat(1, 2 * (p as i64 - 1));
    let two = CycNumber::from_int(2);
    let f0 = al_plus.scale(&c).add(&even.total().scale(&two)).scale_rational(&scale);
    let fp = al_minus.scale(&c).add(&odd.total().scale(&two)).scale_rational(&scale);
    let sub = rat(1, 4 * p as i64);
    comps[0] = f0.substitute(&sub);
    comps[p as usize] = fp.substitute(&sub);
    Ok(VectorValuedForm::new(a, g.weight2(), comps))
}

/// The AL data needed by the inverse maps, produced from F.
pub fn inverse_al_data(f: &VectorValuedForm, chi: &DirichletCharacter) -> Result<Vec<QSeries>> {
    let chibar = chi.conjugate_char();
    if f.module().is_order_p() {
        Ok(vec![al_transform_p(f, chi, &chibar)?])
    } else {
        Ok(vec![
            al_transform_2p(f, chi, &chibar, AlVariant::Plus)?,
            al_transform_2p(f, chi, &chibar, AlVariant::Minus)?,
        ])
    }
}

/// φ_χ⁻¹ on either module size, with AL data as produced by [`inverse_al_data`].
pub fn phi_inverse(g: &ScalarFormDecomposition, al: &[QSeries]) -> Result<VectorValuedForm> {
    match (g.module().is_order_p(), al) {
        (true, [w]) => phi_p_inverse(g, w),
        (false, [plus, minus]) => phi_2p_inverse(g, plus, minus),
        _ => Err(Error::invalid("wrong number of AL series for this module")),
    }
}

/// JSON form {"module", "character", "weight", "components": [series per γ], "total"};
/// "total" is written for convenience and ignored on reading.
#[derive(Serialize)]
struct DecompositionOut<'a> {
    module: &'a FiniteQuadraticModule,
    character: &'a DirichletCharacter,
    weight: String,
    components: &'a [QSeries],
    total: QSeries,
}

#[derive(Deserialize)]
struct DecompositionIn {
    module: FiniteQuadraticModule,
    character: DirichletCharacter,
    weight: String,
    components: Vec<QSeries>,
}

impl Serialize for ScalarFormDecomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionOut {
            module: &self.module,
            character: &self.character,
            weight: rat(self.weight2, 2).to_string(),
            components: &self.components,
            total: self.total(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ScalarFormDecomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = DecompositionIn::deserialize(d)?;
        let w2 = parse_rational(&raw.weight).map_err(D::Error::custom)? * int(2);
        if !w2.is_integer() {
            return Err(D::Error::custom("weight must be a half-integer"));
        }
        if raw.components.len() as u64 != raw.module.order() {
            return Err(D::Error::custom("one component per module element is required"));
        }
        if raw.character.modulus() != raw.module.p() {
            return Err(D::Error::custom("character modulus does not match the module"));
        }
        Ok(ScalarFormDecomposition {
            module: raw.module,
            character: raw.character,
            weight2: w2.to_integer().try_into().map_err(D::Error::custom)?,
            components: raw.components,
        })
    }
}
