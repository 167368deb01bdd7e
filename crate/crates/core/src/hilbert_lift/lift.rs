use std::collections::BTreeMap;

use num_integer::Roots;
use num_traits::{Signed, ToPrimitive};

use crate::characters::DirichletCharacter;
use crate::component_maps::phi;
use crate::error::{Error, Result};
use crate::exactnum::{frac, int, rat, CycNumber, Rational};
use crate::fqm_weil::VectorValuedForm;
use crate::qseries::QSeries;

use super::{HilbertContext, QuadElt};

fn check_source(f: &VectorValuedForm, ctx: &HilbertContext) -> Result<()> {
    if f.module() != ctx.source_module() {
        return Err(Error::invalid(format!(
            "form lives on {}, expected {}",
            f.module(),
            ctx.source_module()
        )));
    }
    for (g, c) in f.components().iter().enumerate() {
        if c.valuation().is_some_and(|v| v.is_negative()) {
            return Err(Error::invalid(format!("component {g} has a pole at the cusp")));
        }
    }
    Ok(())
}

fn ipow(n: i64, k: i64) -> Rational {
    int(n).pow(k as i32)
}

/// ΘF on the module of ℤ/2ℓℤ with Q(a) = −a²/(4ℓ), weight k + 1/2:
/// c̃(n, a) = Σ_{r ≡ ab (2ℓ)} c(n − r²/(4ℓp), γ_{a,r}).
pub fn theta_contract(f: &VectorValuedForm, ctx: &HilbertContext) -> Result<VectorValuedForm> {
    check_source(f, ctx)?;
    let (p, ell) = (ctx.p() as i64, ctx.ell() as i64);
    let m = 2 * ell;
    let prec = f.precision();
    let mut components = Vec::with_capacity(m as usize);
    for a in 0..m {
        let r0 = (a * ctx.b()).rem_euclid(m);
        let mut terms = Vec::new();
        let mut n = frac(&rat(a * a, 4 * ell));
        while n < prec {
            let mut total = CycNumber::zero();
            let bound = &n * int(4 * ell * p);
            // r runs over r0 + 2ℓℤ with r² ≤ 4ℓp·n
            let rmax = bound.floor().to_integer().to_i64().unwrap().sqrt();
            let mut r = -rmax + (r0 + rmax).rem_euclid(m);
            while r <= rmax {
                let e = &n - rat(r * r, 4 * ell * p);
                let idx = ctx.index_of(&ctx.gamma(a, r)?)?;
                total = total.add(&f.component(idx).coefficient(&e)?);
                r += m;
            }
            terms.push((n.clone(), total));
            n += int(1);
        }
        components.push(QSeries::from_terms(terms, prec.clone()));
    }
    Ok(VectorValuedForm::new(*ctx.target_module(), f.weight2() + 1, components))
}

/// Restriction of the Hilbert form attached to F to the diagonal, computed straight from
/// the coefficients of F: Σ_a Σ_n n^{k−1} D(a) q^{na} with
/// D(a) = Σ_{ν ≫ 0, Tr(νλ) = a} c(νν′, ν).
pub fn dn_restriction_direct(f: &VectorValuedForm, ctx: &HilbertContext, precision: i64) -> Result<QSeries> {
    check_source(f, ctx)?;
    if f.weight2() % 2 != 0 {
        return Err(Error::invalid("the source form must have integral weight"));
    }
    let k = f.weight2() / 2;
    let p = ctx.p() as i64;
    let (l1, l2) = (&ctx.lambda().x, &ctx.lambda().y);
    let mut out: BTreeMap<i64, CycNumber> = BTreeMap::new();
    for a in 1..precision {
        let vmax = l1 * int(2 * a) / int(ctx.ell() as i64);
        let mut d = CycNumber::zero();
        for v in (1i64..).take_while(|&v| int(v) < vmax) {
            // Vλ₁ + Uλ₂ = a
            let u = (int(a) - int(v) * l1) / l2;
            if !u.is_integer() {
                continue;
            }
            let u = u.to_integer().to_i64().unwrap();
            if (u - v) % 2 != 0 || p * v * v <= u * u {
                continue;
            }
            let nu = QuadElt::new(rat(v, 2), rat(u, 2 * p));
            let e = rat(p * v * v - u * u, 4 * p);
            d = d.add(&f.component(ctx.index_of(&nu)?).coefficient(&e)?);
        }
        if d.is_zero() {
            continue;
        }
        let mut n = 1;
        while n * a < precision {
            let entry = out.entry(n * a).or_default();
            *entry = entry.add(&d.scale(&ipow(n, k - 1)));
            n += 1;
        }
    }
    Ok(QSeries::from_terms(out.into_iter().map(|(e, c)| (int(e), c)), int(precision)))
}

/// The Shimura-type lift of a weight k + 1/2 form on ℤ/2ℓℤ:
/// Σ_{a≥1} Σ_{n≥1} c̃(a²/(4ℓ), a) n^{k−1} q^{na}.
pub fn shimura_lift(theta: &VectorValuedForm, precision: i64) -> Result<QSeries> {
    let a_mod = theta.module();
    if a_mod.is_order_p() || theta.weight2() % 2 == 0 {
        return Err(Error::invalid("expected a half-integral weight form on an order 2l module"));
    }
    let ell = a_mod.p() as i64;
    let k = (theta.weight2() - 1) / 2;
    let mut out: BTreeMap<i64, CycNumber> = BTreeMap::new();
    for a in 1..precision {
        let c = theta.component(a as u64).coefficient(&rat(a * a, 4 * ell))?;
        if c.is_zero() {
            continue;
        }
        let mut n = 1;
        while n * a < precision {
            let entry = out.entry(n * a).or_default();
            *entry = entry.add(&c.scale(&ipow(n, k - 1)));
            n += 1;
        }
    }
    Ok(QSeries::from_terms(out.into_iter().map(|(e, c)| (int(e), c)), int(precision)))
}

/// The same lift read off a scalar form g = φ_ψ(ΘF):
/// a_n = Σ_{d | n, ψ(d) ≠ 0} (n/d)^{k−1} c(d²)/(2ψ(d)), with a_n = 0 for ℓ | n when ℓ ≠ p.
pub fn scalar_shimura(
    g: &QSeries,
    psi: &DirichletCharacter,
    k: i64,
    p: u64,
    precision: i64,
) -> Result<QSeries> {
    let ell = psi.modulus() as i64;
    let mut terms = Vec::new();
    for n in 1..precision {
        if ell != p as i64 && n % ell == 0 {
            continue;
        }
        let mut c = CycNumber::zero();
        for d in crate::arith::divisors(n as u64) {
            let d = d as i64;
            let value = psi.evaluate(d);
            if value.is_zero() {
                continue;
            }
            let coeff = g.coefficient_int(d * d)?;
            if coeff.is_zero() {
                continue;
            }
            let inv = value.scale(&int(2)).invert()?;
            c = c.add(&coeff.mul(&inv).scale(&ipow(n / d, k - 1)));
        }
        terms.push((int(n), c));
    }
    Ok(QSeries::from_terms(terms, int(precision)))
}

/// Both sides of the identity expressing φ_ψ(ΘF) through a twisted theta product.
#[derive(Debug, Clone)]
pub struct ThetaProductReport {
    pub lhs: QSeries,
    pub rhs: QSeries,
    /// The product before U_p.
    pub product: QSeries,
    pub compared_below: Rational,
    pub first_difference: Option<Rational>,
}

impl ThetaProductReport {
    pub fn holds(&self) -> bool {
        self.first_difference.is_none()
    }
}

/// For ℓ ≠ p: φ_{ψℓ}(ΘF) = (2ψℓ(b))⁻¹ (φ_{ψ̄p}(F)(4ℓτ)·ϑ_{ψℓψp}) | U_p.
/// For ℓ = p: φ_{ψp}(ΘF) = (φ_{ψp}(F)(4pτ)·ϑ) | U_p, and `psi_ell` is ignored.
pub fn theta_product_check(
    f: &VectorValuedForm,
    ctx: &HilbertContext,
    psi_p: &DirichletCharacter,
    psi_ell: Option<&DirichletCharacter>,
) -> Result<ThetaProductReport> {
    let theta = theta_contract(f, ctx)?;
    let (p, ell) = (ctx.p(), ctx.ell());
    let (lhs, product, factor) = if ell == p {
        let lhs = phi(&theta, psi_p)?.total();
        let g = phi(f, psi_p)?.total().scale_tau(4 * p);
        let product = g.mul(&QSeries::theta(g.precision()));
        (lhs, product, CycNumber::one())
    } else {
        let psi_ell = psi_ell.ok_or_else(|| Error::invalid("a character mod ell is required"))?;
        let lhs = phi(&theta, psi_ell)?.total();
        let g = phi(f, &psi_p.conjugate_char())?.total().scale_tau(4 * ell);
        let chi = psi_ell.multiply(psi_p);
        let product = g.mul(&QSeries::theta_twisted(&chi, g.precision()));
        let factor = psi_ell.evaluate(ctx.b()).scale(&int(2)).invert()?;
        (lhs, product, factor)
    };
    let rhs = product.u_p(p)?.scale(&factor);
    let compared_below = lhs.precision().clone().min(rhs.precision().clone());
    let first_difference = lhs.first_difference(&rhs, None);
    Ok(ThetaProductReport { lhs, rhs, product, compared_below, first_difference })
}
