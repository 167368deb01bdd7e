//! Acceptance criteria 1-11, one PASS/FAIL line each. Printed values are transcribed
//! here independently of the library's own verify suite.

use std::process::ExitCode;

use num_complex::Complex64;
use num_traits::ToPrimitive;
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use weilcomp::arith::{is_prime, legendre};
use weilcomp::characters::DirichletCharacter;
use weilcomp::cli::verify::{perturb, randomize};
use weilcomp::component_maps::{al_condition_check, inverse_al_data, phi, phi_inverse};
use weilcomp::exactnum::{int, CycNumber, Rational};
use weilcomp::fixtures::{self, FixtureFile};
use weilcomp::fqm_weil::{FiniteQuadraticModule, VectorValuedForm};
use weilcomp::hilbert_lift::{
    dn_restriction_direct, scalar_shimura, shimura_lift, theta_contract, theta_product_check,
};
use weilcomp::qseries::QSeries;

/// Criteria whose failure is expected and explained in the README.
const KNOWN_UNATTAINABLE: [u8; 1] = [9];

/// Pair perturbations that no printed value can see, per fixture.
const UNSEEN_EX1: [&str; 2] = ["21/5", "24/5"];
const UNSEEN_EX2: usize = 15;

type Outcome = Result<String, String>;

fn printed(text: &str, through: i64) -> QSeries {
    QSeries::parse(text, int(through + 1)).unwrap()
}

fn matches(label: &str, got: &QSeries, text: &str, through: i64) -> Outcome {
    if got.precision() <= &int(through) {
        return Err(format!("{label}: known only below q^{}", got.precision()));
    }
    let want = printed(text, through);
    match got.first_difference(&want, Some(&int(through + 1))) {
        None => Ok(format!("{label} through q^{through}")),
        Some(e) => Err(format!("{label}: differs at q^{e}")),
    }
}

fn same(label: &str, a: &QSeries, b: &QSeries) -> Outcome {
    match a.first_difference(b, None) {
        None => Ok(label.to_string()),
        Some(e) => Err(format!("{label}: differ at q^{e}")),
    }
}

fn join(parts: Vec<Outcome>) -> Outcome {
    parts.into_iter().collect::<Result<Vec<_>, _>>().map(|v| v.join("; "))
}

struct Examples {
    ex1: FixtureFile,
    ex2: FixtureFile,
    psi5: DirichletCharacter,
    psi11: DirichletCharacter,
    psi13: DirichletCharacter,
}

impl Examples {
    fn load() -> Self {
        let ex1 = fixtures::load("example1").unwrap();
        let ex2 = fixtures::load("example2").unwrap();
        // ψ5(2) = i, ψ11(2) = e^{πi/5}, ψ13(2) = e^{πi/6}
        let psi5 = DirichletCharacter::from_exponent(5, 1, 4).unwrap();
        let psi11 = DirichletCharacter::from_exponent(11, 1, 10).unwrap();
        let psi13 = DirichletCharacter::from_exponent(13, 1, 12).unwrap();
        assert_eq!(psi5.evaluate(2), CycNumber::i());
        assert_eq!(psi11.evaluate(2), CycNumber::zeta(10, 1));
        assert_eq!(psi13.evaluate(2), CycNumber::zeta(12, 1));
        Examples { ex1, ex2, psi5, psi11, psi13 }
    }
}

const PHI1: &str = "2*q + 52*i*q^4 + 84*q^6 + 78*i*q^9 - 216*q^11 - 756*i*q^14 - 8*q^16";
const PRODUCT1: &str = "4*q^45 + 4*zeta20^7*q^48 - 4*zeta20*q^53 - 4*zeta20^4*q^60";
const AFTER_U5: &str = "4*q^9 - 4*zeta20^4*q^12 + 4*zeta20^18*q^16 + 4*zeta20^2*q^25 - 104*zeta20^2*q^36";
const THETA1: &str = "2*zeta20^6*q^9 + 2*q^12 + 2*zeta20^4*q^16 - 2*zeta20^18*q^25 + 52*zeta20^18*q^36";
const LIFT1: &str = "-q^3 + q^4 + q^5 + 10*q^6 - 10*q^8 - 121*q^9 + 98*q^10 + 275*q^12 + 32*q^13 + 140*q^14";
const PHI2: &str = "2*zeta12*q + 6*zeta12^3*q^3 - 14*zeta12^2*q^4 - 22*q^10 - 42*zeta12^4*q^12";
const PRODUCT2: &str = "2*zeta12*q^52 + 4*zeta12*q^53 + 4*zeta12*q^56";
const THETA2: &str = "2*zeta12*q^4 + 6*zeta12^3*q^12 - 14*zeta12^2*q^16 + 4*zeta12*q^17 + 12*zeta12^3*q^25";
const LIFT2: &str = "q^2 - 3*q^4 - 6*q^5 + 9*q^6 - q^8 + 6*q^9 + 57*q^10";

fn c1(x: &Examples) -> Outcome {
    let g = phi(&x.ex1.form, &x.psi5.conjugate_char()).unwrap().total();
    matches("phi_{conj psi5}(F)", &g, PHI1, 16)
}

fn c2(x: &Examples) -> Outcome {
    let g = phi(&x.ex1.form, &x.psi5.conjugate_char()).unwrap().total().scale_tau(44);
    let chi = x.psi11.multiply(&x.psi5);
    let product = g.mul(&QSeries::theta_twisted(&chi, g.precision()));
    // the twisted theta factor; the q^9 coefficient is -2*zeta20 (see README)
    let theta = QSeries::theta_twisted(&chi, &int(10));
    join(vec![
        matches("theta_chi", &theta, "2*q + 2*zeta20^7*q^4 - 2*zeta20*q^9", 9),
        matches("product", &product, PRODUCT1, 60),
    ])
}

fn c3(x: &Examples) -> Outcome {
    let g = phi(&x.ex1.form, &x.psi5.conjugate_char()).unwrap().total().scale_tau(44);
    let chi = x.psi11.multiply(&x.psi5);
    let after = g.mul(&QSeries::theta_twisted(&chi, g.precision())).u_p(5).unwrap();
    let two_psi_b = x.psi11.evaluate(7).scale(&int(2));
    let divided = after.scale(&two_psi_b.invert().unwrap());
    let theta = theta_contract(&x.ex1.form, x.ex1.context.as_ref().unwrap()).unwrap();
    let lhs = phi(&theta, &x.psi11).unwrap().total();
    join(vec![
        if two_psi_b == CycNumber::zeta(20, 4).scale(&int(-2)) { Ok("2 psi11(7) = -2 zeta20^4".into()) } else { Err("2 psi11(7)".into()) },
        matches("after U_5", &after, AFTER_U5, 36),
        matches("divided", &divided, THETA1, 36),
        matches("phi_{psi11}(theta F)", &lhs, THETA1, 36),
        same("both sides to full precision", &lhs, &divided),
    ])
}

fn c4(x: &Examples) -> Outcome {
    let ctx = x.ex1.context.as_ref().unwrap();
    let lift = shimura_lift(&theta_contract(&x.ex1.form, ctx).unwrap(), 15).unwrap();
    let direct = dn_restriction_direct(&x.ex1.form, ctx, 15).unwrap();
    join(vec![
        matches("Shimura lift", &lift, LIFT1, 14),
        matches("direct restriction", &direct, LIFT1, 14),
        same("routes agree", &lift, &direct),
    ])
}

fn c5(x: &Examples) -> Outcome {
    let ctx = x.ex2.context.as_ref().unwrap();
    let g = phi(&x.ex2.form, &x.psi13).unwrap().total();
    let product = g.scale_tau(52).mul(&QSeries::theta(&(g.precision() * int(52))));
    let rhs = product.u_p(13).unwrap();
    let theta = theta_contract(&x.ex2.form, ctx).unwrap();
    let lhs = phi(&theta, &x.psi13).unwrap().total();
    let report = theta_product_check(&x.ex2.form, ctx, &x.psi13, None).unwrap();
    let lift = shimura_lift(&theta, 11).unwrap();
    join(vec![
        matches("phi_{psi13}(F)", &g, PHI2, 12),
        matches("product", &product, PRODUCT2, 56),
        matches("phi_{psi13}(theta F)", &lhs, THETA2, 25),
        same("no factor 2 on the product side", &lhs, &rhs),
        same("library identity", &report.lhs, &report.rhs),
        matches("Shimura lift", &lift, LIFT2, 10),
        matches("direct restriction", &dn_restriction_direct(&x.ex2.form, ctx, 11).unwrap(), LIFT2, 10),
        matches("scalar read-off", &scalar_shimura(&lhs, &x.psi13, 3, 13, 11).unwrap(), LIFT2, 10),
    ])
}

fn odd_primes() -> impl Iterator<Item = u64> {
    (3..50u64).filter(|&p| is_prime(p))
}

fn modules() -> Vec<FiniteQuadraticModule> {
    let mut out = Vec::new();
    for p in odd_primes() {
        let n = (2..p as i64).find(|&a| legendre(a, p) == -1).unwrap();
        for alpha in [1, n] {
            out.push(FiniteQuadraticModule::order_p(p, alpha).unwrap());
            out.push(FiniteQuadraticModule::order_2p(p, alpha, 1).unwrap());
            out.push(FiniteQuadraticModule::order_2p(p, alpha, -1).unwrap());
        }
    }
    out
}

fn e(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, 2.0 * std::f64::consts::PI * x)
}

fn f(r: &Rational) -> f64 {
    r.to_f64().unwrap()
}

/// Signature from a floating Gauss sum: the nearest eighth root of unity.
fn float_signature(a: &FiniteQuadraticModule) -> u8 {
    let g: Complex64 = a.elements().map(|x| e(f(&a.q_value(x)))).sum();
    let g = g / (a.order() as f64).sqrt();
    assert!((g.norm() - 1.0).abs() < 1e-9);
    (g.arg() / (2.0 * std::f64::consts::PI) * 8.0).round().rem_euclid(8.0) as u8
}

/// Closed form: 0, 4, 2, 6 for (p mod 4, ε) = (1,+), (1,−), (3,+), (3,−), plus δ for order 2p.
fn table(a: &FiniteQuadraticModule) -> u8 {
    let base = match (a.p() % 4, a.epsilon()) {
        (1, 1) => 0,
        (1, _) => 4,
        (3, 1) => 2,
        _ => 6,
    };
    ((base + a.delta().unwrap_or(0)).rem_euclid(8)) as u8
}

fn c6() -> Outcome {
    let mut cells = std::collections::BTreeSet::new();
    for a in modules() {
        let exact = a.signature().map_err(|e| e.to_string())?;
        if exact != float_signature(&a) || exact != table(&a) {
            return Err(format!("{a}: exact {exact}, float {}, table {}", float_signature(&a), table(&a)));
        }
        cells.insert((a.is_order_p(), a.p() % 4, a.epsilon(), a.delta()));
    }
    if cells.len() != 12 {
        return Err(format!("only {} of 12 table cells covered", cells.len()));
    }
    Ok("all 4 + 8 table cells for every odd p < 50".into())
}

type M = Vec<Vec<Complex64>>;

fn mat_mul(a: &M, b: &M) -> M {
    let n = a.len();
    (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

fn close(a: &M, b: &M) -> bool {
    a.iter().flatten().zip(b.iter().flatten()).all(|(x, y)| (x - y).norm() < 1e-8)
}

/// The relations with floating matrices built straight from Q and its bilinear form.
fn float_relations(a: &FiniteQuadraticModule) -> bool {
    let n = a.order() as usize;
    let sig = float_signature(a) as f64;
    let s: M = (0..n)
        .map(|b| (0..n).map(|g| e(sig / 8.0 + f(&a.bilinear(b as u64, g as u64))) / (n as f64).sqrt()).collect())
        .collect();
    let t: M = (0..n)
        .map(|b| (0..n).map(|g| if b == g { e(-f(&a.q_value(g as u64))) } else { Complex64::new(0.0, 0.0) }).collect())
        .collect();
    let sh: M = (0..n).map(|i| (0..n).map(|j| s[j][i].conj()).collect()).collect();
    let id: M = (0..n).map(|i| (0..n).map(|j| Complex64::new((i == j) as u8 as f64, 0.0)).collect()).collect();
    let s2 = mat_mul(&s, &s);
    let neg: M = (0..n)
        .map(|i| (0..n).map(|j| if a.neg(j as u64) == i as u64 { e(sig / 4.0) } else { Complex64::new(0.0, 0.0) }).collect())
        .collect();
    let st = mat_mul(&s, &t);
    close(&mat_mul(&s, &sh), &id) && close(&s2, &neg) && close(&mat_mul(&mat_mul(&st, &st), &st), &s2)
}

fn c7() -> Outcome {
    let mut count = 0;
    for a in modules() {
        let r = a.check_weil_relations().map_err(|e| e.to_string())?;
        if !r.all_hold() {
            return Err(format!("{a}: {r:?}"));
        }
        if a.p() <= 13 && !float_relations(&a) {
            return Err(format!("{a}: floating oracle disagrees"));
        }
        count += 1;
    }
    Ok(format!("exact relations on {count} modules, floating cross-check for p <= 13"))
}

fn round_trip(f: &VectorValuedForm, chi: &DirichletCharacter, tag: &str) -> Outcome {
    let g = phi(f, chi).unwrap();
    let back = phi_inverse(&g, &inverse_al_data(f, chi).unwrap()).unwrap();
    for (i, (x, y)) in back.components().iter().zip(f.components()).enumerate() {
        if let Some(e) = x.first_difference(y, None) {
            return Err(format!("{tag}: inverse after phi, component {i}, q^{e}"));
        }
        if *x.precision() < f.precision() {
            return Err(format!("{tag}: component {i} lost precision"));
        }
    }
    let again = phi(&back, chi).unwrap();
    for (x, y) in again.components().iter().zip(g.components()) {
        if let Some(e) = x.first_difference(y, None) {
            return Err(format!("{tag}: phi after inverse, q^{e}"));
        }
    }
    Ok(tag.to_string())
}

fn c8(x: &Examples) -> Outcome {
    let t1 = theta_contract(&x.ex1.form, x.ex1.context.as_ref().unwrap()).unwrap();
    let t2 = theta_contract(&x.ex2.form, x.ex2.context.as_ref().unwrap()).unwrap();
    join(vec![
        round_trip(&x.ex1.form, &x.psi5.conjugate_char(), "order 5"),
        round_trip(&x.ex2.form, &x.psi13, "order 13"),
        round_trip(&t1, &x.psi11, "order 22"),
        round_trip(&t2, &x.psi13, "order 26"),
    ])
}

/// Whether any printed value or the AL condition notices the change.
fn noticed(x: &Examples, ex1: bool, f: &VectorValuedForm) -> bool {
    if !f.validate().unwrap().is_empty() {
        return true;
    }
    let (fx, chi) = if ex1 { (&x.ex1, x.psi5.conjugate_char()) } else { (&x.ex2, x.psi13.clone()) };
    let ctx = fx.context.as_ref().unwrap();
    let theta = theta_contract(f, ctx).unwrap();
    let g = phi(f, &chi).unwrap().total();
    let seen = if ex1 {
        let lhs = phi(&theta, &x.psi11).unwrap().total();
        let lift = shimura_lift(&theta, 15).unwrap();
        matches("", &g, PHI1, 16).is_err() || matches("", &lhs, THETA1, 36).is_err() || matches("", &lift, LIFT1, 14).is_err()
    } else {
        let lhs = phi(&theta, &x.psi13).unwrap().total();
        let lift = shimura_lift(&theta, 11).unwrap();
        matches("", &g, PHI2, 12).is_err() || matches("", &lhs, THETA2, 25).is_err() || matches("", &lift, LIFT2, 10).is_err()
    };
    seen || !al_condition_check(f, &chi, None).unwrap().all_hold()
}

fn support(f: &VectorValuedForm) -> Vec<(u64, u64, Rational)> {
    let a = f.module();
    let mut out = Vec::new();
    for g in a.elements().filter(|&g| a.neg(g) > g) {
        let mut e = weilcomp::exactnum::frac(&-a.q_value(g));
        while &e < f.component(g).precision() {
            out.push((g, a.neg(g), e.clone()));
            e += int(1);
        }
    }
    out
}

/// Returns (outcome, whether the failure is exactly the documented one).
fn c9(x: &Examples) -> (Outcome, bool) {
    for (fx, chi) in [(&x.ex1, x.psi5.conjugate_char()), (&x.ex2, x.psi13.clone())] {
        let r = al_condition_check(&fx.form, &chi, None).unwrap();
        let expected_cases = fx.form.module().p() as usize - 2;
        if !r.all_hold() || r.cases.len() != expected_cases {
            return (Err("AL condition fails on a fixture".into()), false);
        }
    }
    let mut unseen = [Vec::new(), Vec::new()];
    for (i, fx) in [&x.ex1, &x.ex2].into_iter().enumerate() {
        for (g, h, e) in support(&fx.form) {
            let single = fx.form.with_component(g, fx.form.component(g).add(&QSeries::monomial(CycNumber::one(), e.clone(), int(100))));
            if !noticed(x, i == 0, &single) {
                return (Err(format!("single entry q^{e} at class {g} unnoticed")), false);
            }
            if !noticed(x, i == 0, &perturb(&fx.form, g, h, &e, 1)) {
                unseen[i].push(e.to_string());
            }
        }
    }
    let documented = unseen[0] == UNSEEN_EX1 && unseen[1].len() == UNSEEN_EX2;
    let detail = format!(
        "AL condition holds for all psi != conj(chi) on both fixtures; every single-entry change is caught; \
         but consistent changes of a printed pair series at {:?} (example 1) and {} exponents (example 2) \
         reach no printed coefficient, and every internal identity is linear in F",
        unseen[0],
        unseen[1].len()
    );
    if unseen.iter().all(Vec::is_empty) {
        (Ok(detail), true)
    } else {
        (Err(detail), documented)
    }
}

fn c10(rng: &mut StdRng) -> Outcome {
    for p in [3u64, 5, 7, 11, 13] {
        let chars = DirichletCharacter::all_mod(p).unwrap();
        for chi in &chars {
            let g = chi.gauss_sum().unwrap();
            let norm = g.mul(&chi.conjugate_char().gauss_sum().unwrap());
            let want = if chi.is_trivial() { CycNumber::one() } else { chi.evaluate(-1).scale(&int(p as i64)) };
            if norm != want {
                return Err(format!("Gauss sum norm mod {p}"));
            }
            for psi in &chars {
                let s: CycNumber = (1..p as i64).map(|n| chi.evaluate(n).mul(&psi.evaluate(n).conjugate())).sum();
                let want = if chi == psi { p as i64 - 1 } else { 0 };
                if s != CycNumber::from_int(want) {
                    return Err(format!("orthogonality mod {p}"));
                }
            }
        }
    }
    let mut series = || {
        let prec = rng.gen_range(3..10i64);
        let terms: Vec<(i64, i64)> = (0..prec).map(|e| (e, rng.gen_range(-20..21))).collect();
        QSeries::from_int_terms(&terms, prec).scale(&CycNumber::zeta(rng.gen_range(1..25), rng.gen_range(0..24)))
    };
    for _ in 0..25 {
        let (a, b, c) = (series(), series(), series());
        if !a.mul(&b.add(&c)).agrees_with(&a.mul(&b).add(&a.mul(&c)))
            || !a.mul(&b).mul(&c).agrees_with(&a.mul(&b.mul(&c)))
            || !a.mul(&b).agrees_with(&b.mul(&a))
            || !a.add(&b).sub(&b).agrees_with(&a)
        {
            return Err("ring law".into());
        }
        for m in [2u64, 3, 5, 13] {
            if !a.scale_tau(m).u_p(m).unwrap().agrees_with(&a) {
                return Err(format!("U_{m} after tau -> {m} tau"));
            }
        }
    }
    Ok("Gauss-sum norms (trivial character: 1), orthogonality for p <= 13, ring laws and U_m on 25 random triples".into())
}

fn c11(x: &Examples, rng: &mut StdRng) -> Outcome {
    let ctx = x.ex1.context.as_ref().unwrap();
    for round in 0..20 {
        let f = randomize(&x.ex1.form, rng);
        if f.is_zero() || !f.validate().unwrap().is_empty() {
            return Err(format!("assignment {round} is degenerate"));
        }
        let lift = shimura_lift(&theta_contract(&f, ctx).unwrap(), 15).unwrap();
        let direct = dn_restriction_direct(&f, ctx, 15).unwrap();
        if let Some(e) = lift.first_difference(&direct, None) {
            return Err(format!("assignment {round}: differ at q^{e}"));
        }
    }
    Ok("20 random assignments on the example 1 support lattice".into())
}

fn main() -> ExitCode {
    let x = Examples::load();
    let mut rng = StdRng::seed_from_u64(0x5eed);
    let (o9, documented9) = c9(&x);
    let results: Vec<(u8, &str, Outcome)> = vec![
        (1, "example 1 component sum", c1(&x)),
        (2, "example 1 theta product", c2(&x)),
        (3, "example 1 U_5 and division", c3(&x)),
        (4, "example 1 Shimura lift and restriction", c4(&x)),
        (5, "example 2 pipeline", c5(&x)),
        (6, "signature tables", c6()),
        (7, "Weil representation relations", c7()),
        (8, "round trips", c8(&x)),
        (9, "AL condition and fault injection", o9),
        (10, "property suites", c10(&mut rng)),
        (11, "structural linearity", c11(&x, &mut rng)),
    ];
    let mut unexpected = 0;
    for (id, name, r) in &results {
        match r {
            Ok(d) => println!("PASS criterion {id} ({name}): {d}"),
            Err(d) => {
                println!("FAIL criterion {id} ({name}): {d}");
                let known = KNOWN_UNATTAINABLE.contains(id) && (*id != 9 || documented9);
                if !known {
                    unexpected += 1;
                }
            }
        }
    }
    if unexpected > 0 {
        println!("{unexpected} unexpected failure(s)");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
