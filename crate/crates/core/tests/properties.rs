use proptest::prelude::*;

use weilcomp::characters::DirichletCharacter;
use weilcomp::exactnum::{int, rat, CycNumber, Rational};
use weilcomp::hilbert_lift::QuadElt;
use weilcomp::qseries::QSeries;

const CONDUCTORS: [u64; 6] = [1, 4, 5, 12, 20, 39];

fn cyc() -> impl Strategy<Value = CycNumber> {
    (prop::sample::select(CONDUCTORS.to_vec()), prop::collection::vec((0i64..40, -6i64..7, 1i64..4), 0..5))
        .prop_map(|(n, ts)| {
            let terms: Vec<(i64, Rational)> = ts.into_iter().map(|(e, a, b)| (e, rat(a, b))).collect();
            CycNumber::from_terms(n, &terms)
        })
}

fn series() -> impl Strategy<Value = QSeries> {
    (prop::collection::vec((0i64..30, cyc()), 0..6), 20i64..40).prop_map(|(ts, prec)| {
        QSeries::from_terms(ts.into_iter().map(|(e, c)| (rat(e, 3), c)), rat(prec, 3))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn field_axioms(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert_eq!(a.mul(&b).mul(&c), a.mul(&b.mul(&c)));
        prop_assert_eq!(a.mul(&b.add(&c)), a.mul(&b).add(&a.mul(&c)));
        prop_assert!(a.sub(&a).is_zero());
        if !a.is_zero() {
            prop_assert!(a.mul(&a.invert().unwrap()).is_one());
        }
    }

    #[test]
    fn conjugation_and_galois_are_ring_maps(a in cyc(), b in cyc(), t in prop::sample::select(vec![1i64, 7, 11, 17, 29])) {
        prop_assert_eq!(a.mul(&b).conjugate(), a.conjugate().mul(&b.conjugate()));
        prop_assert_eq!(a.add(&b).galois(t), a.galois(t).add(&b.galois(t)));
        prop_assert_eq!(a.mul(&b).galois(t), a.galois(t).mul(&b.galois(t)));
    }

    #[test]
    fn complex_values_agree(a in cyc(), b in cyc()) {
        let z = a.mul(&b).to_complex() - a.to_complex() * b.to_complex();
        prop_assert!(z.norm() < 1e-9);
    }

    #[test]
    fn series_ring_laws(f in series(), g in series(), h in series()) {
        prop_assert!(f.add(&g).agrees_with(&g.add(&f)));
        prop_assert!(f.mul(&g).agrees_with(&g.mul(&f)));
        prop_assert!(f.mul(&g.add(&h)).agrees_with(&f.mul(&g).add(&f.mul(&h))));
        prop_assert!(f.mul(&g).mul(&h).agrees_with(&f.mul(&g.mul(&h))));
    }

    #[test]
    fn u_undoes_scale_tau(f in series(), m in 1u64..8) {
        let g = f.scale_tau(3);
        let back = g.scale_tau(m).u_p(m).unwrap();
        prop_assert_eq!(back.first_difference(&g, None), None);
        prop_assert!(back.precision() >= g.precision());
        if f.denominator() != 1 {
            prop_assert!(f.u_p(m).is_err());
        }
    }

    #[test]
    fn characters_are_multiplicative(p in prop::sample::select(vec![3u64, 5, 7, 11, 13]), k in 0i64..12, m in 1i64..200, n in 1i64..200) {
        let chi = DirichletCharacter::from_exponent(p, k, p - 1).unwrap();
        let prod = chi.evaluate(m * n);
        prop_assert_eq!(prod, chi.evaluate(m).mul(&chi.evaluate(n)));
    }

    #[test]
    fn quadratic_norm_is_multiplicative(p in prop::sample::select(vec![5u64, 13, 17]), v in prop::collection::vec(-9i64..10, 4)) {
        let x = QuadElt::new(rat(v[0], 2), rat(v[1], 2));
        let y = QuadElt::new(int(v[2]), int(v[3]));
        prop_assert_eq!(x.mul(&y, p).norm(p), x.norm(p) * y.norm(p));
        prop_assert_eq!(x.add(&y).trace(), x.trace() + y.trace());
    }
}
