use k3fib_core::classifier::{classify, FibreKind};
use k3fib_core::invariants::{betti, canonical_degree, parity_check, FibrationData};
use k3fib_core::linalg::{det, smith_diagonal};
use k3fib_core::monodromy::{conj_invariants, gamma_matrix, local_monodromy, unipotent_power, CycInt, Mat3};
use k3fib_core::ratfunc::{critical_places, factor, ord_at, parse_ratfunc, Place, Polynomial, RationalFunction};
use k3fib_core::weierstrass::{canonicalize_quartic, weierstrass_equation, GammaValue, QuarticForm, WeierstrassDatum};
use k3fib_core::{GammaClass, LocalData, Q};
use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Q> {
    (-40i64..=40, 1i64..=12).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn nonzero_rational() -> impl Strategy<Value = Q> {
    rational().prop_filter("nonzero", |q| !q.is_zero())
}

fn polynomial(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec(rational(), 1..=max_deg + 1).prop_map(Polynomial::new)
}

fn nonzero_polynomial(max_deg: usize) -> impl Strategy<Value = Polynomial> {
    polynomial(max_deg).prop_filter("nonzero", |p| !p.is_zero())
}

fn function() -> impl Strategy<Value = RationalFunction> {
    (nonzero_polynomial(4), nonzero_polynomial(4)).prop_map(|(n, d)| RationalFunction::new(n, d).unwrap())
}

fn local_data() -> impl Strategy<Value = LocalData> {
    prop_oneof![
        (1u32..60, 0u32..12).prop_map(|(d, b)| LocalData::new(GammaClass::Zero, d, b)),
        (1u32..60, 0u32..12).prop_map(|(d, b)| LocalData::new(GammaClass::MinusOne, d, b)),
        (1u32..60, 0u32..12).prop_map(|(d, b)| LocalData::new(GammaClass::Infinity, d, b)),
        (0u32..12).prop_map(|b| LocalData::new(GammaClass::Generic, 0, b)),
    ]
}

fn cyc() -> impl Strategy<Value = CycInt> {
    (-50i64..=50, -50i64..=50).prop_map(|(a, b)| CycInt::new(a, b))
}

fn places_of(f: &RationalFunction) -> Vec<Place> {
    let mut out = vec![Place::Infinity];
    for p in [f.numerator(), f.denominator()] {
        if !p.is_constant() {
            out.extend(factor(p).unwrap().factors.into_iter().map(|(g, _)| Place::Finite(g)));
        }
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn printing_then_parsing_is_identity(f in function()) {
        let back = parse_ratfunc(&f.to_string()).unwrap();
        prop_assert_eq!(&back, &f);
        prop_assert_eq!(back.to_string(), f.to_string());
    }

    #[test]
    fn factors_multiply_back(p in nonzero_polynomial(6)) {
        let f = factor(&p).unwrap();
        prop_assert_eq!(f.expand(), p);
        for (g, e) in &f.factors {
            prop_assert!(g.is_monic() && *e >= 1);
            prop_assert!(Place::finite(g.clone()).is_some(), "{} is reducible", g);
        }
    }

    #[test]
    fn repeated_factors_are_found(p in nonzero_polynomial(3), q in nonzero_polynomial(2)) {
        prop_assume!(!q.is_constant());
        let prod = &(&p * &q) * &q;
        let f = factor(&prod).unwrap();
        prop_assert_eq!(f.expand(), prod);
        let total: u32 = f.factors.iter().filter(|(g, _)| q.monic().multiplicity_of(g) > 0).map(|(_, e)| *e).sum();
        prop_assert!(total >= 2);
    }

    #[test]
    fn principal_divisors_have_degree_zero(f in function()) {
        let total: i64 = places_of(&f).iter().map(|p| p.degree() as i64 * ord_at(&f, p).unwrap()).sum();
        prop_assert_eq!(total, 0);
    }

    #[test]
    fn critical_places_are_sorted_and_unique(g in function(), bp in function()) {
        prop_assume!(!g.is_constant());
        let places = critical_places(&g, &bp).unwrap();
        for w in places.windows(2) {
            prop_assert!((w[0].1.gamma_class, &w[0].0) < (w[1].1.gamma_class, &w[1].0));
        }
        let mut seen: Vec<&Place> = places.iter().map(|(p, _)| p).collect();
        seen.sort();
        seen.dedup();
        prop_assert_eq!(seen.len(), places.len());
        for (p, ld) in &places {
            prop_assert!(ld.is_valid());
            prop_assert!(ld.gamma_class != GammaClass::Generic || ld.b % 2 == 1, "{} kept with even b", p);
        }
    }

    #[test]
    fn data_from_rational_beta_has_even_parity(g in function(), bp in function()) {
        prop_assume!(!g.is_constant());
        let data = FibrationData::from_datum(&WeierstrassDatum::new(bp, g).unwrap()).unwrap();
        prop_assert!(parity_check(&data));
    }

    #[test]
    fn cyclotomic_ring_laws(a in cyc(), b in cyc(), c in cyc()) {
        prop_assert_eq!(a * (b + c), a * b + a * c);
        prop_assert_eq!((a * b) * c, a * (b * c));
        prop_assert_eq!(a * b, b * a);
        prop_assert_eq!((a * b).norm(), a.norm() * b.norm());
        prop_assert_eq!(a.to_string().parse::<CycInt>().unwrap(), a);
    }

    #[test]
    fn monodromy_structure(ld in local_data()) {
        let m = local_monodromy(&ld);
        let inv = conj_invariants(&m);
        prop_assert!(inv.det == 1 || inv.det == -1);
        let flipped = LocalData::new(ld.gamma_class, ld.d, ld.b + 1);
        prop_assert_eq!(local_monodromy(&flipped), -m);
        prop_assert_eq!(m, gamma_matrix(ld.gamma_class).pow(ld.d) * if ld.b % 2 == 1 { -Mat3::identity() } else { Mat3::identity() });
        if ld.gamma_class == GammaClass::Zero {
            let u = unipotent_power(ld.d as i64);
            prop_assert_eq!(m, if ld.b % 2 == 1 { -u } else { u });
        } else {
            prop_assert!(inv.finite_order.is_some_and(|k| 12 % k == 0));
        }
    }

    #[test]
    fn classification_matches_monodromy_and_is_periodic(ld in local_data()) {
        let rec = classify(&ld).unwrap();
        prop_assert_eq!(3 - rec.monodromy.fixed_rank() as u32, rec.r);
        prop_assert_eq!(classify(&LocalData::new(ld.gamma_class, ld.d, ld.b + 2)).unwrap(), rec.clone());
        if ld.gamma_class == GammaClass::Infinity {
            prop_assert_eq!(classify(&LocalData::new(ld.gamma_class, ld.d + 6, ld.b)).unwrap(), rec);
        }
    }

    #[test]
    fn canonicalization_inverts_the_normal_form(bp in nonzero_rational(), g in rational()) {
        let form = weierstrass_equation(&bp, &GammaValue::Finite(g.clone())).unwrap().form;
        prop_assume!(form.is_admissible());
        let c = canonicalize_quartic(&form).unwrap();
        prop_assert_eq!(c.beta_prime, bp);
        prop_assert_eq!(c.gamma, GammaValue::Finite(g));
    }

    #[test]
    fn rescaling_x(a in prop::array::uniform6(nonzero_rational()), t in nonzero_rational()) {
        let form = QuarticForm::new(a);
        let (c0, c1) = (canonicalize_quartic(&form).unwrap(), canonicalize_quartic(&form.rescale_x(&t)).unwrap());
        prop_assert_eq!(c1.gamma, c0.gamma);
        prop_assert_eq!(c1.beta_prime, &c0.beta_prime / (&t * &t));
    }

    #[test]
    fn canonical_degree_is_additive(a in prop::collection::vec((local_data(), 1u32..4), 0..6),
                                    b in prop::collection::vec((local_data(), 1u32..4), 0..6)) {
        let build = |list: &[(LocalData, u32)]| {
            let mut d = FibrationData::new(0, 6);
            for (ld, deg) in list {
                d.push(None, *deg, *ld).unwrap();
            }
            d
        };
        let joined: Vec<_> = a.iter().chain(&b).cloned().collect();
        // Each list carries the base term 2g - 2 + N/6 once.
        let base = canonical_degree(&build(&[]));
        prop_assert_eq!(canonical_degree(&build(&joined)), canonical_degree(&build(&a)) + canonical_degree(&build(&b)) - base);
    }

    #[test]
    fn starring_an_id_fibre(d in 1u32..40, deg in 1u32..5, rest in prop::collection::vec((local_data(), 1u32..4), 0..4)) {
        let build = |b: u32| {
            let mut data = FibrationData::new(0, 6);
            data.push(None, deg, LocalData::new(GammaClass::Zero, d, b)).unwrap();
            for (ld, dg) in &rest {
                data.push(None, *dg, *ld).unwrap();
            }
            data
        };
        let (plain, starred) = (build(0), build(1));
        prop_assert_eq!(plain.places[0].record.fibre_type.kind, FibreKind::Id(d));
        prop_assert_eq!(canonical_degree(&starred) - canonical_degree(&plain), Q::new(deg.into(), 2.into()));
        if let (Some(b0), Some(b1)) = (betti(&plain).b[3], betti(&starred).b[3]) {
            prop_assert_eq!(b1 - b0, deg as i64);
        }
    }

    #[test]
    fn betti_duality(list in prop::collection::vec((local_data(), 1u32..4), 0..6), g in 0u32..3) {
        let mut data = FibrationData::new(g, 6);
        for (ld, deg) in &list {
            data.push(None, *deg, *ld).unwrap();
        }
        let b = betti(&data);
        prop_assert_eq!(b.b[0], Some(1));
        prop_assert_eq!(b.b[6], Some(1));
        prop_assert_eq!(b.b[1], b.b[5]);
        prop_assert_eq!(b.b[2], b.b[4]);
        prop_assert_eq!(b.b[1], Some(2 * g as i64));
    }

    #[test]
    fn smith_diagonal_product_is_det(m in prop::array::uniform3(prop::array::uniform3(-9i64..=9))) {
        let rows: Vec<Vec<i64>> = m.iter().map(|r| r.to_vec()).collect();
        let dt = det(&rows);
        prop_assume!(!dt.is_zero());
        let s = smith_diagonal(&rows);
        prop_assert_eq!(s.iter().product::<BigInt>(), dt.abs());
        for w in s.windows(2) {
            prop_assert!((&w[1] % &w[0]).is_zero());
        }
    }
}
