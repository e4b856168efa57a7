use proptest::prelude::*;

use ratdyn::dynpair::{conjugacies, multiplier_polynomial};
use ratdyn::fibercurve::{genus, genus_count, irreducibility_criterion};
use ratdyn::monodromy::monodromy_group;
use ratdyn::orbifold::{canonical_orbifolds, is_covering};
use ratdyn::poly::{resultant, resultant_bivariate, Poly};
use ratdyn::symmetry::sigma_quadratic;
use ratdyn::{parse_map, Config, DoubleDouble, GaussMap, GaussPoly, GaussRat, Mobius, Real};
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive};

fn gauss() -> impl Strategy<Value = GaussRat> {
    (-5i64..=5, -5i64..=5).prop_map(|(a, b)| GaussRat::from_ints(a, b))
}

fn poly(deg: usize) -> impl Strategy<Value = GaussPoly> {
    prop::collection::vec(gauss(), deg + 1).prop_map(GaussPoly::new)
}

fn map_of_degree(m: usize) -> impl Strategy<Value = GaussMap> {
    (poly(m), poly(m)).prop_filter_map("degenerate", move |(p, q)| {
        let a = GaussMap::new(p, q).ok()?;
        (a.degree() == m).then_some(a)
    })
}

fn mobius() -> impl Strategy<Value = Mobius<GaussRat>> {
    (gauss(), gauss(), gauss(), gauss()).prop_filter_map("singular", |(a, b, c, d)| Mobius::new(a, b, c, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn printed_maps_parse_back(a in (2usize..=4).prop_flat_map(map_of_degree)) {
        let back: GaussMap = parse_map(&a.to_string()).unwrap();
        prop_assert_eq!(back, a);
    }

    #[test]
    fn involution_fixes_quadratics(a in map_of_degree(2)) {
        let mu = sigma_quadratic(&a).unwrap();
        prop_assert_eq!(a.pre_mobius(&mu), a);
        prop_assert!(mu.compose(&mu).is_identity());
    }

    #[test]
    fn composition_is_associative(a in map_of_degree(2), b in map_of_degree(2), c in map_of_degree(1)) {
        prop_assert_eq!(a.compose(&b).compose(&c), a.compose(&b.compose(&c)));
        prop_assert_eq!(a.compose(&b).degree(), 4);
    }

    #[test]
    fn resultant_is_antisymmetric_in_odd_degree(f in poly(3), g in poly(2)) {
        prop_assume!(f.deg() == 3 && g.deg() == 2);
        prop_assert_eq!(resultant(&f, &g), resultant(&g, &f));
        let f5 = f.clone() * &g;
        prop_assert_eq!(resultant(&f5, &g), GaussRat::from_ints(0, 0));
    }

    #[test]
    fn bivariate_resultant_agrees_with_subresultants(f in prop::collection::vec(poly(2), 3), g in prop::collection::vec(poly(1), 2..=3)) {
        let (f, g) = (Poly::new(f), Poly::new(g));
        prop_assert_eq!(resultant_bivariate(&f, &g), resultant(&f, &g));
    }

    #[test]
    fn double_double_ops_are_accurate(n in prop::collection::vec(-1_000_000i64..=1_000_000, 4), d in prop::collection::vec(1i64..=1_000_000, 4)) {
        let q: Vec<BigRational> = n.iter().zip(&d).map(|(a, b)| BigRational::new((*a).into(), (*b).into())).collect();
        let x = DoubleDouble::from_rational(&q[0], 106);
        let y = DoubleDouble::from_rational(&q[1], 106);
        let checks = [
            (x + y, x.to_rational() + y.to_rational()),
            (x - y, x.to_rational() - y.to_rational()),
            (x * y, x.to_rational() * y.to_rational()),
        ];
        for (got, exact) in checks {
            let err = (got.to_rational() - &exact).abs().to_f64().unwrap();
            prop_assert!(err <= exact.abs().to_f64().unwrap() * 2f64.powi(-100) + 1e-300, "{got:?} vs {exact}");
        }
        let z = DoubleDouble::from_rational(&q[2], 106);
        if n[3] != 0 {
            let w = DoubleDouble::from_rational(&q[3], 106);
            let exact = z.to_rational() / w.to_rational();
            let err = ((z / w).to_rational() - &exact).abs().to_f64().unwrap();
            prop_assert!(err <= exact.abs().to_f64().unwrap() * 2f64.powi(-100) + 1e-300);
        }
    }

    #[test]
    fn multipliers_are_conjugacy_invariant(a in map_of_degree(2), al in mobius()) {
        let b = al.conj_map(&a);
        prop_assert_eq!(multiplier_polynomial(&a), multiplier_polynomial(&b));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn genus_is_symmetric_and_integral(a in map_of_degree(2), b in map_of_degree(3)) {
        prop_assert!(irreducibility_criterion(&a, &b).is_some());
        let g = genus(&a, &b).unwrap();
        prop_assert_eq!(g.clone(), genus(&b, &a).unwrap());
        prop_assert!(g.is_integer() && !num_traits::Signed::is_negative(&g));
        prop_assert_eq!(genus_count(&a, &b).euler_characteristic() % 2, 0);
    }

    #[test]
    fn canonical_orbifolds_cover(a in (2usize..=3).prop_flat_map(map_of_degree)) {
        let (o1, o2) = canonical_orbifolds(&a);
        prop_assert!(is_covering(&a, &o1, &o2));
        let m = num_rational::BigRational::from_integer((a.degree() as i64).into());
        prop_assert_eq!(o1.euler_characteristic(), o2.euler_characteristic() * m);
    }

    #[test]
    fn conjugacies_verify(a in map_of_degree(2), al in mobius()) {
        let cfg = Config::default();
        let b = al.conj_map(&a);
        let found = conjugacies(&a, &b, &cfg).unwrap();
        prop_assert!(found.contains(&al));
        for f in &found {
            prop_assert_eq!(b.pre_mobius(f), a.post_mobius(f));
            // and back
            prop_assert_eq!(a.pre_mobius(&f.inverse()), b.post_mobius(&f.inverse()));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn monodromy_generators_multiply_to_one(a in map_of_degree(3)) {
        let g = monodromy_group(&a, &Config::default()).unwrap();
        prop_assert!(g.product_is_identity());
        prop_assert!(g.is_transitive());
        if a.is_simple() {
            prop_assert_eq!(g.order(), 6u32.into());
        }
    }
}
