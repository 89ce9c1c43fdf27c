use num_bigint::{BigInt, BigUint};
use num_complex::Complex;
use num_traits::One;
use proptest::prelude::*;

use k3curves::bipoly::BiPoly;
use k3curves::glue;
use k3curves::homotopy::{self, MPoly, PolySystem, TrackerConfig};
use k3curves::local::{self, Length, LocalIdeal};
use k3curves::parse::{format_polynomial, parse_polynomial};
use k3curves::permgroup::{self, Permutation};
use k3curves::rng::SeedTree;
use k3curves::scalar::{rat, ratio};
use k3curves::series::{self, CuspType, IntSeries};

fn series_strategy(order: usize) -> impl Strategy<Value = IntSeries> {
    prop::collection::vec(-50i64..50, order + 1).prop_map(|c| IntSeries::from_i64(&c))
}

fn permutation(n: usize) -> impl Strategy<Value = Permutation> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle().prop_map(|v| Permutation::new(v).unwrap())
}

fn factorial(n: usize) -> BigUint {
    (1..=n).map(BigUint::from).product()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn series_product_is_a_commutative_monoid(a in series_strategy(12), b in series_strategy(12), c in series_strategy(12)) {
        let ab = a.try_mul(&b).unwrap();
        prop_assert_eq!(&ab, &b.try_mul(&a).unwrap());
        prop_assert_eq!(ab.try_mul(&c).unwrap(), a.try_mul(&b.try_mul(&c).unwrap()).unwrap());
        prop_assert_eq!(a.try_mul(&IntSeries::one(12)).unwrap(), a);
    }

    #[test]
    fn euler_powers_are_mutually_inverse(order in 1usize..30, e in 1i64..30) {
        let p = series::euler_factor_power(order, e).try_mul(&series::euler_factor_power(order, -e)).unwrap();
        prop_assert_eq!(p, IntSeries::one(order));
    }

    #[test]
    fn yau_zaslow_series_inverts_the_discriminant(order in 1usize..40) {
        let counts = IntSeries::from_coeffs(series::yau_zaslow_counts(order));
        let product = counts.try_mul(&series::discriminant(order)).unwrap();
        prop_assert_eq!(product, IntSeries::monomial(1, order));
    }

    #[test]
    fn beauville_multiplicity_is_symmetric(p in 1u32..25, q in 1u32..25) {
        prop_assume!(num_integer::gcd(p, q) == 1);
        let a = series::beauville_multiplicity(CuspType::new(p, q).unwrap());
        let b = series::beauville_multiplicity(CuspType::new(q, p).unwrap());
        prop_assert_eq!(&a, &b);
        prop_assert!(a >= BigInt::one());
    }

    #[test]
    fn monomial_ideals_have_box_colength(a in 1u32..7, b in 1u32..7) {
        let ideal = LocalIdeal::new(vec![BiPoly::term(rat(1), a, 0), BiPoly::term(rat(1), 0, b)]).unwrap();
        prop_assert_eq!(local::colength(&ideal), Length::Finite(u64::from(a * b)));
        let with_xy = ideal.with_generator(BiPoly::term(rat(1), 1, 1)).unwrap();
        prop_assert_eq!(local::colength(&with_xy), Length::Finite(u64::from(a + b - 1)));
    }

    #[test]
    fn brieskorn_milnor_numbers(a in 2u32..7, b in 2u32..7, c in 1i64..9) {
        let f = &BiPoly::term(rat(1), a, 0) + &BiPoly::term(rat(c), 0, b);
        prop_assert_eq!(local::milnor_number(&f).unwrap(), Length::Finite(u64::from((a - 1) * (b - 1))));
    }

    #[test]
    fn milnor_number_is_invariant_under_linear_changes(a in -4i64..5, b in 1i64..5) {
        let f = BiPoly::parse("y^2 - x^3").unwrap();
        let x = &BiPoly::x().scale(&rat(b)) + &BiPoly::y().scale(&rat(a));
        let y = BiPoly::y();
        let g = f.terms().fold(BiPoly::zero(), |acc, (e, c)| &acc + &(&x.pow(e.0) * &y.pow(e.1)).scale(c));
        prop_assert_eq!(local::milnor_number(&g).unwrap(), Length::Finite(2));
    }

    #[test]
    fn permutation_group_laws(p in permutation(9), q in permutation(9), r in permutation(9)) {
        prop_assert!(p.then(&p.inverse()).is_identity());
        prop_assert_eq!(p.then(&q).then(&r), p.then(&q.then(&r)));
        prop_assert_eq!(p.then(&q).inverse(), q.inverse().then(&p.inverse()));
        prop_assert_eq!(p.cycle_type().iter().sum::<usize>(), 9);
    }

    #[test]
    fn transitivity_survives_conjugation(gens in prop::collection::vec(permutation(7), 1..4), c in permutation(7)) {
        let conj: Vec<_> = gens.iter().map(|g| c.inverse().then(g).then(&c)).collect();
        prop_assert_eq!(permgroup::is_transitive(7, &gens).unwrap(), permgroup::is_transitive(7, &conj).unwrap());
        prop_assert_eq!(permgroup::schreier_sims_order(7, &gens).unwrap(), permgroup::schreier_sims_order(7, &conj).unwrap());
    }

    #[test]
    fn transposition_and_long_cycle_generate_everything(n in 2usize..12, c in permutation(11)) {
        let cycle: Vec<usize> = (0..n).map(|i| (i + 1) % n).collect();
        let gens = vec![Permutation::new(cycle).unwrap(), Permutation::transposition(n, 0, 1)];
        prop_assert_eq!(permgroup::schreier_sims_order(n, &gens).unwrap(), factorial(n));
        let order = permgroup::schreier_sims_order(11, &[c]).unwrap();
        prop_assert_eq!(factorial(11) % order, BigUint::from(0u8));
    }

    #[test]
    fn polynomial_text_round_trips(terms in prop::collection::vec(((0u32..4, 0u32..4, 0u32..4), -20i64..20, 1i64..6), 0..8)) {
        let names = ["x", "y", "z"];
        let p = MPoly::from_terms(3, terms.into_iter().map(|((a, b, c), n, d)| (vec![a, b, c], ratio(n, d))));
        prop_assert_eq!(parse_polynomial(&format_polynomial(&p, &names), &names).unwrap(), p);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn glued_surfaces_restrict_to_their_curves(seed in any::<u64>(), nc in 0usize..3, ncp in 0usize..3) {
        let mut rng = SeedTree::new(seed).stream("glue");
        let inp = glue::random_input(&mut rng, nc, ncp).unwrap();
        let out = glue::glue(&inp, &mut rng).unwrap();
        glue::verify(&inp, &out).unwrap();
        prop_assert_eq!(out.certificate.len(), nc + ncp);
    }

    #[test]
    fn products_of_linear_forms_recover_their_roots(roots in prop::collection::vec((-3i64..4, -3i64..4), 1..5), seed in any::<u64>()) {
        let mut distinct = roots.clone();
        distinct.sort();
        distinct.dedup();
        prop_assume!(distinct.len() == roots.len());
        let x = MPoly::var(1, 0);
        let f = roots.iter().fold(MPoly::constant(1, Complex::new(1.0, 0.0)), |acc, &(re, im)| {
            &acc * &(&x - &MPoly::constant(1, Complex::new(re as f64, im as f64)))
        });
        let sys = PolySystem::new(vec![f]).unwrap();
        let set = homotopy::solve(&sys, &TrackerConfig::default(), &mut SeedTree::new(seed).stream("solve")).unwrap();
        prop_assert_eq!(set.solutions.len(), roots.len());
        for &(re, im) in &roots {
            prop_assert!(set.solutions.iter().any(|s| (s.point[0] - Complex::new(re as f64, im as f64)).norm() < 1e-8));
        }
    }
}
