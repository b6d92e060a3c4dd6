//! Cross-module invariants, each checked against an independent computation.

use std::collections::BTreeSet;
use std::sync::Arc;

use ffk::csa::SymbolAlgebra;
use ffk::kochen::{self, gamma, is_one_one_place, KochenContext, KochenValue};
use ffk::laurent::{hensel_nth_root, LaurentSeries};
use ffk::local::LocalData;
use ffk::parse::parse_poly;
use ffk::places::{parse_place, split_type, support, Place};
use ffk::polyring::{enumerate_pn_plus, monic_irreducibles};
use ffk::tower::{conjugates, TowerElement, TowerSpec};
use ffk::{Field, Polynomial, RationalFunction};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn f5() -> Field {
    Field::prime(5).unwrap()
}

fn f7() -> Field {
    Field::prime(7).unwrap()
}

fn f9() -> Field {
    Field::new(3, 2, None).unwrap()
}

fn spec(field: &Field, n: u64, levels: &[&str]) -> Arc<TowerSpec> {
    TowerSpec::new(
        field,
        n,
        levels
            .iter()
            .map(|s| parse_poly(field, s).unwrap())
            .collect(),
    )
    .unwrap()
}

fn random_element(spec: &Arc<TowerSpec>, height: usize, seed: u64) -> TowerElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let coeffs = (0..spec.degree())
        .map(|_| RationalFunction::random(spec.field(), height, &mut rng))
        .collect();
    TowerElement::from_coeffs(spec, coeffs).unwrap()
}

fn at_infinity(r: &RationalFunction, prec: usize) -> LaurentSeries {
    let num = LaurentSeries::from_poly_at_infinity(r.num());
    let den = LaurentSeries::from_poly_at_infinity(r.den());
    num.div(&den, prec).unwrap()
}

/// Towers whose levels all lie in P_n^+, so every conjugate lives at infinity.
fn pn_plus_towers() -> Vec<Arc<TowerSpec>> {
    let f7_cubic = enumerate_pn_plus(&f7(), 3, 3).unwrap()[0].clone();
    vec![
        spec(&f5(), 2, &["t^2+2"]),
        spec(&f5(), 2, &["t^2+2", "t^2+3"]),
        TowerSpec::new(&f7(), 3, vec![f7_cubic]).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn exact_norm_is_the_product_of_conjugates(seed in any::<u64>(), which in 0usize..3) {
        let spec = &pn_plus_towers()[which];
        let x = random_element(spec, 2, seed);
        prop_assume!(!x.is_zero());
        let prec = 24;
        let product = conjugates(&x, prec)
            .unwrap()
            .iter()
            .fold(LaurentSeries::constant(spec.field(), spec.field().one()), |acc, c| acc.mul(c));
        let exact = at_infinity(&x.norm(), prec);
        prop_assert!(product.sub(&exact).is_zero(), "{x}");
    }

    #[test]
    fn tower_product_formula(seed in any::<u64>(), which in 0usize..3) {
        let (spec, height) = [
            (spec(&f5(), 2, &["t^2+2"]), 2),
            (spec(&f5(), 2, &["t^2+2", "t^2+3"]), 1),
            (spec(&f7(), 3, &["t", "t+1"]), 1),
        ][which].clone();
        let x = random_element(&spec, height, seed);
        prop_assume!(!x.is_zero());
        // Outside these places x is integral with unit norm, so every valuation vanishes.
        let mut places: BTreeSet<Place> = support(&x.norm()).unwrap().into_iter().collect();
        for c in x.coeffs().iter().filter(|c| !c.is_zero()) {
            places.extend(support(c).unwrap());
        }
        places.extend(spec.levels().iter().map(|p| Place::Finite(p.clone())));
        places.insert(Place::Infinity);
        // Local residue fields must stay below the field-size cap.
        prop_assume!(places.iter().all(|p| p.degree() <= 3));
        let mut total = 0i64;
        for pl in &places {
            let local = LocalData::new(&spec, pl).unwrap();
            for p in local.places() {
                let v = local.valuation(&x, p.index).unwrap().unwrap();
                total += v * p.f as i64 * pl.degree() as i64;
            }
        }
        prop_assert_eq!(total, 0, "{}", x);
    }

    #[test]
    fn split_type_agrees_with_local_embeddings(seed in any::<u64>(), q in prop::sample::select(vec![5u64, 7, 9])) {
        let field = match q { 9 => f9(), p => Field::prime(p as u32).unwrap() };
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = enumerate_pn_plus(&field, 2, 4).unwrap().choose(&mut rng).unwrap().clone();
        let mut bases: Vec<Place> = monic_irreducibles(&field, 1).unwrap().into_iter().map(Place::Finite).collect();
        bases.extend(monic_irreducibles(&field, 2).unwrap().into_iter().map(Place::Finite));
        bases.push(Place::Infinity);
        let base = bases.choose(&mut rng).unwrap().clone();
        let spec = TowerSpec::new(&field, 2, vec![p.clone()]).unwrap();
        let mut predicted = split_type(&base, 2, &p).unwrap();
        predicted.sort();
        let mut embedded: Vec<(u64, u64)> = LocalData::new(&spec, &base).unwrap().places().iter().map(|x| (x.e, x.f)).collect();
        embedded.sort();
        prop_assert_eq!(predicted, embedded, "p = {} at {}", p, base);
    }

    #[test]
    fn gamma_is_integral_at_one_one_places(seed in any::<u64>(), which in 0usize..3) {
        let f = f5();
        let (spec, base) = [
            (TowerSpec::base(&f), "t+3"),
            (spec(&f, 2, &["t^2+2"]), "inf"),
            (spec(&f, 2, &["t^2+2"]), "t+3"),
        ][which].clone();
        let base = parse_place(&f, base).unwrap();
        let local = LocalData::new(&spec, &base).unwrap();
        let a = random_element(&spec, 2, seed);
        let KochenValue::Value(g) = gamma(&a, &KochenContext::new(&f, &base)) else {
            return Err(TestCaseError::fail("pole"));
        };
        for p in local.places() {
            prop_assert!(is_one_one_place(&local, p.index));
            prop_assert!(local.valuation(&g, p.index).unwrap().is_none_or(|v| v >= 0), "{a} at {p}");
        }
    }

    #[test]
    fn reduced_norm_is_multiplicative(seed in any::<u64>(), case in 0usize..3) {
        let (field, l) = [(f5(), 2), (f7(), 3), (f9(), 2)][case].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RationalFunction::random_nonzero(&field, 2, &mut rng);
        let b = RationalFunction::random_nonzero(&field, 2, &mut rng);
        let alg = SymbolAlgebra::new(a, b, l).unwrap();
        let x = alg.random_element(1, &mut rng);
        let y = alg.random_element(1, &mut rng);
        prop_assert_eq!(alg.nrd(&alg.mul(&x, &y)), &alg.nrd(&x) * &alg.nrd(&y));
        prop_assert_eq!(alg.trd(&alg.add(&x, &y)), &alg.trd(&x) + &alg.trd(&y));
    }

    #[test]
    fn invariants_are_additive_in_b(seed in any::<u64>(), case in 0usize..2) {
        let (field, l) = [(f7(), 3), (f9(), 2)][case].clone();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = RationalFunction::random_nonzero(&field, 2, &mut rng);
        let b1 = RationalFunction::random_nonzero(&field, 2, &mut rng);
        let b2 = RationalFunction::random_nonzero(&field, 2, &mut rng);
        let alg = |b: RationalFunction| SymbolAlgebra::new(a.clone(), b, l).unwrap();
        let (x, y, z) = (alg(b1.clone()), alg(b2.clone()), alg(&b1 * &b2));
        let mut places: BTreeSet<Place> = [&a, &b1, &b2].iter().flat_map(|r| support(r).unwrap()).collect();
        places.insert(Place::Infinity);
        for p in &places {
            let sum = |inv: ffk::csa::Invariant| inv.num * (l / inv.den);
            let lhs = (sum(x.local_invariant(p).unwrap()) + sum(y.local_invariant(p).unwrap())) % l;
            prop_assert_eq!(lhs, sum(z.local_invariant(p).unwrap()), "at {}", p);
        }
    }

    #[test]
    fn hensel_root_of_quartic_kummer_over_f9(seed in any::<u64>()) {
        let field = f9();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let all = enumerate_pn_plus(&field, 4, 4).unwrap();
        let p: &Polynomial = all.choose(&mut rng).unwrap();
        let root = hensel_nth_root(p, 4, 40).unwrap();
        prop_assert!(root.pow(4).sub(&LaurentSeries::from_poly_at_infinity(p)).is_zero());
        prop_assert_eq!(root.rel_prec(), Some(40));
    }
}

#[test]
fn kochen_sampler_finds_no_violations_at_split_infinity() {
    let f = f5();
    let spec = spec(&f, 2, &["t^2+2"]);
    let local = LocalData::new(&spec, &Place::Infinity).unwrap();
    let report = kochen::gamma_integrality_sample(&local, 300, 11).unwrap();
    assert_eq!(report.samples, 300);
    assert!(report.violations.is_empty(), "{:?}", report.violations);
}
