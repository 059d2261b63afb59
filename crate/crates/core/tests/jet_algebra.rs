mod oracles;

use jetmorse::jet_algebra::{
    covariant_jet, dim_gg, enumerate_profiles, push_jet, scale_jet, ChristoffelField, CurveTaylor, Poly,
};
use jetmorse::scalar::rational;
use num_bigint::BigUint;
use oracles::{count_profiles, push_by_series, random_jet, random_map, small_rational, Q};
use proptest::prelude::*;

#[test]
fn dimension_sweep_counts_partitions_into_parts_at_most_two() {
    let dims: Vec<BigUint> = (1..=10).map(|m| dim_gg(2, m, 1).unwrap()).collect();
    let expect: Vec<BigUint> = [1u32, 2, 2, 3, 3, 4, 4, 5, 5, 6].iter().map(|&d| BigUint::from(d)).collect();
    assert_eq!(dims, expect);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn dimension_matches_enumeration(k in 1usize..=4, r in 1usize..=3, m in 0usize..=10) {
        let d = dim_gg(k, m, r).unwrap();
        prop_assert_eq!(d.clone(), BigUint::from(enumerate_profiles(k, m, r).unwrap().count()));
        prop_assert_eq!(d, BigUint::from(count_profiles(k, m, r)));
    }

    #[test]
    fn profiles_have_the_requested_weight(k in 1usize..=4, r in 1usize..=2, m in 0usize..=8) {
        for p in enumerate_profiles(k, m, r).unwrap() {
            prop_assert_eq!(p.weighted_degree(), m as u64);
        }
    }

    #[test]
    fn push_jet_matches_series_composition(seed in any::<u64>(), n in 1usize..=2, k in 1usize..=5) {
        let mut s = seed;
        let psi = random_map(&mut s, n, 3, k as u32, false);
        let jet = random_jet(&mut s, n, k, false);
        prop_assert_eq!(push_jet(&psi, &jet).unwrap(), push_by_series(&psi, &jet));
    }

    #[test]
    fn push_jet_is_functorial(seed in any::<u64>(), n in 1usize..=2, k in 1usize..=4) {
        let mut s = seed;
        let phi = random_map(&mut s, n, 2, k as u32, true);
        let psi = random_map(&mut s, n, 2, k as u32, true);
        let jet = random_jet(&mut s, n, k, true);
        let composite = phi.compose(&psi).unwrap();
        let stepwise = push_jet(&phi, &push_jet(&psi, &jet).unwrap()).unwrap();
        prop_assert_eq!(push_jet(&composite, &jet).unwrap(), stepwise);
    }

    #[test]
    fn push_jet_is_equivariant(seed in any::<u64>(), n in 1usize..=2, k in 1usize..=5) {
        let mut s = seed;
        let psi = random_map(&mut s, n, 3, k as u32, false);
        let jet = random_jet(&mut s, n, k, false);
        let mut lambda = small_rational(&mut s);
        if lambda == Q::from_integer(0.into()) {
            lambda = rational(3, 2);
        }
        let lhs = push_jet(&psi, &scale_jet(&lambda, &jet).unwrap()).unwrap();
        let rhs = scale_jet(&lambda, &push_jet(&psi, &jet).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn covariant_jet_is_equivariant(seed in any::<u64>(), k in 1usize..=5) {
        let mut s = seed;
        let (n, r) = (2, 2);
        let gamma = ChristoffelField::from_fn(n, r, |_, _, _| {
            Poly::from_terms(n, [(vec![0, 0], small_rational(&mut s)), (vec![1, 0], small_rational(&mut s)), (vec![0, 1], small_rational(&mut s))]).unwrap()
        })
        .unwrap();
        let base: Vec<Q> = (0..n).map(|_| small_rational(&mut s)).collect();
        let ders: Vec<Vec<Q>> = (0..k).map(|_| (0..n).map(|_| small_rational(&mut s)).collect()).collect();
        let taylor = CurveTaylor::new(base, ders).unwrap();
        let lambda = rational(-2, 3);
        let lhs = covariant_jet(&taylor.reparametrize(&lambda), &gamma, k).unwrap();
        let rhs = scale_jet(&lambda, &covariant_jet(&taylor, &gamma, k).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }
}
