mod oracles;

use jetmorse::ideal::{closure_power, euler_canonical_check, membership, MonomialIdeal, RationalPower};
use jetmorse::scalar::rational;
use oracles::{candidate_normals, facet_closure, facet_member};
use proptest::prelude::*;

fn ideal_strategy() -> impl Strategy<Value = MonomialIdeal> {
    (2usize..=3).prop_flat_map(|n| {
        prop::collection::vec(prop::collection::vec(0u32..=4, n), 1..=4)
            .prop_filter("degree at most 6", |gens| gens.iter().all(|g| g.iter().sum::<u32>() <= 6))
            .prop_map(move |gens| MonomialIdeal::new(n, gens).unwrap())
    })
}

fn power_strategy() -> impl Strategy<Value = RationalPower> {
    prop::sample::select(vec![(1, 1), (2, 1), (3, 2), (1, 2)]).prop_map(|(a, b)| RationalPower::new(rational(a, b)).unwrap())
}

fn one() -> RationalPower {
    RationalPower::integer(1).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_matches_facet_oracle(i in ideal_strategy(), p in power_strategy()) {
        let c = closure_power(&i, &p).unwrap();
        let bound = c.generators().iter().flatten().copied().max().unwrap_or(0) + 2;
        prop_assert_eq!(c.generators().to_vec(), facet_closure(i.generators(), p.value(), bound));
    }

    #[test]
    fn closure_is_idempotent_and_contains_the_ideal(i in ideal_strategy()) {
        let c = closure_power(&i, &one()).unwrap();
        prop_assert_eq!(closure_power(&c, &one()).unwrap(), c.clone());
        for g in i.generators() {
            prop_assert!(c.contains(g));
        }
    }

    #[test]
    fn integer_powers_commute_with_closure(i in ideal_strategy(), m in 1u32..=3) {
        let lhs = closure_power(&i, &RationalPower::integer(m).unwrap()).unwrap();
        let rhs = closure_power(&i.power(m), &one()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn closure_satisfies_every_valuative_inequality(i in ideal_strategy(), p in power_strategy()) {
        let c = closure_power(&i, &p).unwrap();
        let normals = candidate_normals(i.generators());
        for beta in c.generators() {
            prop_assert!(facet_member(i.generators(), &normals, p.value(), beta));
            prop_assert!(membership(&i, &p, beta).unwrap());
        }
    }
}

#[test]
fn euler_example_is_a_power_of_the_maximal_ideal() {
    for n in 1..=3 {
        for m in 1..=4 {
            let c = euler_canonical_check(n, m).unwrap();
            assert_eq!(c.ideal, MonomialIdeal::maximal(n).power(m));
            assert_eq!(c.line_power, m);
        }
    }
}
