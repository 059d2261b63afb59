mod oracles;

use jetmorse::morse::{
    bounded_sections_p1, euler_characteristic, exact_cohomology, morse_integrals, morse_integrals_with, plain_integral,
    rr_estimate, sm_alternating, wm_bound, CurvatureField, GridSpec, ModelKind, ModelManifold, MorseOptions, P1Point,
    QDivisorMetricP1, DEFAULT_TOL,
};
use jetmorse::scalar::rational;
use oracles::laurent_sections;
use proptest::prelude::*;

fn field(kind: ModelKind, bands: usize, desc: &str) -> CurvatureField {
    CurvatureField::parse(ModelManifold::new(kind, GridSpec::new(bands, 1)).unwrap(), desc).unwrap()
}

#[test]
fn index_integrals_of_a_sign_changing_form_converge() {
    // u = (1 + 2z) w on P1: I_0 = 9/8, I_1 = 1/8
    let mut previous = f64::INFINITY;
    for bands in [8, 16, 32, 64, 128] {
        let s = morse_integrals(&field(ModelKind::P1, bands, "w + 2*h"), DEFAULT_TOL);
        let err = (s.integrals[0] - 1.125).abs() + (s.integrals[1] - 0.125).abs();
        assert!(err <= previous + 1e-15, "bands {bands}: {err} after {previous}");
        previous = err;
    }
    assert!(previous < 1e-3);
}

#[test]
fn alternating_sum_is_the_plain_integral() {
    for (kind, desc) in [
        (ModelKind::P1, "w + 2*h - p"),
        (ModelKind::P1xP1, "2*w1 - 3*w2 + h1"),
        (ModelKind::P1xP1, "w1 + w2 + 3*h2"),
        (ModelKind::P2, "-2*w"),
    ] {
        let f = field(kind, 24, desc);
        let s = morse_integrals(&f, DEFAULT_TOL);
        let alt: f64 = s.integrals.iter().enumerate().map(|(q, i)| if q % 2 == 0 { *i } else { -*i }).sum();
        assert!((alt - plain_integral(&f, None)).abs() < 1e-9, "{desc}");
        assert!(s.integrals.iter().all(|&i| i >= -1e-12));
    }
}

#[test]
fn riemann_roch_on_products() {
    for a in 1..=3 {
        for b in 1..=3 {
            let f = field(ModelKind::P1xP1, 40, &format!("{a}*w1 + {b}*w2"));
            assert!((plain_integral(&f, None) - 2.0 * (a * b) as f64).abs() < 1e-9);
            for m in [10u64, 20, 50] {
                let chi = euler_characteristic(ModelKind::P1xP1, &[a, b], m).unwrap() as f64;
                let ratio = chi / rr_estimate(m, 1, &f);
                assert!((ratio - 1.0).abs() <= 3.0 / m as f64, "{a} {b} {m}: {ratio}");
            }
        }
    }
}

#[test]
fn weak_morse_bound_dominates_h1_for_mixed_signs() {
    for (a, b) in [(1i64, 1i64), (2, 3)] {
        let s = morse_integrals(&field(ModelKind::P1xP1, 16, &format!("{a}*w1 - {b}*w2")), DEFAULT_TOL);
        for m in [10u64, 50, 200] {
            let h = exact_cohomology(ModelKind::P1xP1, &[a, -b], m).unwrap();
            let expect = (m as i64 * a + 1) * (m as i64 * b - 1);
            assert_eq!(h[1] as i64, expect);
            assert!(h[1] as f64 <= wm_bound(1, m, 1, &s) * 1.05);
            // strong inequality at q = 1: h1 - h0 <= dominant alternating sum
            let sm = sm_alternating(1, m, 1, &s);
            assert!(((h[1] as f64 - h[0] as f64) - sm).abs() / sm < 0.05);
        }
    }
}

#[test]
fn results_do_not_depend_on_the_worker_count() {
    let f = field(ModelKind::P1xP1, 96, "2*w1 - w2 + 3*h1 - p2");
    let run = |t| morse_integrals_with(&f, &MorseOptions { threads: Some(t), ..MorseOptions::default() });
    let one = run(1);
    for t in [2, 3, 8] {
        let other = run(t);
        assert_eq!(
            one.integrals.iter().map(|x| x.to_bits()).collect::<Vec<_>>(),
            other.integrals.iter().map(|x| x.to_bits()).collect::<Vec<_>>()
        );
        assert_eq!(one.total.to_bits(), other.total.to_bits());
    }
}

proptest! {
    #[test]
    fn bounded_sections_match_the_laurent_count(
        d in 0i64..=6,
        m in 1u64..=12,
        la in prop::sample::select(vec![(1, 2), (-1, 2), (1, 3), (2, 3)]),
        lb in prop::sample::select(vec![(1, 2), (-1, 2), (1, 3), (2, 3)]),
        at_inf in any::<bool>(),
    ) {
        let second = if at_inf { P1Point::Infinity } else { P1Point::Finite(rational(-3, 2)) };
        let metric = QDivisorMetricP1::new(d, vec![
            (P1Point::Finite(rational(0, 1)), rational(la.0, la.1)),
            (second, rational(lb.0, lb.1)),
        ]).unwrap();
        prop_assert_eq!(bounded_sections_p1(&metric, m).unwrap(), laurent_sections(&metric, m));
    }
}
