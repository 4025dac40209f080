use d0d6::numbertheory::{euler_coeff, EulerExponents};
use d0d6::ring::{CoeffRing, Rational};
use d0d6::series::{Cap, GradedSeries};
use proptest::prelude::*;

fn rational() -> impl Strategy<Value = Rational> {
    (-9i64..=9, 1i64..=5).prop_map(|(n, d)| Rational::new(n, d))
}

fn cap() -> impl Strategy<Value = Cap> {
    prop_oneof![
        (0u32..=4, 0u32..=4).prop_map(|(a, r)| Cap::boxed(a, r)),
        (0u32..=6).prop_map(Cap::total),
    ]
}

/// Series in `cap` with the given constant term.
fn series_in(cap: Cap, constant: Rational) -> impl Strategy<Value = GradedSeries<Rational>> {
    let exps: Vec<(u32, u32)> = cap.exponents().into_iter().filter(|&e| e != (0, 0)).collect();
    prop::collection::vec(prop::option::weighted(0.6, rational()), exps.len()).prop_map(move |cs| {
        let mut s = GradedSeries::constant(cap, constant.clone());
        for (&(a, r), c) in exps.iter().zip(cs) {
            if let Some(c) = c {
                s.add_term(a, r, c);
            }
        }
        s
    })
}

fn capped_triple() -> impl Strategy<Value = (GradedSeries<Rational>, GradedSeries<Rational>, GradedSeries<Rational>)> {
    cap().prop_flat_map(|c| {
        (series_in(c, Rational::one()), series_in(c, Rational::from_int(2)), series_in(c, Rational::zero()))
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exp_log_inverse((f, _, g) in capped_triple()) {
        prop_assert_eq!(f.log().unwrap().exp().unwrap(), f.clone());
        prop_assert_eq!(g.exp().unwrap().log().unwrap(), g);
    }

    #[test]
    fn integer_powers((f, h, _) in capped_triple(), n in 0i64..=5) {
        let mut prod = GradedSeries::one(f.cap());
        for _ in 0..n {
            prod = prod.mul(&f).unwrap();
        }
        prop_assert_eq!(f.pow_int(n).unwrap(), prod.clone());
        prop_assert_eq!(f.pow(&Rational::from_int(n)).unwrap(), prod);
        prop_assert_eq!(h.pow_int(-1).unwrap().mul(&h).unwrap(), GradedSeries::one(h.cap()));
    }

    #[test]
    fn mul_commutative_associative((f, h, g) in capped_triple()) {
        prop_assert_eq!(f.mul(&h).unwrap(), h.mul(&f).unwrap());
        prop_assert_eq!(f.mul(&h).unwrap().mul(&g).unwrap(), f.mul(&h.mul(&g).unwrap()).unwrap());
        prop_assert_eq!(f.mul(&h.add(&g).unwrap()).unwrap(), f.mul(&h).unwrap().add(&f.mul(&g).unwrap()).unwrap());
    }

    #[test]
    fn euler_product_cross_check(c in prop::collection::vec(-6i64..=6, 1..=10)) {
        let n = c.len() as u32;
        let cap = Cap::boxed(n, 0);
        let mut prod = GradedSeries::one(cap);
        for (i, &ci) in c.iter().enumerate() {
            let k = i as u32 + 1;
            let base = GradedSeries::from_terms(cap, [((0, 0), Rational::one()), ((k, 0), Rational::from_int(-1))]);
            prod = prod.mul(&base.pow_int(-ci).unwrap()).unwrap();
        }
        let exps = EulerExponents(c);
        for a in 0..=n {
            prop_assert_eq!(euler_coeff(&exps, a).unwrap(), prod.get(a, 0));
        }
    }
}

#[test]
fn truncation_is_exact_inside_cap() {
    let big = Cap::boxed(6, 6);
    let small = Cap::boxed(3, 2);
    let f = GradedSeries::from_terms(big, [((0, 0), Rational::one()), ((1, 1), Rational::new(1, 2)), ((2, 0), Rational::from_int(3))]);
    let g = f.log().unwrap().with_cap(small);
    assert_eq!(g, f.with_cap(small).log().unwrap());
    assert!(Rational::from_int(3).is_invertible());
}
