use std::collections::BTreeSet;

use d0d6::gwbridge::{
    aggregate_reports, bps_product, commutator_pipeline, refined_commutator, specialize_to_d0d6, verify_gw_identity,
    D0d6Convention, Exponent,
};
use d0d6::ring::{MultiPoly, Rational};
use d0d6::series::Cap;
use d0d6::vertex::Ray;

const RAYS: [(u32, u32); 5] = [(1, 1), (2, 1), (1, 2), (3, 1), (3, 2)];

#[test]
fn gw_identity_on_small_rays() {
    for chi in [1i64, 2] {
        for (a, r) in RAYS {
            let h_max = 8 / (a + r);
            let v = verify_gw_identity(Ray { a, r }, &Rational::from_int(chi), h_max).unwrap();
            assert!(v.holds, "chi = {chi}, ray ({a},{r})");
            assert_eq!(v.lhs, v.rhs);
        }
    }
}

#[test]
fn gw_identity_symbolic_chi() {
    for (a, r) in [(1, 1), (2, 1), (1, 2)] {
        let v = verify_gw_identity(Ray { a, r }, &MultiPoly::chi(), 6 / (a + r)).unwrap();
        assert!(v.holds, "ray ({a},{r})");
    }
}

/// Raising each factor to Ω instead of h·Ω breaks the identity once
/// multiple covers appear.
#[test]
fn unfolded_exponent_fails() {
    let ray = Ray { a: 1, r: 1 };
    let chi = Rational::from_int(1);
    let cap = Cap::boxed(2, 2);
    let p = commutator_pipeline(ray, &chi, cap).unwrap();
    let folded = bps_product(ray, &p.omegas, cap, Exponent::Folded).unwrap();
    let literal = bps_product(ray, &p.omegas, cap, Exponent::Literal).unwrap();
    assert_eq!(folded, p.f_ray);
    assert_ne!(literal, p.f_ray);
}

#[test]
fn non_primitive_rays_are_rejected() {
    let chi = Rational::from_int(1);
    assert!(commutator_pipeline(Ray { a: 2, r: 2 }, &chi, Cap::boxed(4, 4)).is_err());
    assert!(commutator_pipeline(Ray { a: 5, r: 1 }, &chi, Cap::boxed(4, 4)).is_err());
}

#[test]
fn refined_specialization_matches_aggregates() {
    let one = Rational::one();
    for d1 in 1..=4u32 {
        let cap = Cap::boxed(d1, d1);
        let refined = refined_commutator(1, d1, cap).unwrap();
        let specialized = specialize_to_d0d6(&refined, D0d6Convention::Pinned, &one);
        let direct = aggregate_reports(&one, cap, d1).unwrap();
        assert_eq!(specialized, direct, "d1 = {d1}");
    }
}

#[test]
fn other_sign_conventions_disagree_beyond_first_grade() {
    let one = Rational::one();
    let cap = Cap::boxed(2, 2);
    let refined = refined_commutator(1, 2, cap).unwrap();
    let direct = aggregate_reports(&one, cap, 2).unwrap();
    for conv in [D0d6Convention::SignedPowers, D0d6Convention::NegatedArgument] {
        assert_ne!(specialize_to_d0d6(&refined, conv, &one), direct, "{conv:?}");
    }
}

#[test]
fn partitions_decode_without_collisions() {
    let refined = refined_commutator(1, 3, Cap::boxed(3, 3)).unwrap();
    for (ray, entries) in &refined.rays {
        let mut seen = BTreeSet::new();
        for e in entries {
            assert_eq!(e.partition.size(), e.h * ray.a, "{ray:?}");
            assert_eq!(e.partition, e.partition.canonical());
            assert!(seen.insert(e.partition.monomial()), "duplicate partition on {ray:?}");
        }
    }
    for &(ray, h) in &refined.out_of_cap {
        assert!(h * ray.a > refined.d1);
    }
}
