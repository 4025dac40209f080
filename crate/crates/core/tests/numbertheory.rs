use d0d6::combinat::factorial;
use d0d6::dtcore::{omega_table, pair_weight, Method};
use d0d6::numbertheory::{
    binom_congruences, check_mod4, check_mod9, euler_coeff, euler_coeff_conjugate, mobius, rank_two_reduction,
    EulerExponents,
};
use d0d6::ring::Rational;
use d0d6::series::{Cap, GradedSeries};
use d0d6::vertex::SlopeOrder;
use num_bigint::BigInt;
use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn expand(c: &EulerExponents, a_max: u32) -> GradedSeries<Rational> {
    let cap = Cap::boxed(a_max, 0);
    let mut acc = GradedSeries::one(cap);
    for (n, &cn) in c.0.iter().enumerate() {
        let mut factor = GradedSeries::one(cap);
        factor.add_term(n as u32 + 1, 0, Rational::from_int(-1));
        acc = acc.mul(&factor.pow_int(-cn).unwrap()).unwrap();
    }
    acc
}

#[test]
fn euler_coefficients_match_series_expansion() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..50 {
        let c = EulerExponents((0..10).map(|_| rng.gen_range(-6..=6)).collect());
        let series = expand(&c, 10);
        for a in 0..=10 {
            let direct = series.get(a, 0);
            assert_eq!(euler_coeff(&c, a).unwrap(), direct, "{c:?} a = {a}");
            assert_eq!(euler_coeff_conjugate(&c, a).unwrap(), direct, "{c:?} a = {a}");
        }
    }
}

#[test]
fn mobius_sums_over_divisors() {
    for n in 1..=100u64 {
        let s: i64 = (1..=n).filter(|d| n % d == 0).map(mobius).sum();
        assert_eq!(s, i64::from(n == 1), "n = {n}");
    }
}

#[test]
fn congruence_lemmas_hold() {
    for chi in 1..=3 {
        for a in (2..=12).step_by(2) {
            let v = check_mod4(a, chi).unwrap();
            assert!(v.pass, "{v:?}");
        }
        for a in (3..=12).step_by(3) {
            let v = check_mod9(a, chi).unwrap();
            assert!(v.pass, "{v:?}");
        }
    }
    for report in binom_congruences(4, &[1, 2, 3, 4], 12) {
        assert!(report.pass(), "{report:?}");
    }
}

#[test]
fn odd_arguments_are_rejected() {
    assert!(check_mod4(3, 1).is_err());
    assert!(check_mod9(4, 1).is_err());
}

/// The k-sum equals the MacMahon coefficient, and its class mod 4 agrees with
/// integrality of Ω(a, 2) in the wall-crossing table.
#[test]
fn rank_two_reduction_chain() {
    let cap = Cap::boxed(8, 2);
    for chi in 1..=3i64 {
        let table = omega_table(&Rational::from_int(chi), cap, Method::Factorization, SlopeOrder::Desc).unwrap();
        for a in (2..=8).step_by(2) {
            let (lhs, rhs) = rank_two_reduction(a, chi);
            let ksum: Rational = (1..=a as usize)
                .map(|k| {
                    let w = Rational::from_int(2 * chi).pow(k as i32) / Rational::from_bigint(factorial(k as u32));
                    w * pair_weight(a, k)
                })
                .sum();
            assert_eq!(ksum, Rational::from_bigint(lhs.clone()), "chi = {chi}, a = {a}");
            let congruent = (lhs - rhs).is_multiple_of(&BigInt::from(4));
            assert!(congruent, "chi = {chi}, a = {a}");
            assert!(table.omega(a, 2).unwrap().is_integer());
            assert!(table.omega(a / 2, 1).unwrap().is_integer());
        }
    }
}
