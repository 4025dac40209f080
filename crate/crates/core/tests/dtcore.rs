use d0d6::dtcore::{classes, mobius_invert, omega_table, Direction, Method};
use d0d6::ring::{CoeffRing, MultiPoly, Rational};
use d0d6::series::{macmahon, Cap, Sign};
use d0d6::vertex::SlopeOrder;

fn symbolic(cap: Cap, method: Method) -> d0d6::dtcore::InvariantTable<MultiPoly> {
    omega_table(&MultiPoly::chi(), cap, method, SlopeOrder::Desc).unwrap()
}

#[test]
fn three_paths_agree_symbolically() {
    let cap = Cap::boxed(6, 3);
    let fact = symbolic(cap, Method::Factorization).omega_map();
    assert_eq!(symbolic(cap, Method::Liepath).omega_map(), fact);
    assert_eq!(symbolic(cap, Method::Closedform).omega_map(), fact);
}

/// The left-hand word is already slope-ascending, so the ascending
/// factorization just returns its own generators.
#[test]
fn ascending_order_recovers_the_input_rays() {
    let cap = Cap::boxed(5, 2);
    let asc = omega_table(&MultiPoly::chi(), cap, Method::Factorization, SlopeOrder::Asc).unwrap();
    for ((a, r), w) in asc.omega_map() {
        if a > 0 && r > 0 {
            assert!(w.is_zero(), "Omega({a},{r}) = {w:?}");
        }
    }
    assert!(asc.omega(0, 1).unwrap().is_one());
}

#[test]
fn mobius_round_trip() {
    for table in [symbolic(Cap::boxed(6, 3), Method::Factorization), symbolic(Cap::boxed(4, 2), Method::Liepath)] {
        let dt = mobius_invert(&table, Direction::OmegaToDt).unwrap();
        assert_eq!(dt.dtbar_map(), table.dtbar_map());
        let back = mobius_invert(&table, Direction::DtToOmega).unwrap();
        assert_eq!(back.omega_map(), table.omega_map());
    }
}

#[test]
fn dtbar_vanishes_below_the_diagonal_and_is_inverse_square_at_zero() {
    let table = symbolic(Cap::boxed(6, 3), Method::Factorization);
    for r in 1..=3u32 {
        assert_eq!(table.dtbar(0, r).unwrap(), &MultiPoly::constant(Rational::new(1, (r * r) as i64)));
        for a in 1..r {
            assert!(table.dtbar(a, r).unwrap().is_zero(), "DT-bar({a},{r})");
        }
    }
}

#[test]
fn rank_one_is_macmahon() {
    let chi = MultiPoly::chi();
    let table = symbolic(Cap::boxed(10, 1), Method::Factorization);
    let m = macmahon(Sign::Minus, &chi, Cap::boxed(10, 0));
    for a in 1..=10 {
        assert_eq!(table.omega(a, 1).unwrap(), &m.get(a, 0), "a = {a}");
    }
}

#[test]
fn integrality_over_sample_chis() {
    let cap = Cap::boxed(8, 3);
    for chi in [-200i64, -6, 1, 2, 3] {
        let table = omega_table(&Rational::from_int(chi), cap, Method::Factorization, SlopeOrder::Desc).unwrap();
        for (a, r) in classes(cap) {
            let w = table.omega(a, r).unwrap();
            assert!(w.is_integer(), "chi = {chi}: Omega({a},{r}) = {w}");
        }
    }
}

#[test]
fn specializing_the_symbolic_table_matches_numeric_runs() {
    let cap = Cap::boxed(6, 2);
    let sym = symbolic(cap, Method::Factorization);
    for chi in [-3i64, 2, 5] {
        let num = omega_table(&Rational::from_int(chi), cap, Method::Factorization, SlopeOrder::Desc).unwrap();
        let binding = d0d6::ring::chi_binding(&Rational::from_int(chi));
        for (k, v) in sym.omega_map() {
            assert_eq!(v.specialize(&binding).as_constant().unwrap(), num.omega_map()[&k]);
        }
    }
}
