//! Acceptance run: one line per criterion, nonzero exit if any fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use d0d6::dtcore::{build_lhs, classes, coulomb_partition, d0_tail, omega_table, Method};
use d0d6::gwbridge::{
    aggregate_reports, d0d6_commutator, refined_commutator, refined_sigma, refined_tau, specialize_to_d0d6,
    verify_gw_identity, D0d6Convention,
};
use d0d6::joycesong::{dt_js_r1, dt_js_r2};
use d0d6::numbertheory::{binom_congruences, check_mod4, check_mod9, euler_coeff, EulerExponents};
use d0d6::ring::{MultiPoly, Rational};
use d0d6::sampling::property_suite;
use d0d6::series::{macmahon, Cap, GradedSeries, Sign};
use d0d6::vertex::{factorize, make_t, preserves_log_form, Ray, SlopeOrder, VertexGenerator, VertexWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, u64, fn() -> Check);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err(e: d0d6::Error) -> String {
    e.to_string()
}

fn int(n: i64) -> Rational {
    Rational::from_int(n)
}

fn rank_two_golden() -> Check {
    let table = omega_table(&int(1), Cap::boxed(8, 3), Method::Factorization, SlopeOrder::Desc).map_err(err)?;
    let expected = [-1, -6, -21, -61, -165, -426];
    for (a, want) in (2..=7).zip(expected) {
        let got = table.omega(a, 2).ok_or(format!("missing Omega({a},2)"))?;
        ensure(*got == int(want), || format!("Omega({a},2) = {got}, expected {want}"))?;
    }
    Ok("Omega(2..7, 2) = -1, -6, -21, -61, -165, -426".into())
}

fn coulomb_series() -> Check {
    let s = coulomb_partition(2, &int(1), Cap::boxed(7, 0));
    let got: Vec<Rational> = (0..=7).map(|k| s.get(k, 0)).collect();
    let expected: Vec<Rational> = [1, -2, 7, -18, 47, -110, 258, -568].map(int).to_vec();
    ensure(got == expected, || format!("got {got:?}"))?;
    Ok("1, -2, 7, -18, 47, -110, 258, -568".into())
}

fn symbolic_fixtures() -> Check {
    let chi = MultiPoly::chi();
    let table = omega_table(&chi, Cap::boxed(2, 2), Method::Factorization, SlopeOrder::Desc).map_err(err)?;
    let omega = table.omega(2, 2).cloned().unwrap_or_default();
    let dtbar = table.dtbar(2, 2).cloned().unwrap_or_default();
    ensure(omega == chi.neg(), || format!("Omega(2,2) = {omega}"))?;
    ensure(dtbar == chi.scale(&Rational::new(-5, 4)), || format!("DT-bar(2,2) = {dtbar}"))?;
    Ok(format!("Omega(2,2) = {omega}, DT-bar(2,2) = {dtbar}"))
}

fn three_paths() -> Check {
    let chi = MultiPoly::chi();
    let cap = Cap::boxed(6, 3);
    let run = |m| omega_table(&chi, cap, m, SlopeOrder::Desc).map(|t| t.omega_map()).map_err(err);
    let fact = run(Method::Factorization)?;
    for m in [Method::Liepath, Method::Closedform] {
        let other = run(m)?;
        if let Some((k, v)) = fact.iter().find(|(k, v)| other.get(k) != Some(v)) {
            return Err(format!("{m} disagrees at {k:?}: {v} vs {:?}", other.get(k)));
        }
    }
    Ok(format!("{} classes agree across factorization, liepath, closedform", fact.len()))
}

fn joyce_song() -> Check {
    let chi = MultiPoly::chi();
    let table = omega_table(&chi, Cap::boxed(8, 2), Method::Factorization, SlopeOrder::Desc).map_err(err)?;
    for a in 1..=8 {
        let js = dt_js_r1(a, &chi);
        ensure(Some(&js) == table.omega(a, 1), || format!("rank 1, a = {a}: {js}"))?;
    }
    for a in 1..=6 {
        let js = dt_js_r2(a, &chi);
        ensure(Some(&js) == table.dtbar(a, 2), || format!("rank 2, a = {a}: {js}"))?;
    }
    Ok("rank 1 for a <= 8, rank 2 for a <= 6".into())
}

fn rank_one_generating_function() -> Check {
    let chi = MultiPoly::chi();
    let table = omega_table(&chi, Cap::boxed(10, 1), Method::Factorization, SlopeOrder::Desc).map_err(err)?;
    let m = macmahon(Sign::Minus, &chi, Cap::boxed(10, 0));
    for a in 1..=10 {
        let want = m.get(a, 0);
        ensure(table.omega(a, 1) == Some(&want), || format!("a = {a}: expected {want}"))?;
    }
    Ok("matches M(-t)^chi through t^10".into())
}

fn integrality() -> Check {
    let cap = Cap::boxed(8, 3);
    let chis = [-200, -6, 1, 2, 3];
    for chi in chis {
        let table = omega_table(&int(chi), cap, Method::Factorization, SlopeOrder::Desc).map_err(err)?;
        for (a, r) in classes(cap) {
            let w = table.omega(a, r).ok_or(format!("missing ({a},{r})"))?;
            ensure(w.is_integer(), || format!("chi = {chi}: Omega({a},{r}) = {w}"))?;
        }
    }
    Ok(format!("all classes in Box(8,3) for chi in {chis:?}"))
}

fn congruences() -> Check {
    let mut n = 0;
    for chi in 1..=3 {
        for a in (2..=12).step_by(2) {
            let v = check_mod4(a, chi).map_err(err)?;
            ensure(v.pass, || format!("mod 4 fails: {v:?}"))?;
            n += 1;
        }
        for a in (3..=12).step_by(3) {
            let v = check_mod9(a, chi).map_err(err)?;
            ensure(v.pass, || format!("mod 9 fails: {v:?}"))?;
            n += 1;
        }
    }
    let reports = binom_congruences(4, &[1, 2, 3, 4], 12);
    if let Some(bad) = reports.iter().find(|r| !r.pass()) {
        return Err(format!("binomial congruence fails: {bad:?}"));
    }
    Ok(format!("{n} lemma instances, {} binomial families", reports.len()))
}

fn euler_products() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let cap = Cap::boxed(10, 0);
    for _ in 0..50 {
        let c = EulerExponents((0..10).map(|_| rng.gen_range(-8..=8)).collect());
        let mut series = GradedSeries::one(cap);
        for (n, &cn) in c.0.iter().enumerate() {
            let mut factor = GradedSeries::one(cap);
            factor.add_term(n as u32 + 1, 0, int(-1));
            series = series.mul(&factor.pow_int(-cn).map_err(err)?).map_err(err)?;
        }
        for a in 0..=10 {
            let got = euler_coeff(&c, a).map_err(err)?;
            ensure(got == series.get(a, 0), || format!("{c:?}, a = {a}: {got} vs {}", series.get(a, 0)))?;
        }
    }
    Ok("50 exponent sequences, a <= 10".into())
}

const GW_RAYS: [(u32, u32); 5] = [(1, 1), (2, 1), (1, 2), (3, 1), (3, 2)];

fn gw_identity() -> Check {
    for chi in [1, 2] {
        for (a, r) in GW_RAYS {
            let h_max = 8 / (a + r);
            let v = verify_gw_identity(Ray { a, r }, &int(chi), h_max).map_err(err)?;
            ensure(v.holds, || format!("chi = {chi}, ray ({a},{r}), h <= {h_max}"))?;
        }
    }
    Ok("5 rays, chi in {1, 2}, h(a+r) <= 8".into())
}

fn refined_consistency() -> Check {
    let one = Rational::one();
    let mut cells = 0;
    for d1 in 1..=4u32 {
        let cap = Cap::boxed(d1, d1);
        let refined = refined_commutator(1, d1, cap).map_err(err)?;
        let specialized = specialize_to_d0d6(&refined, D0d6Convention::Pinned, &one);
        let direct = aggregate_reports(&one, cap, d1).map_err(err)?;
        ensure(specialized == direct, || format!("d1 = {d1}: specialized {specialized:?} vs {direct:?}"))?;
        cells += direct.iter().map(|r| r.records.len()).sum::<usize>();
    }
    Ok(format!("chi = 1, d1 = 1..4, {cells} nonzero cells"))
}

fn properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let reports = property_suite(&mut rng, 100);
    if let Some(bad) = reports.iter().find(|r| !r.pass()) {
        return Err(format!("{}: {} failures, first {:?}", bad.name, bad.failures, bad.first_failure));
    }
    // the concrete generators built by the criteria above
    let mut words: Vec<(String, VertexWord<MultiPoly>)> = vec![];
    let chi = MultiPoly::chi();
    let cap = Cap::boxed(6, 3);
    words.push(("D0 tail".into(), VertexWord::single(d0_tail(&chi, cap))));
    words.push(("wall-crossing word".into(), build_lhs(&chi, cap)));
    words.push(("commutator".into(), d0d6_commutator(&chi, cap).map_err(err)?));
    let fact = factorize(&build_lhs(&chi, cap), cap, SlopeOrder::Desc).map_err(err)?;
    for (ray, f) in fact.rays() {
        words.push((format!("factor {ray:?}"), VertexWord::single(VertexGenerator::new(*ray, f.clone()).map_err(err)?)));
    }
    for (a, r) in GW_RAYS {
        words.push((format!("T({a},{r})"), VertexWord::single(make_t(Ray { a, r }, &chi, cap).map_err(err)?)));
    }
    let small = Cap::boxed(3, 3);
    let sigma = VertexGenerator::new(Ray { a: 1, r: 0 }, refined_sigma(1, 3, small).map_err(err)?).map_err(err)?;
    let tau = VertexGenerator::new(Ray { a: 0, r: 1 }, refined_tau(small)).map_err(err)?;
    words.push(("refined sigma tau".into(), VertexWord::new(small, vec![sigma, tau]).map_err(err)?));
    for (name, w) in &words {
        ensure(preserves_log_form(w).map_err(err)?, || format!("{name} is not symplectic"))?;
    }
    let cases: usize = reports.iter().map(|r| r.cases).sum();
    Ok(format!("{cases} random cases, {} concrete generators", words.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 12] = [
        ("rank-2 golden series", 60, rank_two_golden),
        ("Coulomb series", 1, coulomb_series),
        ("symbolic (2,2) fixtures", 60, symbolic_fixtures),
        ("three-path equivalence", 300, three_paths),
        ("Joyce-Song equivalence", 300, joyce_song),
        ("rank-1 generating function", 60, rank_one_generating_function),
        ("integrality", 120, integrality),
        ("congruence lemmas", 10, congruences),
        ("Euler-product identity", 60, euler_products),
        ("GW identity", 300, gw_identity),
        ("refined/aggregate consistency", 120, refined_consistency),
        ("property suites", 120, properties),
    ];
    let mut failed = 0;
    for (i, (name, budget, check)) in criteria.into_iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > Duration::from_secs(budget) => Err(format!("took {elapsed:.1?}, budget {budget} s")),
            o => o,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {:>2}. {name}: {detail} ({elapsed:.2?})", i + 1),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {:>2}. {name}: {why} ({elapsed:.2?})", i + 1);
            }
        }
    }
    println!("{} of 12 criteria passed", 12 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
