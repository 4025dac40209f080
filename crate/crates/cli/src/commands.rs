use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use d0d6::dtcore::{
    conjecture_report, coulomb_partition, degenerate_partition, omega_table, InvariantTable, Method,
};
use d0d6::gwbridge::{
    aggregate_gw, aggregate_reports, commutator_pipeline, refined_commutator, specialize_to_d0d6,
    verify_gw_identity, D0d6Convention, GwReport, RefinedOutput,
};
use d0d6::joycesong::{dt_js, dt_js_r1, dt_js_r2};
use d0d6::numbertheory::{binom_congruences, check_mod4, check_mod9};
use d0d6::ring::{CoeffRing, MultiPoly, Rational};
use d0d6::sampling::{
    bracket_identities, exp_log_round_trip, factorization_round_trip, symplectic,
};
use d0d6::series::{macmahon, Cap, GradedSeries, Sign};
use d0d6::vertex::{Ray, SlopeOrder};

use crate::cache::Cache;
use crate::config::{ChiArg, MethodArg, OrderArg, RunConfig, SeriesKind, Suite};
use crate::error::CliError;
use crate::output::{render, Rows};

/// Runs `$body` with `$c` bound to the χ value in the matching ring.
macro_rules! with_chi {
    ($chi:expr, |$c:ident| $body:expr) => {
        match $chi {
            ChiArg::Int(n) => {
                let $c = Rational::from_int(n);
                $body
            }
            ChiArg::Sym => {
                let $c = MultiPoly::chi();
                $body
            }
        }
    };
}

pub struct Outcome {
    pub text: String,
    /// False when a verification suite found a failing assertion.
    pub pass: bool,
    pub first_failure: Option<String>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Outcome { text, pass: true, first_failure: None }
    }
}

fn method(m: MethodArg) -> Method {
    match m {
        MethodArg::Factorization => Method::Factorization,
        MethodArg::Liepath => Method::Liepath,
        MethodArg::Closedform => Method::Closedform,
        MethodArg::Joycesong => Method::Joycesong,
    }
}

fn order(o: OrderArg) -> SlopeOrder {
    match o {
        OrderArg::Desc => SlopeOrder::Desc,
        OrderArg::Asc => SlopeOrder::Asc,
    }
}

fn need<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

/// Which column a table command emphasizes.
#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Column {
    Omega,
    Dtbar,
}

fn table_text<C: CoeffRing>(config: &RunConfig, table: &InvariantTable<C>, col: Column) -> Result<String, CliError> {
    render(config, table, || Rows {
        header: vec!["a", "r", if col == Column::Omega { "omega" } else { "dtbar" }],
        rows: table
            .entries
            .iter()
            .map(|(&(a, r), e)| {
                let v = if col == Column::Omega { &e.omega } else { &e.dtbar };
                vec![a.to_string(), r.to_string(), v.to_string()]
            })
            .collect(),
    })
}

fn compute_table<C: CoeffRing>(chi: C, config: &RunConfig, cache: Option<&Cache>) -> Result<InvariantTable<C>, CliError> {
    let cap = Cap::boxed(need(config.a_max, "amax")?, need(config.r_max, "rmax")?);
    let m = method(config.method.unwrap_or(MethodArg::Factorization));
    let o = order(config.order.unwrap_or(OrderArg::Desc));
    // The table itself does not depend on the output format or column.
    let mut key_cfg = config.clone();
    key_cfg.command = "table".into();
    key_cfg.format = crate::config::Format::Json;
    let key = Cache::key(&key_cfg.canonical());
    if let Some(cache) = cache {
        if let Some(text) = cache.get(&key)? {
            if let Ok(table) = serde_json::from_str::<InvariantTable<C>>(&text) {
                return Ok(table);
            }
        }
    }
    let table = omega_table(&chi, cap, m, o)?;
    if let Some(cache) = cache {
        cache.put(&key, &serde_json::to_string(&table)?)?;
    }
    Ok(table)
}

pub fn cmd_table(config: &RunConfig, col: Column, cache: Option<&Cache>) -> Result<Outcome, CliError> {
    let chi = need(config.chi, "chi")?;
    let text = with_chi!(chi, |c| table_text(config, &compute_table(c, config, cache)?, col)?);
    Ok(Outcome::ok(text))
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), pass, detail: detail.into() }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Reported but never failing.
    pub informational: Vec<Check>,
}

fn finish(config: &RunConfig, checks: Vec<Check>, informational: Vec<Check>) -> Result<Outcome, CliError> {
    let pass = checks.iter().all(|c| c.pass);
    let first_failure = checks.iter().find(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail));
    let report = VerifyReport { pass, checks, informational };
    let text = render(config, &report, || Rows {
        header: vec!["name", "pass", "detail", "informational"],
        rows: report
            .checks
            .iter()
            .map(|c| (c, false))
            .chain(report.informational.iter().map(|c| (c, true)))
            .map(|(c, info)| vec![c.name.clone(), c.pass.to_string(), c.detail.clone(), info.to_string()])
            .collect(),
    })?;
    Ok(Outcome { text, pass, first_failure })
}

fn suite_ks<C: CoeffRing>(chi: C, a_max: u32, r_max: u32) -> Result<(Vec<Check>, Vec<Check>), CliError> {
    if r_max > 3 {
        return Err(CliError::Usage("verify ks supports --rmax ≤ 3".into()));
    }
    let cap = Cap::boxed(a_max, r_max);
    let tables: Vec<_> = [Method::Factorization, Method::Liepath, Method::Closedform]
        .par_iter()
        .map(|&m| omega_table(&chi, cap, m, SlopeOrder::Desc))
        .collect::<Result<_, _>>()?;
    let (fact, lie, closed) = (&tables[0], &tables[1], &tables[2]);
    let mut checks = Vec::new();
    for (&(a, r), e) in &fact.entries {
        let l = lie.omega(a, r);
        let c = closed.omega(a, r);
        let pass = l == Some(&e.omega) && c == Some(&e.omega);
        let show = |v: Option<&C>| v.map_or("missing".to_string(), |v| v.to_string());
        checks.push(Check::new(
            format!("Omega({a},{r})"),
            pass,
            format!("factorization={} liepath={} closedform={}", e.omega, show(l), show(c)),
        ));
    }
    let info = conjecture_report(fact)
        .into_iter()
        .map(|c| Check::new(c.identity, c.holds, format!("{} vs {}", c.lhs, c.rhs)))
        .collect();
    Ok((checks, info))
}

fn suite_js<C: CoeffRing>(chi: C, a_max: u32, r_max: u32) -> Result<Vec<Check>, CliError> {
    if !(1..=3).contains(&r_max) {
        return Err(CliError::Usage("verify js supports --rmax 1..=3".into()));
    }
    let table = omega_table(&chi, Cap::boxed(a_max, r_max), Method::Factorization, SlopeOrder::Desc)?;
    let cells: Vec<(u32, u32)> = (1..=r_max).flat_map(|r| (1..=a_max).map(move |a| (a, r))).collect();
    let checks = cells
        .par_iter()
        .map(|&(a, r)| {
            let (js, reference, what) = match r {
                1 => (dt_js_r1(a, &chi), table.omega(a, 1), "Omega"),
                2 => (dt_js_r2(a, &chi), table.dtbar(a, 2), "DTbar"),
                _ => (dt_js(a, r, &chi), table.dtbar(a, r), "DTbar"),
            };
            let reference = reference.cloned().unwrap_or_else(C::zero);
            Check::new(
                format!("JS({a},{r}) = {what}({a},{r})"),
                js == reference,
                format!("joyce-song={js} factorization={reference}"),
            )
        })
        .collect();
    Ok(checks)
}

fn suite_congruence(modulus: Option<u32>, a_max: u32, chis: &[i64]) -> Result<Vec<Check>, CliError> {
    let moduli: Vec<u32> = match modulus {
        None => vec![4, 9],
        Some(m @ (4 | 9)) => vec![m],
        Some(m) => return Err(CliError::Usage(format!("--mod must be 4 or 9, got {m}"))),
    };
    let mut cells = Vec::new();
    for &m in &moduli {
        let step = if m == 4 { 2 } else { 3 };
        for &chi in chis {
            for a in (step..=a_max).step_by(step as usize) {
                cells.push((m, a, chi));
            }
        }
    }
    let mut checks: Vec<Check> = cells
        .par_iter()
        .map(|&(m, a, chi)| {
            let v = if m == 4 { check_mod4(a, chi) } else { check_mod9(a, chi) }?;
            Ok(Check::new(
                format!("mod {m}: a={a} chi={chi}"),
                v.pass,
                format!("{} ≡ {} vs {} ≡ {}", v.lhs, v.lhs_residue, v.rhs, v.rhs_residue),
            ))
        })
        .collect::<Result<_, d0d6::Error>>()?;
    for rep in binom_congruences(4, &[1, 2, 3, 4], 12) {
        checks.push(Check::new(
            format!("{:?}", rep.congruence),
            rep.pass(),
            match rep.counterexample {
                None => format!("{} cases, {} not applicable", rep.checked, rep.skipped),
                Some((i, chi, xi)) => format!("fails at i={i} chi={chi} xi={xi}"),
            },
        ));
    }
    Ok(checks)
}

/// Rays checked by `verify gw` when no ray is given.
pub const GW_RAYS: [(u32, u32); 5] = [(1, 1), (2, 1), (1, 2), (3, 1), (3, 2)];

fn suite_gw<C: CoeffRing>(chi: C, rays: &[(u32, u32)], h_max: Option<u32>, total: u32) -> Result<Vec<Check>, CliError> {
    rays.par_iter()
        .map(|&(a, r)| {
            let ray = Ray::new(a, r)?;
            let h = h_max.unwrap_or(total / (a + r)).max(1);
            let v = verify_gw_identity(ray, &chi, h)?;
            let detail = v
                .gw
                .iter()
                .zip(&v.omegas)
                .map(|(g, (hh, om))| format!("h={hh}: N={} Omega={om}", g.value))
                .collect::<Vec<_>>()
                .join("; ");
            Ok(Check::new(format!("GW identity on ray ({a},{r}), h ≤ {h}"), v.holds, detail))
        })
        .collect::<Result<_, CliError>>()
}

fn refined_check(chi: u32, d1: u32) -> Result<Check, CliError> {
    let cap = Cap::boxed(d1, d1);
    let out = refined_commutator(chi, d1, cap)?;
    let agg = aggregate_reports(&Rational::from_int(chi as i64), cap, d1)?;
    let specialized = specialize_to_d0d6(&out, D0d6Convention::Pinned, &Rational::one());
    let n: usize = out.rays.values().map(Vec::len).sum();
    Ok(Check::new(
        format!("refined N[G] specialize to aggregates, chi={chi}, d1={d1}"),
        specialized == agg,
        format!("{n} canonical partitions over {} rays", out.rays.len()),
    ))
}

fn suite_properties(seed: u64, cases: usize) -> Vec<Check> {
    let sweeps: [fn(&mut ChaCha8Rng, usize) -> d0d6::sampling::PropertyReport; 4] =
        [exp_log_round_trip, symplectic, factorization_round_trip, bracket_identities];
    sweeps
        .par_iter()
        .enumerate()
        .map(|(i, sweep)| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(i as u64));
            let rep = sweep(&mut rng, cases);
            let detail = match &rep.first_failure {
                None => format!("{} cases", rep.cases),
                Some(f) => format!("{} of {} failed; first: {f}", rep.failures, rep.cases),
            };
            Check::new(rep.name.clone(), rep.pass(), detail)
        })
        .collect()
}

pub fn cmd_verify(config: &RunConfig) -> Result<Outcome, CliError> {
    let suite = need(config.suite, "suite")?;
    let (checks, info) = match suite {
        Suite::Ks => {
            let chi = config.chi.unwrap_or(ChiArg::Sym);
            let (a, r) = (config.a_max.unwrap_or(6), config.r_max.unwrap_or(3));
            with_chi!(chi, |c| suite_ks(c, a, r)?)
        }
        Suite::Js => {
            let chi = config.chi.unwrap_or(ChiArg::Sym);
            let (a, r) = (config.a_max.unwrap_or(6), config.r_max.unwrap_or(2));
            (with_chi!(chi, |c| suite_js(c, a, r)?), vec![])
        }
        Suite::Congruence => {
            let chis = match config.chi {
                None => vec![1, 2, 3],
                Some(ChiArg::Int(n)) => vec![n],
                Some(ChiArg::Sym) => return Err(CliError::Usage("congruences need an integer --chi".into())),
            };
            (suite_congruence(config.modulus, config.a_max.unwrap_or(12), &chis)?, vec![])
        }
        Suite::Gw => {
            let chi = config.chi.unwrap_or(ChiArg::Int(1));
            let rays: Vec<(u32, u32)> = match config.ray {
                Some(ray) => vec![ray],
                None => GW_RAYS.to_vec(),
            };
            let mut checks = with_chi!(chi, |c| suite_gw(c, &rays, config.h_max, 8)?);
            if let Some(d1) = config.d1 {
                match chi {
                    ChiArg::Int(n) if n > 0 => checks.push(refined_check(n as u32, d1)?),
                    _ => return Err(CliError::Usage("refined runs need a positive integer --chi".into())),
                }
            }
            (checks, vec![])
        }
        Suite::Properties => (suite_properties(config.seed.unwrap_or(0), config.cases.unwrap_or(100)), vec![]),
    };
    finish(config, checks, info)
}

#[derive(Serialize)]
struct SeriesResult<C: Serialize> {
    coefficients: Vec<C>,
}

fn series_text<C: CoeffRing>(config: &RunConfig, s: &GradedSeries<C>, n: u32) -> Result<String, CliError> {
    let coefficients: Vec<C> = (0..=n).map(|k| s.get(k, 0)).collect();
    let result = SeriesResult { coefficients };
    render(config, &result, || Rows {
        header: vec!["n", "coefficient"],
        rows: result.coefficients.iter().enumerate().map(|(k, c)| vec![k.to_string(), c.to_string()]).collect(),
    })
}

pub fn cmd_series(config: &RunConfig) -> Result<Outcome, CliError> {
    let which = need(config.series, "series")?;
    let n = need(config.n, "n")?;
    let cap = Cap::boxed(n, 0);
    let chi = config.chi.unwrap_or(ChiArg::Int(1));
    let r = config.rank.unwrap_or(1);
    if r == 0 && which != SeriesKind::Macmahon {
        return Err(CliError::Usage("--r must be positive".into()));
    }
    let text = with_chi!(chi, |c| {
        let s = match which {
            SeriesKind::Macmahon => macmahon(Sign::Plus, &c, cap),
            SeriesKind::Coulomb => coulomb_partition(r, &c, cap),
            SeriesKind::Degenerate => degenerate_partition(r, &c, cap),
        };
        series_text(config, &s, n)?
    });
    Ok(Outcome::ok(text))
}

fn gw_rows<C: CoeffRing>(reports: &[GwReport<C>]) -> Rows {
    let mut rows = Vec::new();
    for rep in reports {
        for rec in &rep.records {
            rows.push(vec![
                rep.ray.a.to_string(),
                rep.ray.r.to_string(),
                rec.h.to_string(),
                rec.partition.as_ref().map_or(String::new(), |p| serde_json::to_string(p).expect("partition")),
                rec.multiplicity.map_or(String::new(), |m| m.to_string()),
                rec.value.to_string(),
            ]);
        }
    }
    Rows { header: vec!["a", "r", "h", "partition", "multiplicity", "value"], rows }
}

#[derive(Serialize)]
struct RefinedResult {
    chi: u32,
    d1: u32,
    cap: Cap,
    rays: Vec<GwReport<Rational>>,
    out_of_cap: Vec<(Ray, u32)>,
}

pub fn cmd_gw(config: &RunConfig) -> Result<Outcome, CliError> {
    let chi = config.chi.unwrap_or(ChiArg::Int(1));
    if let Some(d1) = config.d1 {
        let n = match chi {
            ChiArg::Int(n) if n > 0 => n as u32,
            _ => return Err(CliError::Usage("refined runs need a positive integer --chi".into())),
        };
        let cap = Cap::boxed(config.a_max.unwrap_or(d1), config.r_max.unwrap_or(d1));
        let out: RefinedOutput = refined_commutator(n, d1, cap)?;
        let result = RefinedResult { chi: n, d1, cap, rays: out.reports(), out_of_cap: out.out_of_cap.clone() };
        let text = render(config, &result, || gw_rows(&result.rays))?;
        return Ok(Outcome::ok(text));
    }
    let (a, r) = need(config.ray, "a/--r")?;
    let h = need(config.h_max, "hmax")?;
    let ray = Ray::new(a, r)?;
    let text = with_chi!(chi, |c| {
        let pipe = commutator_pipeline(ray, &c, Cap::boxed(h * a, h * r))?;
        let reports = vec![GwReport { ray, records: aggregate_gw(&pipe.f_ray, ray)? }];
        render(config, &reports[0], || gw_rows(&reports))?
    });
    Ok(Outcome::ok(text))
}
