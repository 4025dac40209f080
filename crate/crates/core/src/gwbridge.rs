//! D0-D6 / Gromov-Witten correspondence on the tropical vertex side.
//!
//! The D0-D6 commutator θ_{0,1}^{-1}·θ_{(1,0),M(x)^χ}·θ_{0,1}·θ_{(1,0),M(x)^{-χ}}
//! is factorized into ray functions; log f on a primitive ray gives the
//! aggregate numbers N_h. The refined run replaces the D0 and D6 factors by
//! products of generic factors (1 + s_j_k x^j) and (1 + t y), and reads one
//! number N[G] per monomial of log f.

use std::collections::BTreeMap;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::dtcore::d0_tail;
use crate::error::{Error, Result};
use crate::ring::{CoeffRing, Monomial, MultiPoly, Rational, VarName};
use crate::series::{Cap, GradedSeries};
use crate::vertex::{
    commutator, factorize, make_t, ray_function_to_bps, Factorization, Ray, SlopeOrder,
    VertexGenerator, VertexWord,
};

/// Refined runs refuse to start when the number of s-monomials of
/// x-degree up to the cap exceeds this.
pub const MAX_REFINED_MONOMIALS: u64 = 20_000;

/// Tuple of ordered partitions, grade j (1-based) holding parts divisible by j.
/// Parts may be 0: a zero part is an unused slot of that grade.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GradedOrderedPartition {
    grades: Vec<Vec<u32>>,
}

impl GradedOrderedPartition {
    pub fn new(grades: Vec<Vec<u32>>) -> Option<Self> {
        let ok = grades
            .iter()
            .enumerate()
            .all(|(i, parts)| parts.iter().all(|p| p % (i as u32 + 1) == 0));
        ok.then_some(GradedOrderedPartition { grades })
    }

    pub fn grades(&self) -> &[Vec<u32>] {
        &self.grades
    }

    /// Parts of grade j, j ≥ 1.
    pub fn grade(&self, j: u32) -> &[u32] {
        self.grades.get(j as usize - 1).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn len_vector(&self) -> Vec<usize> {
        self.grades.iter().map(Vec::len).collect()
    }

    pub fn size(&self) -> u32 {
        self.grades.iter().flatten().sum()
    }

    /// Parts sorted in decreasing order inside every grade.
    pub fn canonical(&self) -> Self {
        let grades = self
            .grades
            .iter()
            .map(|g| {
                let mut g = g.clone();
                g.sort_unstable_by(|a, b| b.cmp(a));
                g
            })
            .collect();
        GradedOrderedPartition { grades }
    }

    /// The s-monomial ∏ s_j_k^{p_jk / j}.
    pub fn monomial(&self) -> Monomial {
        Monomial::from_pairs(self.grades.iter().enumerate().flat_map(|(i, parts)| {
            let j = i as u32 + 1;
            parts
                .iter()
                .enumerate()
                .filter(|(_, &p)| p > 0)
                .map(move |(k, &p)| (VarName::s(j, k as u32 + 1), p / j))
        }))
    }

    /// Number of distinct slot orderings of the same multiset of parts.
    pub fn orbit_size(&self) -> u64 {
        self.grades
            .iter()
            .map(|g| {
                let mut counts: BTreeMap<u32, u64> = BTreeMap::new();
                for &p in g {
                    *counts.entry(p).or_default() += 1;
                }
                let mut n = 1u64;
                let mut seen = 0u64;
                for c in counts.values() {
                    for i in 1..=*c {
                        seen += 1;
                        n = n * seen / i;
                    }
                }
                n
            })
            .product()
    }
}

impl Serialize for GradedOrderedPartition {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let mut m = ser.serialize_map(Some(self.grades.len()))?;
        for (i, parts) in self.grades.iter().enumerate() {
            m.serialize_entry(&(i + 1).to_string(), parts)?;
        }
        m.end()
    }
}

/// One extracted GW number.
#[derive(Clone, Debug, PartialEq)]
pub struct GwRecord<C> {
    pub ray: Ray,
    pub h: u32,
    pub value: C,
    pub partition: Option<GradedOrderedPartition>,
    /// Ordered slot assignments sharing this canonical partition.
    pub multiplicity: Option<u64>,
}

impl<C: Serialize> Serialize for GwRecord<C> {
    fn serialize<S: Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let n = 2 + usize::from(self.partition.is_some()) + usize::from(self.multiplicity.is_some());
        let mut s = ser.serialize_struct("GwRecord", n)?;
        s.serialize_field("h", &self.h)?;
        if let Some(p) = &self.partition {
            s.serialize_field("partition", p)?;
        }
        if let Some(m) = self.multiplicity {
            s.serialize_field("multiplicity", &m)?;
        }
        s.serialize_field("value", &self.value)?;
        s.end()
    }
}

/// Records grouped by ray: {ray: {a, r}, records: [...]}.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GwReport<C> {
    pub ray: Ray,
    pub records: Vec<GwRecord<C>>,
}

/// Output of the commutator pipeline on one primitive ray.
#[derive(Clone, Debug, PartialEq)]
pub struct RayPipeline<C> {
    pub ray: Ray,
    pub f_ray: GradedSeries<C>,
    /// (h, Ω(ha, hr)) for every multiple inside the cap.
    pub omegas: Vec<(u32, C)>,
}

fn check_primitive(ray: Ray, cap: Cap) -> Result<()> {
    if !ray.is_primitive() {
        return Err(Error::InvalidArgument(format!("ray {ray} is not primitive")));
    }
    if !cap.contains(ray.a, ray.r) {
        return Err(Error::OutOfCap(ray.a, ray.r));
    }
    Ok(())
}

/// θ_{0,1}^{-1}·θ_{(1,0),M(x)^χ}·θ_{0,1}·θ_{(1,0),M(x)^χ}^{-1}.
pub fn d0d6_commutator<C: CoeffRing>(chi: &C, cap: Cap) -> Result<VertexWord<C>> {
    let tail = VertexWord::single(d0_tail(chi, cap));
    let t01 = VertexWord::single(make_t(Ray { a: 0, r: 1 }, &C::one(), cap)?);
    commutator(&tail, &t01)
}

/// Factorizes the D0-D6 commutator and returns the ray function on `ray`
/// with the Ω(ha, hr) read off from it.
pub fn commutator_pipeline<C: CoeffRing>(ray: Ray, chi: &C, cap: Cap) -> Result<RayPipeline<C>> {
    check_primitive(ray, cap)?;
    let fact = factorize(&d0d6_commutator(chi, cap)?, cap, SlopeOrder::Desc)?;
    pipeline_from(&fact, ray)
}

fn pipeline_from<C: CoeffRing>(fact: &Factorization<C>, ray: Ray) -> Result<RayPipeline<C>> {
    let f_ray = fact.function(ray);
    let omegas = ray_function_to_bps(ray, &f_ray)?;
    Ok(RayPipeline { ray, f_ray, omegas })
}

fn gw_sign(h: u32, ray: Ray) -> i64 {
    if (h as u64 * (ray.a + ray.r) as u64).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// N_h = (-1)^{h(a+r)}·[x^{ha} y^{hr}] log f / h for every multiple in the cap.
pub fn aggregate_gw<C: CoeffRing>(f_ray: &GradedSeries<C>, ray: Ray) -> Result<Vec<GwRecord<C>>> {
    check_primitive(ray, f_ray.cap())?;
    let log = f_ray.log()?;
    let cap = f_ray.cap();
    let mut out = Vec::new();
    let mut h = 1;
    while cap.contains(h * ray.a, h * ray.r) {
        let c = log.get(h * ray.a, h * ray.r);
        let value = c.scale(&Rational::new(gw_sign(h, ray), h as i64));
        out.push(GwRecord { ray, h, value, partition: None, multiplicity: None });
        h += 1;
    }
    Ok(out)
}

/// ∏_h exp(h·N_h·(-1)^{h(a+r)} x^{ha} y^{hr}).
pub fn gw_product<C: CoeffRing>(ray: Ray, records: &[GwRecord<C>], cap: Cap) -> Result<GradedSeries<C>> {
    let mut acc = GradedSeries::one(cap);
    for rec in records {
        if !cap.contains(rec.h * ray.a, rec.h * ray.r) {
            continue;
        }
        let c = rec.value.scale(&Rational::from_int(rec.h as i64 * gw_sign(rec.h, ray)));
        let term = GradedSeries::monomial(cap, rec.h * ray.a, rec.h * ray.r, c);
        acc = acc.mul(&term.exp()?)?;
    }
    Ok(acc)
}

/// How the BPS number of a multiple class enters its ray factor.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Exponent {
    /// (1 - (-1)^{h²ar} z^h)^{h·Ω(ha,hr)}: class hα folded onto its ray.
    Folded,
    /// (1 - (-1)^{h²ar} z^h)^{Ω(ha,hr)}, exponent taken as printed.
    Literal,
}

/// ∏_h (1 - (-1)^{h² a r} x^{ha} y^{hr})^{e_h}.
pub fn bps_product<C: CoeffRing>(
    ray: Ray,
    omegas: &[(u32, C)],
    cap: Cap,
    exponent: Exponent,
) -> Result<GradedSeries<C>> {
    let mut acc = GradedSeries::one(cap);
    for (h, omega) in omegas {
        let (al, be) = (h * ray.a, h * ray.r);
        if !cap.contains(al, be) || omega.is_zero() {
            continue;
        }
        let sign = Ray { a: al, r: be }.sign();
        let base = GradedSeries::from_terms(cap, [((0, 0), C::one()), ((al, be), C::from_int(-sign))]);
        let e = match exponent {
            Exponent::Folded => omega.scale(&Rational::from_int(*h as i64)),
            Exponent::Literal => omega.clone(),
        };
        acc = acc.mul(&base.pow(&e)?)?;
    }
    Ok(acc)
}

/// Both sides of the GW identity on one ray.
#[derive(Clone, Debug, PartialEq)]
pub struct GwVerdict<C> {
    pub ray: Ray,
    pub h_max: u32,
    pub gw: Vec<GwRecord<C>>,
    pub omegas: Vec<(u32, C)>,
    pub lhs: GradedSeries<C>,
    pub rhs: GradedSeries<C>,
    pub holds: bool,
}

/// Checks ∏_h exp(Σ h N_h (-1)^{h(a+r)} z^h) = ∏_h (1 - (-1)^{h²ar} z^h)^{h Ω(ha,hr)}
/// with z = x^a y^r, for h ≤ h_max. N_h comes from log f, Ω from the
/// multiplicative inversion of f; the two sides are rebuilt separately.
pub fn verify_gw_identity<C: CoeffRing>(ray: Ray, chi: &C, h_max: u32) -> Result<GwVerdict<C>> {
    if h_max == 0 {
        return Err(Error::InvalidArgument("h_max must be at least 1".into()));
    }
    let cap = Cap::boxed(h_max * ray.a, h_max * ray.r);
    let pipe = commutator_pipeline(ray, chi, cap)?;
    let gw = aggregate_gw(&pipe.f_ray, ray)?;
    let lhs = gw_product(ray, &gw, cap)?;
    let rhs = bps_product(ray, &pipe.omegas, cap, Exponent::Folded)?;
    let holds = lhs == rhs;
    Ok(GwVerdict { ray, h_max, gw, omegas: pipe.omegas, lhs, rhs, holds })
}

/// Number of s-monomials of x-degree ≤ a_max for χ slots per unit grade.
fn refined_monomial_count(chi: u32, d1: u32, a_max: u32) -> u64 {
    // ways[n] = monomials of weighted degree n; each grade-j slot has weight j
    let mut ways = vec![0u64; a_max as usize + 1];
    ways[0] = 1;
    for j in 1..=d1 {
        for _ in 0..j * chi {
            for n in j as usize..=a_max as usize {
                ways[n] = ways[n].saturating_add(ways[n - j as usize]);
            }
        }
    }
    ways.iter().fold(0u64, |a, &b| a.saturating_add(b))
}

/// ∏_{j ≤ d1} ∏_{k ≤ jχ} (1 + s_j_k x^j).
pub fn refined_sigma(chi: u32, d1: u32, cap: Cap) -> Result<GradedSeries<MultiPoly>> {
    let mut acc = GradedSeries::one(cap);
    for j in 1..=d1.min(cap.a_bound()) {
        for k in 1..=j * chi {
            let factor = GradedSeries::from_terms(
                cap,
                [((0, 0), MultiPoly::one()), ((j, 0), MultiPoly::var(VarName::s(j, k)))],
            );
            acc = acc.mul(&factor)?;
        }
    }
    Ok(acc)
}

/// 1 + t y.
pub fn refined_tau(cap: Cap) -> GradedSeries<MultiPoly> {
    GradedSeries::from_terms(cap, [((0, 0), MultiPoly::one()), ((0, 1), MultiPoly::var(VarName::T))])
}

/// N[G] for one canonical graded partition.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinedEntry {
    pub h: u32,
    pub partition: GradedOrderedPartition,
    /// Ordered slot assignments with this canonical form; all share the value.
    pub multiplicity: u64,
    pub value: Rational,
}

/// Everything a refined run produced.
#[derive(Clone, Debug, PartialEq)]
pub struct RefinedOutput {
    pub chi: u32,
    pub d1: u32,
    pub cap: Cap,
    pub rays: BTreeMap<Ray, Vec<RefinedEntry>>,
    /// (ray, h) whose x-degree h·a exceeds d1: grades above d1 are missing.
    pub out_of_cap: Vec<(Ray, u32)>,
}

impl RefinedOutput {
    pub fn reports(&self) -> Vec<GwReport<Rational>> {
        self.rays
            .iter()
            .map(|(&ray, entries)| GwReport {
                ray,
                records: entries
                    .iter()
                    .map(|e| GwRecord {
                        ray,
                        h: e.h,
                        value: e.value.clone(),
                        partition: Some(e.partition.clone()),
                        multiplicity: Some(e.multiplicity),
                    })
                    .collect(),
            })
            .collect()
    }
}

fn decode_monomial(m: &Monomial, chi: u32, d1: u32, h: u32, ray: Ray) -> Result<GradedOrderedPartition> {
    let mut grades: Vec<Vec<u32>> = (1..=d1).map(|j| vec![0; (j * chi) as usize]).collect();
    let mut t_exp = 0;
    for &(v, e) in m.iter() {
        match v {
            VarName::T => t_exp = e,
            VarName::S(j, k) if j <= d1 && k <= j * chi => grades[j as usize - 1][k as usize - 1] = j * e,
            other => {
                return Err(Error::InvalidArgument(format!("unexpected variable {other} in log f")));
            }
        }
    }
    let g = GradedOrderedPartition::new(grades).expect("parts are multiples of their grade");
    if t_exp != h * ray.r || g.size() != h * ray.a {
        return Err(Error::InvalidArgument(format!(
            "monomial {m} does not have bidegree ({}, {})",
            h * ray.a,
            h * ray.r
        )));
    }
    Ok(g)
}

/// Factorizes τ^{-1}σ^{-1}τσ with generic σ, τ and reads N[G] off every
/// monomial s^{P} t^{hr} of log f on each primitive ray in the cap.
pub fn refined_commutator(chi: u32, d1: u32, cap: Cap) -> Result<RefinedOutput> {
    if chi == 0 || d1 == 0 {
        return Err(Error::InvalidArgument("refined runs need χ ≥ 1 and d1 ≥ 1".into()));
    }
    let count = refined_monomial_count(chi, d1, cap.a_bound());
    if count > MAX_REFINED_MONOMIALS {
        return Err(Error::CapTooLarge(format!(
            "{count} s-monomials for χ = {chi}, d1 = {d1}, x-degree ≤ {} (limit {MAX_REFINED_MONOMIALS})",
            cap.a_bound()
        )));
    }
    let sigma = VertexGenerator::new(Ray { a: 1, r: 0 }, refined_sigma(chi, d1, cap)?)?;
    let tau = VertexGenerator::new(Ray { a: 0, r: 1 }, refined_tau(cap))?;
    let word = commutator(&VertexWord::single(sigma.inverse()), &VertexWord::single(tau))?;
    let fact = factorize(&word, cap, SlopeOrder::Desc)?;

    let mut rays = BTreeMap::new();
    let mut out_of_cap = Vec::new();
    for (ray, f) in fact.rays() {
        if ray.a == 0 || ray.r == 0 {
            continue;
        }
        let log = f.log()?;
        let mut ordered: BTreeMap<GradedOrderedPartition, (u32, Rational)> = BTreeMap::new();
        let mut h = 1;
        while cap.contains(h * ray.a, h * ray.r) {
            if h * ray.a > d1 {
                out_of_cap.push((*ray, h));
            }
            let c = log.get(h * ray.a, h * ray.r);
            for (m, q) in c.terms() {
                let g = decode_monomial(m, chi, d1, h, *ray)?;
                let value = q.clone() * Rational::new(1, h as i64);
                if ordered.insert(g.clone(), (h, value)).is_some() {
                    return Err(Error::InvalidArgument(format!("partition {g:?} decoded twice")));
                }
            }
            h += 1;
        }
        let mut canon: BTreeMap<(u32, GradedOrderedPartition), (u64, Rational)> = BTreeMap::new();
        for (g, (h, value)) in ordered {
            let key = (h, g.canonical());
            match canon.get_mut(&key) {
                Some((n, v)) => {
                    if *v != value {
                        return Err(Error::InvalidArgument(format!(
                            "slot permutations of {:?} disagree: {v} vs {value}",
                            key.1
                        )));
                    }
                    *n += 1;
                }
                None => {
                    canon.insert(key, (1, value));
                }
            }
        }
        let entries: Vec<RefinedEntry> = canon
            .into_iter()
            .map(|((h, partition), (multiplicity, value))| {
                debug_assert_eq!(multiplicity, partition.orbit_size());
                RefinedEntry { h, partition, multiplicity, value }
            })
            .collect();
        if !entries.is_empty() {
            rays.insert(*ray, entries);
        }
    }
    Ok(RefinedOutput { chi, d1, cap, rays, out_of_cap })
}

/// Values substituted for s_j_k and t when specializing to D0-D6.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum D0d6Convention {
    /// s_j_k = -u^j, t = -u: σ = M(ux)^{-χ}, τ = 1 - uy. Matches the factorized commutator.
    Pinned,
    /// s_j_k = (-1)^j u^j, t = -u.
    SignedPowers,
    /// s_j_k = -(-u)^j, t = -u: σ = M(-ux)^{-χ}.
    NegatedArgument,
}

impl D0d6Convention {
    pub const ALL: [D0d6Convention; 3] =
        [D0d6Convention::Pinned, D0d6Convention::SignedPowers, D0d6Convention::NegatedArgument];

    fn s_value<C: CoeffRing>(&self, j: u32, u: &C) -> C {
        let uj = u.pow(j);
        match self {
            D0d6Convention::Pinned => uj.neg(),
            D0d6Convention::SignedPowers => {
                if j.is_multiple_of(2) {
                    uj
                } else {
                    uj.neg()
                }
            }
            D0d6Convention::NegatedArgument => {
                if j.is_multiple_of(2) {
                    uj.neg()
                } else {
                    uj
                }
            }
        }
    }
}

/// Collapses refined N[G] to aggregates:
/// N_h·u^{h(a+r)} = (-1)^{h(a+r)} Σ_G multiplicity·N[G]·s^{P}t^{hr}, evaluated
/// at the convention's values of s_j_k and t. Cells beyond grade d1 are dropped.
pub fn specialize_to_d0d6<C: CoeffRing>(
    refined: &RefinedOutput,
    convention: D0d6Convention,
    u: &C,
) -> Vec<GwReport<C>> {
    let t_value = u.neg();
    let mut out = Vec::new();
    for (&ray, entries) in &refined.rays {
        let mut sums: BTreeMap<u32, C> = BTreeMap::new();
        for e in entries {
            if e.h * ray.a > refined.d1 {
                continue;
            }
            let mut mono = t_value.pow(e.h * ray.r);
            for (i, parts) in e.partition.grades().iter().enumerate() {
                let j = i as u32 + 1;
                let s = convention.s_value(j, u);
                for &p in parts {
                    mono = mono.mul(&s.pow(p / j));
                }
            }
            let term = mono.scale(&(e.value.clone() * Rational::from_int(e.multiplicity as i64)));
            sums.entry(e.h).or_insert_with(C::zero).add_assign(&term);
        }
        let records: Vec<GwRecord<C>> = sums
            .into_iter()
            .map(|(h, v)| GwRecord {
                ray,
                h,
                value: v.scale(&Rational::from_int(gw_sign(h, ray))),
                partition: None,
                multiplicity: None,
            })
            .filter(|r| !r.value.is_zero())
            .collect();
        if !records.is_empty() {
            out.push(GwReport { ray, records });
        }
    }
    out
}

/// Aggregate reports for every mixed primitive ray of the D0-D6 commutator,
/// restricted to cells with h·a ≤ a_limit. Zero values are dropped.
pub fn aggregate_reports<C: CoeffRing>(chi: &C, cap: Cap, a_limit: u32) -> Result<Vec<GwReport<C>>> {
    let fact = factorize(&d0d6_commutator(chi, cap)?, cap, SlopeOrder::Desc)?;
    let mut rays: Vec<Ray> = fact.rays().iter().map(|(r, _)| *r).filter(|r| r.a > 0 && r.r > 0).collect();
    rays.sort();
    let mut out = Vec::new();
    for ray in rays {
        let records: Vec<GwRecord<C>> = aggregate_gw(&fact.function(ray), ray)?
            .into_iter()
            .filter(|r| r.h * ray.a <= a_limit && !r.value.is_zero())
            .collect();
        if !records.is_empty() {
            out.push(GwReport { ray, records });
        }
    }
    Ok(out)
}
