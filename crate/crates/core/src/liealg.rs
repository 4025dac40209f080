//! The graded Lie algebra with twisted bracket [e_ξ, e_η] = (-1)^⟨ξ,η⟩ ⟨ξ,η⟩ e_{ξ+η}.

use std::collections::BTreeMap;
use std::fmt;

use crate::combinat::{composition_pairs, factorial};
use crate::error::{Error, Result};
use crate::ring::{CoeffRing, Rational};
use crate::series::Cap;
use crate::vertex::{Ray, SlopeOrder};

/// Largest BCH order we are willing to expand.
pub const MAX_BCH_ORDER: usize = 32;

/// ⟨(a, r), (a', r')⟩ = a r' − r a'.
pub fn pairing((a, r): (u32, u32), (a2, r2): (u32, u32)) -> i64 {
    a as i64 * r2 as i64 - r as i64 * a2 as i64
}

/// Finitely supported element Σ c_η e_η, truncated to a cap and optionally
/// to the quotient by classes with r > R.
#[derive(Clone, PartialEq)]
pub struct LieElement<C> {
    cap: Cap,
    r_quotient: Option<u32>,
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: CoeffRing> LieElement<C> {
    pub fn zero(cap: Cap, r_quotient: Option<u32>) -> Self {
        LieElement { cap, r_quotient, terms: BTreeMap::new() }
    }

    pub fn basis(cap: Cap, r_quotient: Option<u32>, a: u32, r: u32, c: C) -> Self {
        let mut e = Self::zero(cap, r_quotient);
        e.add_term(a, r, c);
        e
    }

    pub fn from_terms(
        cap: Cap,
        r_quotient: Option<u32>,
        terms: impl IntoIterator<Item = ((u32, u32), C)>,
    ) -> Self {
        let mut e = Self::zero(cap, r_quotient);
        for ((a, r), c) in terms {
            e.add_term(a, r, c);
        }
        e
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    pub fn r_quotient(&self) -> Option<u32> {
        self.r_quotient
    }

    fn keeps(&self, a: u32, r: u32) -> bool {
        (a, r) != (0, 0) && self.cap.contains(a, r) && self.r_quotient.is_none_or(|q| r <= q)
    }

    /// Adds c·e_{(a,r)}; dropped if outside the cap or quotient.
    pub fn add_term(&mut self, a: u32, r: u32, c: C) {
        if c.is_zero() || !self.keeps(a, r) {
            return;
        }
        match self.terms.entry((a, r)) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&c);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn get(&self, a: u32, r: u32) -> C {
        self.terms.get(&(a, r)).cloned().unwrap_or_else(C::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.cap != other.cap || self.r_quotient != other.r_quotient {
            return Err(Error::CapMismatch(
                format!("{} / r ≤ {:?}", self.cap, self.r_quotient),
                format!("{} / r ≤ {:?}", other.cap, other.r_quotient),
            ));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        let mut out = self.clone();
        for (&(a, r), c) in &rhs.terms {
            out.add_term(a, r, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, rhs: &Self) -> Result<Self> {
        self.add(&rhs.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|c| c.neg())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.map(|x| x.scale(q))
    }

    fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let v = f(c);
                (!v.is_zero()).then_some((*k, v))
            })
            .collect();
        LieElement { cap: self.cap, r_quotient: self.r_quotient, terms }
    }

    /// Smallest total degree a + r in the support.
    fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(a, r)| a + r).min()
    }

    fn min_r(&self) -> Option<u32> {
        self.terms.keys().map(|&(_, r)| r).min()
    }

    pub fn bracket(&self, rhs: &Self) -> Result<Self> {
        self.check(rhs)?;
        let mut out = Self::zero(self.cap, self.r_quotient);
        for (&x, cx) in &self.terms {
            for (&y, cy) in &rhs.terms {
                let p = pairing(x, y);
                if p == 0 || !self.keeps(x.0 + y.0, x.1 + y.1) {
                    continue;
                }
                let w = if p % 2 == 0 { p } else { -p };
                out.add_term(x.0 + y.0, x.1 + y.1, cx.mul(cy).scale(&Rational::from_int(w)));
            }
        }
        Ok(out)
    }
}

impl<C: fmt::Debug> fmt::Debug for LieElement<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("LieElement(")?;
        for (n, ((a, r), c)) in self.terms.iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c:?})e({a},{r})")?;
        }
        f.write_str(")")
    }
}

/// χ Σ_{n,i ≥ 1} e_{(in, 0)} / i².
pub fn op_a<C: CoeffRing>(chi: &C, cap: Cap, r_quotient: Option<u32>) -> LieElement<C> {
    let mut e = LieElement::zero(cap, r_quotient);
    for m in 1..=cap.a_bound() {
        for i in crate::combinat::divisors(m) {
            e.add_term(m, 0, chi.scale(&Rational::new(1, (i * i) as i64)));
        }
    }
    e
}

/// −Σ_{j ≥ 1} e_{(0, j)} / j².
pub fn op_b<C: CoeffRing>(cap: Cap, r_quotient: Option<u32>) -> LieElement<C> {
    let mut e = LieElement::zero(cap, r_quotient);
    for j in 1..=cap.r_bound() {
        e.add_term(0, j, C::from_rational(Rational::new(-1, (j * j) as i64)));
    }
    e
}

/// Closed form of Ad_A^k(B):
/// −χ^k Σ_{n,i} Σ_j (−1)^{j n·i} j^{k−2} ∏n/∏i e_{(n·i, j)}.
pub fn ad_power_closed<C: CoeffRing>(k: usize, chi: &C, cap: Cap) -> LieElement<C> {
    assert!(k >= 1, "ad power needs k ≥ 1");
    let mut e = LieElement::zero(cap, None);
    let chik = chi.pow(k as u32);
    for a in 1..=cap.a_bound() {
        let mut weight = Rational::zero();
        for pair in composition_pairs(a, k) {
            let np: i64 = pair.n.iter().map(|&x| x as i64).product();
            let ip: i64 = pair.i.iter().map(|&x| x as i64).product();
            weight += Rational::new(np, ip);
        }
        if weight.is_zero() {
            continue;
        }
        for j in 1..=cap.r_bound() {
            if !cap.contains(a, j) {
                continue;
            }
            let sign = Rational::sign_pow(j as i64 * a as i64);
            let jpow = Rational::from_int(j as i64).pow(k as i32 - 2);
            let q = -(sign * jpow * &weight);
            e.add_term(a, j, chik.scale(&q));
        }
    }
    e
}

/// log(exp(A) exp(B) exp(−A)) in closed form.
pub fn log_lhs_closed<C: CoeffRing>(chi: &C, cap: Cap) -> LieElement<C> {
    let mut e = op_b(cap, None);
    for k in 1..=cap.a_bound() as usize {
        let term = ad_power_closed(k, chi, cap);
        let inv = Rational::from_big(1.into(), factorial(k as u32));
        e = e.add(&term.scale_rational(&inv)).expect("same cap");
    }
    e
}

/// B + Σ_{k ≤ k_max} ad_A^k(B) / k!, by iterated brackets.
pub fn bch_conjugate<C: CoeffRing>(
    a: &LieElement<C>,
    b: &LieElement<C>,
    k_max: usize,
) -> Result<LieElement<C>> {
    let mut out = b.clone();
    let mut term = b.clone();
    for k in 1..=k_max {
        term = a.bracket(&term)?;
        if term.is_zero() {
            break;
        }
        let inv = Rational::from_big(1.into(), factorial(k as u32));
        out = out.add(&term.scale_rational(&inv))?;
    }
    Ok(out)
}

/// Bernoulli numbers B_0..=B_n (B_1 = −1/2).
pub fn bernoulli(n: usize) -> Vec<Rational> {
    let mut b = vec![Rational::one()];
    for m in 1..=n {
        // Σ_{k<m} C(m+1, k) B_k = −(m+1) B_m
        let mut acc = Rational::zero();
        let mut binom = Rational::one();
        for (k, bk) in b.iter().enumerate() {
            acc += &binom * bk;
            binom *= Rational::new((m + 1 - k) as i64, (k + 1) as i64);
        }
        b.push(-acc / Rational::from_int(m as i64 + 1));
    }
    b
}

/// log(exp(u) exp(v)), expanded with the Varadarajan recursion
/// (n+1) Z_{n+1} = ½[u−v, Z_n] + Σ_p B_{2p}/(2p)! Σ_{k_1+…+k_{2p}=n}
/// [Z_{k_1}, [… [Z_{k_{2p}}, u+v]…]].
pub fn bch_multiply<C: CoeffRing>(u: &LieElement<C>, v: &LieElement<C>) -> Result<LieElement<C>> {
    u.check(v)?;
    if u.is_zero() {
        return Ok(v.clone());
    }
    if v.is_zero() {
        return Ok(u.clone());
    }
    let order = bch_order_bound(u, v);
    if order > MAX_BCH_ORDER {
        return Err(Error::NotNilpotent(order));
    }
    let sum = u.add(v)?;
    let diff = u.sub(v)?;
    let bern = bernoulli(order);
    let mut z: Vec<LieElement<C>> = vec![LieElement::zero(u.cap, u.r_quotient), sum.clone()];
    for n in 1..order {
        let mut next = diff.bracket(&z[n])?.scale_rational(&Rational::new(1, 2));
        let mut p = 1;
        while 2 * p <= n {
            let coef = &bern[2 * p] / &Rational::from_bigint(factorial(2 * p as u32));
            if !coef.is_zero() {
                let nested = nested_sum(&z, &sum, 2 * p, n)?;
                next = next.add(&nested.scale_rational(&coef))?;
            }
            p += 1;
        }
        z.push(next.scale_rational(&Rational::new(1, n as i64 + 1)));
    }
    let mut out = LieElement::zero(u.cap, u.r_quotient);
    for zn in &z[1..] {
        out = out.add(zn)?;
    }
    Ok(out)
}

/// Σ over k_1+…+k_m = n (k_i ≥ 1) of [Z_{k_1}, [Z_{k_2}, … [Z_{k_m}, w]…]].
fn nested_sum<C: CoeffRing>(
    z: &[LieElement<C>],
    w: &LieElement<C>,
    m: usize,
    n: usize,
) -> Result<LieElement<C>> {
    // memo[j][s]: sum over compositions of s into the last j slots
    let mut level: BTreeMap<usize, LieElement<C>> = BTreeMap::new();
    level.insert(0, w.clone());
    for _ in 0..m {
        let mut next: BTreeMap<usize, LieElement<C>> = BTreeMap::new();
        for (&s, inner) in &level {
            if inner.is_zero() {
                continue;
            }
            for (k, zk) in z.iter().enumerate().skip(1) {
                if s + k > n {
                    break;
                }
                let t = zk.bracket(inner)?;
                if t.is_zero() {
                    continue;
                }
                let slot = next.entry(s + k).or_insert_with(|| LieElement::zero(w.cap, w.r_quotient));
                *slot = slot.add(&t)?;
            }
        }
        level = next;
    }
    Ok(level.remove(&n).unwrap_or_else(|| LieElement::zero(w.cap, w.r_quotient)))
}

/// Order beyond which every nested bracket of u and v vanishes.
fn bch_order_bound<C: CoeffRing>(u: &LieElement<C>, v: &LieElement<C>) -> usize {
    let dmin = u.min_degree().into_iter().chain(v.min_degree()).min().unwrap_or(1).max(1);
    let mut bound = (u.cap.max_total() / dmin) as usize;
    if let Some(q) = u.r_quotient {
        let rmin = u.min_r().into_iter().chain(v.min_r()).min().unwrap_or(0);
        if rmin >= 1 {
            bound = bound.min((q / rmin) as usize);
        }
    }
    bound.max(1)
}

/// log T^Ω_η = −Ω Σ_n e_{nη} / n².
pub fn log_t<C: CoeffRing>(cap: Cap, r_quotient: Option<u32>, a: u32, r: u32, omega: &C) -> LieElement<C> {
    let mut e = LieElement::zero(cap, r_quotient);
    let mut n = 1;
    while cap.contains(n * a, n * r) && r_quotient.is_none_or(|q| n * r <= q) {
        e.add_term(n * a, n * r, omega.scale(&Rational::new(-1, (n * n) as i64)));
        n += 1;
    }
    e
}

/// Ω(a, r) for r ≤ R and a ≤ a_max from log(lhs) = log ∏→ T^{Ω(η)}_η,
/// solved one γ-level at a time in g/g_{>R}.
pub fn solve_omega_liepath<C: CoeffRing>(
    chi: &C,
    r_max: u32,
    a_max: u32,
) -> Result<BTreeMap<(u32, u32), C>> {
    if !(1..=3).contains(&r_max) {
        return Err(Error::InvalidArgument(format!("Lie path supports 1 ≤ R ≤ 3, got {r_max}")));
    }
    let cap = Cap::boxed(a_max, r_max);
    let q = Some(r_max);
    let lhs = restrict(&log_lhs_closed(chi, cap), q);
    let mut omega: BTreeMap<(u32, u32), C> = BTreeMap::new();
    for r in 1..=r_max {
        let rhs0 = log_rhs(&omega, cap, q)?;
        for a in 0..=a_max {
            let val = rhs0.get(a, r).sub(&lhs.get(a, r));
            omega.insert((a, r), val);
        }
    }
    Ok(omega)
}

fn restrict<C: CoeffRing>(e: &LieElement<C>, q: Option<u32>) -> LieElement<C> {
    LieElement::from_terms(e.cap, q, e.terms().map(|(k, c)| (*k, c.clone())))
}

/// BCH product of the ray factors, in decreasing slope order.
fn log_rhs<C: CoeffRing>(
    omega: &BTreeMap<(u32, u32), C>,
    cap: Cap,
    q: Option<u32>,
) -> Result<LieElement<C>> {
    let mut rays: BTreeMap<Ray, LieElement<C>> = BTreeMap::new();
    for (&(a, r), om) in omega {
        if om.is_zero() {
            continue;
        }
        let (ray, _) = Ray { a, r }.primitive();
        let slot = rays.entry(ray).or_insert_with(|| LieElement::zero(cap, q));
        *slot = slot.add(&log_t(cap, q, a, r, om))?;
    }
    let mut ordered: Vec<(Ray, LieElement<C>)> = rays.into_iter().collect();
    ordered.sort_by(|x, y| SlopeOrder::Desc.compare(&x.0, &y.0));
    let mut acc = LieElement::zero(cap, q);
    for (_, l) in ordered {
        acc = bch_multiply(&acc, &l)?;
    }
    Ok(acc)
}
