//! Truncated bivariate power series in x, y graded by exponent pairs (a, r).

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, MultiPoly, Rational, VarName};

/// Retained exponent region. Both shapes are downward closed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Cap {
    Box { a_max: u32, r_max: u32 },
    Total { n_max: u32 },
}

impl Cap {
    pub fn boxed(a_max: u32, r_max: u32) -> Self {
        Cap::Box { a_max, r_max }
    }

    pub fn total(n_max: u32) -> Self {
        Cap::Total { n_max }
    }

    pub fn contains(&self, a: u32, r: u32) -> bool {
        match *self {
            Cap::Box { a_max, r_max } => a <= a_max && r <= r_max,
            Cap::Total { n_max } => a + r <= n_max,
        }
    }

    /// Largest x-exponent retained.
    pub fn a_bound(&self) -> u32 {
        match *self {
            Cap::Box { a_max, .. } => a_max,
            Cap::Total { n_max } => n_max,
        }
    }

    /// Largest y-exponent retained.
    pub fn r_bound(&self) -> u32 {
        match *self {
            Cap::Box { r_max, .. } => r_max,
            Cap::Total { n_max } => n_max,
        }
    }

    /// Largest total degree retained.
    pub fn max_total(&self) -> u32 {
        match *self {
            Cap::Box { a_max, r_max } => a_max + r_max,
            Cap::Total { n_max } => n_max,
        }
    }

    /// All retained exponents, sorted by (a + r, a).
    pub fn exponents(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for n in 0..=self.max_total() {
            for a in 0..=n {
                if self.contains(a, n - a) {
                    out.push((a, n - a));
                }
            }
        }
        out
    }
}

impl fmt::Display for Cap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cap::Box { a_max, r_max } => write!(f, "Box{{{a_max},{r_max}}}"),
            Cap::Total { n_max } => write!(f, "Total{{{n_max}}}"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

/// Sort key for exponents: total degree first, then a.
pub fn graded_key(&(a, r): &(u32, u32)) -> (u32, u32) {
    (a + r, a)
}

#[derive(Clone, PartialEq)]
pub struct GradedSeries<C> {
    cap: Cap,
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: CoeffRing> GradedSeries<C> {
    pub fn zero(cap: Cap) -> Self {
        GradedSeries { cap, terms: BTreeMap::new() }
    }

    pub fn one(cap: Cap) -> Self {
        Self::constant(cap, C::one())
    }

    pub fn constant(cap: Cap, c: C) -> Self {
        Self::monomial(cap, 0, 0, c)
    }

    /// c·x^a y^r, or zero if (a, r) is outside the cap.
    pub fn monomial(cap: Cap, a: u32, r: u32, c: C) -> Self {
        let mut s = Self::zero(cap);
        s.add_term(a, r, c);
        s
    }

    pub fn x(cap: Cap) -> Self {
        Self::monomial(cap, 1, 0, C::one())
    }

    pub fn y(cap: Cap) -> Self {
        Self::monomial(cap, 0, 1, C::one())
    }

    /// Builds a series, silently dropping out-of-cap exponents.
    pub fn from_terms(cap: Cap, terms: impl IntoIterator<Item = ((u32, u32), C)>) -> Self {
        let mut s = Self::zero(cap);
        for ((a, r), c) in terms {
            s.add_term(a, r, c);
        }
        s
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    /// Terms sorted by (a + r, a).
    pub fn sorted_terms(&self) -> Vec<((u32, u32), &C)> {
        let mut v: Vec<_> = self.terms.iter().map(|(k, c)| (*k, c)).collect();
        v.sort_by_key(|(k, _)| graded_key(k));
        v
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.get(0, 0).is_one()
    }

    /// Coefficient at (a, r), zero if absent. Panics never; see `coeff`.
    pub fn get(&self, a: u32, r: u32) -> C {
        self.terms.get(&(a, r)).cloned().unwrap_or_else(C::zero)
    }

    pub fn get_ref(&self, a: u32, r: u32) -> Option<&C> {
        self.terms.get(&(a, r))
    }

    pub fn coeff(&self, a: u32, r: u32) -> Result<C> {
        if !self.cap.contains(a, r) {
            return Err(Error::OutOfCap(a, r));
        }
        Ok(self.get(a, r))
    }

    pub fn constant_term(&self) -> C {
        self.get(0, 0)
    }

    /// Adds c to the coefficient of x^a y^r; ignored outside the cap.
    pub fn add_term(&mut self, a: u32, r: u32, c: C) {
        if c.is_zero() || !self.cap.contains(a, r) {
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

    fn check_cap(&self, other: &Self) -> Result<()> {
        if self.cap != other.cap {
            return Err(Error::CapMismatch(self.cap.to_string(), other.cap.to_string()));
        }
        Ok(())
    }

    pub fn add(&self, rhs: &Self) -> Result<Self> {
        self.check_cap(rhs)?;
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

    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        self.check_cap(rhs)?;
        let mut acc: BTreeMap<(u32, u32), C> = BTreeMap::new();
        for (&(a1, r1), c1) in &self.terms {
            for (&(a2, r2), c2) in &rhs.terms {
                let (a, r) = (a1 + a2, r1 + r2);
                if !self.cap.contains(a, r) {
                    continue;
                }
                acc.entry((a, r)).or_insert_with(C::zero).add_mul_assign(c1, c2);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(GradedSeries { cap: self.cap, terms: acc })
    }

    /// Product keeping only total degree ≤ n_max.
    pub fn mul_upto(&self, rhs: &Self, n_max: u32) -> Result<Self> {
        self.check_cap(rhs)?;
        let mut acc: BTreeMap<(u32, u32), C> = BTreeMap::new();
        for (&(a1, r1), c1) in &self.terms {
            if a1 + r1 > n_max {
                continue;
            }
            for (&(a2, r2), c2) in &rhs.terms {
                let (a, r) = (a1 + a2, r1 + r2);
                if a + r > n_max || !self.cap.contains(a, r) {
                    continue;
                }
                acc.entry((a, r)).or_insert_with(C::zero).add_mul_assign(c1, c2);
            }
        }
        acc.retain(|_, c| !c.is_zero());
        Ok(GradedSeries { cap: self.cap, terms: acc })
    }

    /// Drops terms of total degree above n_max.
    pub fn truncate_total(&self, n_max: u32) -> Self {
        let terms = self
            .terms
            .iter()
            .filter(|(&(a, r), _)| a + r <= n_max)
            .map(|(k, c)| (*k, c.clone()))
            .collect();
        GradedSeries { cap: self.cap, terms }
    }

    /// Multiplies every coefficient by a ring element.
    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.mul(c))
    }

    pub fn scale_rational(&self, q: &Rational) -> Self {
        self.map(|x| x.scale(q))
    }

    /// Multiplies by x^a y^r.
    pub fn shift(&self, a: u32, r: u32) -> Self {
        GradedSeries::from_terms(
            self.cap,
            self.terms.iter().map(|(&(a0, r0), c)| ((a0 + a, r0 + r), c.clone())),
        )
    }

    /// Applies `f` to every coefficient, dropping zeros.
    pub fn map(&self, f: impl Fn(&C) -> C) -> Self {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let v = f(c);
                (!v.is_zero()).then_some((*k, v))
            })
            .collect();
        GradedSeries { cap: self.cap, terms }
    }

    /// Changes coefficient ring.
    pub fn map_into<D: CoeffRing>(&self, f: impl Fn(&C) -> D) -> GradedSeries<D> {
        let terms = self
            .terms
            .iter()
            .filter_map(|(k, c)| {
                let v = f(c);
                (!v.is_zero()).then_some((*k, v))
            })
            .collect();
        GradedSeries { cap: self.cap, terms }
    }

    /// Re-truncates to another cap.
    pub fn with_cap(&self, cap: Cap) -> Self {
        GradedSeries::from_terms(cap, self.terms.iter().map(|(k, c)| (*k, c.clone())))
    }

    pub fn specialize(&self, bindings: &BTreeMap<VarName, Rational>) -> Self {
        self.map(|c| c.specialize(bindings))
    }

    pub fn substitute(&self, bindings: &BTreeMap<VarName, MultiPoly>) -> Self {
        self.map(|c| c.substitute(bindings))
    }

    /// Nonzero terms with exponent k ≠ 0 and k ≤ n componentwise.
    fn lower_terms(&self, (a, r): (u32, u32)) -> impl Iterator<Item = ((u32, u32), &C)> {
        self.terms
            .range((0, 0)..=(a, r))
            .filter(move |(&(ka, kr), _)| kr <= r && (ka, kr) != (0, 0) && ka <= a)
            .map(|(k, c)| (*k, c))
    }

    pub fn invert(&self) -> Result<Self> {
        let f0 = self.constant_term();
        let inv0 = f0
            .inverse()
            .ok_or_else(|| Error::NotInvertible(f0.to_string()))?;
        let mut h: BTreeMap<(u32, u32), C> = BTreeMap::new();
        for n in self.cap.exponents() {
            let mut acc = if n == (0, 0) { C::one() } else { C::zero() };
            if n != (0, 0) {
                for (k, fk) in self.lower_terms(n) {
                    if let Some(hv) = h.get(&(n.0 - k.0, n.1 - k.1)) {
                        acc.add_mul_assign(fk, &hv.neg());
                    }
                }
            }
            let v = acc.mul(&inv0);
            if !v.is_zero() {
                h.insert(n, v);
            }
        }
        Ok(GradedSeries { cap: self.cap, terms: h })
    }

    fn require_constant(&self, op: &'static str, want_one: bool) -> Result<()> {
        let c = self.constant_term();
        let ok = if want_one { c.is_one() } else { c.is_zero() };
        if ok {
            Ok(())
        } else {
            Err(Error::BadConstantTerm {
                op,
                expected: if want_one { "1" } else { "0" },
                found: c.to_string(),
            })
        }
    }

    /// Logarithm of a series with constant term 1.
    pub fn log(&self) -> Result<Self> {
        self.require_constant("log", true)?;
        // deg(n) g_n = deg(n) f_n - sum_{0<k<n} deg(k) g_k f_{n-k}
        let mut g: BTreeMap<(u32, u32), C> = BTreeMap::new();
        for n in self.cap.exponents() {
            if n == (0, 0) {
                continue;
            }
            let dn = (n.0 + n.1) as i64;
            let mut acc = self.get(n.0, n.1).scale(&Rational::from_int(dn));
            for (k, gk) in g.range((0, 0)..=n) {
                if k.0 > n.0 || k.1 > n.1 {
                    continue;
                }
                if let Some(fv) = self.terms.get(&(n.0 - k.0, n.1 - k.1)) {
                    let dk = Rational::from_int((k.0 + k.1) as i64);
                    acc.add_mul_assign(&gk.scale(&dk), &fv.neg());
                }
            }
            let v = acc.scale(&Rational::new(1, dn));
            if !v.is_zero() {
                g.insert(n, v);
            }
        }
        Ok(GradedSeries { cap: self.cap, terms: g })
    }

    /// Exponential of a series with constant term 0.
    pub fn exp(&self) -> Result<Self> {
        self.require_constant("exp", false)?;
        // deg(n) h_n = sum_{k ≠ 0} deg(k) g_k h_{n-k}
        let mut h: BTreeMap<(u32, u32), C> = BTreeMap::new();
        h.insert((0, 0), C::one());
        for n in self.cap.exponents() {
            if n == (0, 0) {
                continue;
            }
            let dn = (n.0 + n.1) as i64;
            let mut acc = C::zero();
            for (k, gk) in self.lower_terms(n) {
                if let Some(hv) = h.get(&(n.0 - k.0, n.1 - k.1)) {
                    let dk = Rational::from_int((k.0 + k.1) as i64);
                    acc.add_mul_assign(&gk.scale(&dk), hv);
                }
            }
            let v = acc.scale(&Rational::new(1, dn));
            if !v.is_zero() {
                h.insert(n, v);
            }
        }
        Ok(GradedSeries { cap: self.cap, terms: h })
    }

    /// f^e for f with constant term 1 and any ring element e.
    pub fn pow(&self, e: &C) -> Result<Self> {
        self.require_constant("pow", true)?;
        // deg(n) h_n = sum_{k ≠ 0} f_k h_{n-k} (e deg(k) - deg(n-k))
        let mut h: BTreeMap<(u32, u32), C> = BTreeMap::new();
        h.insert((0, 0), C::one());
        for n in self.cap.exponents() {
            if n == (0, 0) {
                continue;
            }
            let dn = (n.0 + n.1) as i64;
            let mut acc = C::zero();
            for (k, fk) in self.lower_terms(n) {
                let rest = (n.0 - k.0, n.1 - k.1);
                if let Some(hv) = h.get(&rest) {
                    let dk = Rational::from_int((k.0 + k.1) as i64);
                    let dr = Rational::from_int((rest.0 + rest.1) as i64);
                    let w = e.scale(&dk).sub(&C::from_rational(dr));
                    acc.add_mul_assign(&fk.mul(hv), &w);
                }
            }
            let v = acc.scale(&Rational::new(1, dn));
            if !v.is_zero() {
                h.insert(n, v);
            }
        }
        Ok(GradedSeries { cap: self.cap, terms: h })
    }

    /// f^n for an integer n; negative powers need an invertible constant term.
    pub fn pow_int(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.invert()? } else { self.clone() };
        let mut e = n.unsigned_abs();
        let mut b = base;
        let mut acc = Self::one(self.cap);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&b)?;
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b)?;
            }
        }
        Ok(acc)
    }

    pub fn partial(&self, var: Var) -> Self {
        let terms = self.terms.iter().filter_map(|(&(a, r), c)| match var {
            Var::X if a > 0 => Some(((a - 1, r), c.scale(&Rational::from_int(a as i64)))),
            Var::Y if r > 0 => Some(((a, r - 1), c.scale(&Rational::from_int(r as i64)))),
            _ => None,
        });
        GradedSeries::from_terms(self.cap, terms)
    }
}

/// M(±x)^power = ∏_{n ≤ a_bound} (1 - (±x)^n)^(-n·power), truncated to the cap.
pub fn macmahon<C: CoeffRing>(sign: Sign, power: &C, cap: Cap) -> GradedSeries<C> {
    // log(1 - s x^n)^(-n p) = n p sum_m s^m x^(nm) / m
    let amax = cap.a_bound();
    let mut g = GradedSeries::zero(cap);
    for n in 1..=amax {
        let s = match sign {
            Sign::Plus => 1,
            Sign::Minus => if n % 2 == 1 { -1 } else { 1 },
        };
        let mut m = 1;
        while n * m <= amax {
            let sm = if m % 2 == 1 { s } else { 1 };
            let q = Rational::new(sm * n as i64, m as i64);
            g.add_term(n * m, 0, power.scale(&q));
            m += 1;
        }
    }
    g.exp().expect("constant term is zero")
}

impl<C: fmt::Debug> fmt::Debug for GradedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GradedSeries[{}](", self.cap)?;
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by_key(|(k, _)| graded_key(k));
        for (n, ((a, r), c)) in v.into_iter().enumerate() {
            if n > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c:?})x^{a}y^{r}")?;
        }
        f.write_str(")")
    }
}

#[derive(Serialize, Deserialize)]
struct TermRepr<C> {
    a: u32,
    r: u32,
    coeff: C,
}

#[derive(Serialize, Deserialize)]
struct SeriesRepr<C> {
    cap: Cap,
    terms: Vec<TermRepr<C>>,
}

impl<C: CoeffRing> Serialize for GradedSeries<C> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let repr = SeriesRepr {
            cap: self.cap,
            terms: self
                .sorted_terms()
                .into_iter()
                .map(|((a, r), c)| TermRepr { a, r, coeff: c.clone() })
                .collect(),
        };
        repr.serialize(ser)
    }
}

impl<'de, C: CoeffRing> Deserialize<'de> for GradedSeries<C> {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let repr = SeriesRepr::<C>::deserialize(de)?;
        let mut s = GradedSeries::zero(repr.cap);
        for t in repr.terms {
            if !repr.cap.contains(t.a, t.r) {
                return Err(serde::de::Error::custom(Error::OutOfCap(t.a, t.r)));
            }
            s.add_term(t.a, t.r, t.coeff);
        }
        Ok(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type S = GradedSeries<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn s(cap: Cap, terms: &[((u32, u32), i64)]) -> S {
        S::from_terms(cap, terms.iter().map(|&(k, c)| (k, q(c))))
    }

    #[test]
    fn cap_shapes() {
        let b = Cap::boxed(2, 1);
        assert_eq!(b.exponents().len(), 6);
        assert!(b.contains(2, 1) && !b.contains(3, 0));
        let t = Cap::total(2);
        assert_eq!(t.exponents(), vec![(0, 0), (0, 1), (1, 0), (0, 2), (1, 1), (2, 0)]);
    }

    #[test]
    fn arithmetic_examples() {
        let c = Cap::boxed(2, 0);
        let p = s(c, &[((0, 0), 1), ((1, 0), 1)]).mul(&s(c, &[((0, 0), 1), ((1, 0), -1)])).unwrap();
        assert_eq!(p, s(c, &[((0, 0), 1), ((2, 0), -1)]));

        let c = Cap::total(2);
        let one_xy = s(c, &[((0, 0), 1), ((1, 1), 1)]);
        assert_eq!(one_xy.mul(&S::one(c)).unwrap(), one_xy);
        let f = s(c, &[((0, 0), 1), ((1, 0), 1), ((0, 1), 1)]);
        let sq = f.mul(&f).unwrap();
        let want = s(c, &[((0, 0), 1), ((1, 0), 2), ((0, 1), 2), ((2, 0), 1), ((1, 1), 2), ((0, 2), 1)]);
        assert_eq!(sq, want);
        assert!(matches!(f.mul(&S::one(Cap::total(3))), Err(Error::CapMismatch(..))));
    }

    #[test]
    fn invert_examples() {
        let c = Cap::boxed(3, 0);
        let g = s(c, &[((0, 0), 1), ((1, 0), -1)]).invert().unwrap();
        assert_eq!(g, s(c, &[((0, 0), 1), ((1, 0), 1), ((2, 0), 1), ((3, 0), 1)]));
        assert_eq!(S::one(c).invert().unwrap(), S::one(c));
        assert!(matches!(S::x(c).invert(), Err(Error::NotInvertible(_))));

        let c = Cap::total(6);
        let f = s(c, &[((0, 0), 1), ((1, 1), -1), ((2, 2), 1)]);
        let h = f.invert().unwrap();
        assert!(f.mul(&h).unwrap().is_one());
        // 1/(1 - u + u^2) = 1 + u - u^3 + ...
        assert_eq!(h, s(c, &[((0, 0), 1), ((1, 1), 1), ((3, 3), -1)]));
    }

    #[test]
    fn log_exp_examples() {
        let c = Cap::boxed(3, 0);
        assert!(S::one(c).log().unwrap().is_zero());
        let f = s(c, &[((0, 0), 1), ((1, 0), -1)]);
        let want = S::from_terms(
            c,
            [((1, 0), q(-1)), ((2, 0), Rational::new(-1, 2)), ((3, 0), Rational::new(-1, 3))],
        );
        assert_eq!(f.log().unwrap(), want);

        let c = Cap::total(8);
        let f = s(c, &[((0, 0), 1), ((1, 1), -1)]);
        assert_eq!(f.log().unwrap().exp().unwrap(), f);
        assert!(matches!(S::x(c).log(), Err(Error::BadConstantTerm { .. })));
        assert!(matches!(S::one(c).exp(), Err(Error::BadConstantTerm { .. })));
    }

    #[test]
    fn pow_examples() {
        let c = Cap::boxed(2, 0);
        let f = s(c, &[((0, 0), 1), ((1, 0), -1)]);
        assert_eq!(f.pow(&q(-1)).unwrap(), f.invert().unwrap());
        assert!(f.pow(&q(0)).unwrap().is_one());

        let c = Cap::total(4);
        let f: GradedSeries<MultiPoly> =
            GradedSeries::from_terms(c, [((0, 0), MultiPoly::one()), ((1, 1), MultiPoly::constant(q(-1)))]);
        let chi = MultiPoly::chi();
        let got = f.pow(&chi).unwrap();
        let quad = chi.pow(2).sub(&chi).scale(&Rational::new(1, 2));
        let want = GradedSeries::from_terms(c, [((0, 0), MultiPoly::one()), ((1, 1), chi.neg()), ((2, 2), quad)]);
        assert_eq!(got, want);
    }

    #[test]
    fn partial_examples() {
        let c = Cap::total(4);
        assert_eq!(s(c, &[((2, 1), 1)]).partial(Var::X), s(c, &[((1, 1), 2)]));
        assert!(S::one(c).partial(Var::Y).is_zero());
        let c = Cap::boxed(3, 0);
        let cube = s(c, &[((0, 0), 1), ((1, 0), 1)]).pow_int(3).unwrap();
        assert_eq!(cube.partial(Var::X), s(c, &[((0, 0), 3), ((1, 0), 6), ((2, 0), 3)]));
    }

    #[test]
    fn macmahon_examples() {
        let m = macmahon(Sign::Plus, &q(1), Cap::boxed(4, 0));
        assert_eq!(m, s(Cap::boxed(4, 0), &[((0, 0), 1), ((1, 0), 1), ((2, 0), 3), ((3, 0), 6), ((4, 0), 13)]));
        let m = macmahon(Sign::Minus, &q(1), Cap::boxed(3, 0));
        assert_eq!(m, s(Cap::boxed(3, 0), &[((0, 0), 1), ((1, 0), -1), ((2, 0), 3), ((3, 0), -6)]));
        assert!(macmahon(Sign::Plus, &q(0), Cap::boxed(5, 2)).is_one());
    }

    #[test]
    fn coeff_lookup() {
        let c = Cap::total(3);
        let f = s(c, &[((0, 0), 1), ((1, 1), 2)]);
        assert_eq!(f.coeff(1, 1).unwrap(), q(2));
        assert_eq!(S::one(Cap::boxed(5, 0)).coeff(5, 0).unwrap(), q(0));
        assert!(matches!(f.coeff(3, 1), Err(Error::OutOfCap(3, 1))));
        let m = macmahon(Sign::Minus, &q(1), Cap::boxed(4, 0));
        assert_eq!(m.coeff(4, 0).unwrap(), q(13));
    }

    #[test]
    fn serde_round_trip() {
        let c = Cap::boxed(2, 1);
        let f = S::from_terms(c, [((0, 0), q(1)), ((2, 1), Rational::new(-3, 4)), ((1, 0), q(5))]);
        let js = serde_json::to_string(&f).unwrap();
        assert!(js.starts_with("{\"cap\":{\"kind\":\"box\",\"a_max\":2,\"r_max\":1}"));
        let back: S = serde_json::from_str(&js).unwrap();
        assert_eq!(back, f);
    }
}
