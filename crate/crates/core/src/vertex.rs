//! The tropical vertex group: ray automorphisms, words, and ordered-product
//! factorization.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ring::{CoeffRing, Rational};
use crate::series::{Cap, GradedSeries, Var};

/// Direction (a, r) in the positive quadrant, not (0, 0).
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Ray {
    pub a: u32,
    pub r: u32,
}

impl Ray {
    pub fn new(a: u32, r: u32) -> Result<Self> {
        if a == 0 && r == 0 {
            return Err(Error::InvalidArgument("ray (0, 0)".into()));
        }
        Ok(Ray { a, r })
    }

    pub fn multiplicity(&self) -> u32 {
        self.a.gcd(&self.r)
    }

    pub fn is_primitive(&self) -> bool {
        self.multiplicity() == 1
    }

    /// Primitive direction and the multiple k with self = k·primitive.
    pub fn primitive(&self) -> (Ray, u32) {
        let g = self.multiplicity();
        (Ray { a: self.a / g, r: self.r / g }, g)
    }

    /// (-1)^{a r}
    pub fn sign(&self) -> i64 {
        if (self.a as u64 * self.r as u64).is_multiple_of(2) {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for Ray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.a, self.r)
    }
}

/// Order in which ray factors are composed.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlopeOrder {
    /// Decreasing r/a: (0, 1) first and (1, 0) last.
    #[default]
    Desc,
    Asc,
}

impl SlopeOrder {
    pub fn compare(&self, p: &Ray, q: &Ray) -> Ordering {
        // p comes first in Desc iff r_p/a_p > r_q/a_q
        let lhs = p.r as u64 * q.a as u64;
        let rhs = q.r as u64 * p.a as u64;
        match self {
            SlopeOrder::Desc => rhs.cmp(&lhs),
            SlopeOrder::Asc => lhs.cmp(&rhs),
        }
    }
}

/// θ_{ray, f}: x ↦ f^{-r} x, y ↦ f^{a} y, with f a series in x^a y^r.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexGenerator<C> {
    ray: Ray,
    f: GradedSeries<C>,
}

impl<C: CoeffRing> VertexGenerator<C> {
    /// Validates that the ray is primitive and f = 1 + (terms on the ray).
    pub fn new(ray: Ray, f: GradedSeries<C>) -> Result<Self> {
        if !ray.is_primitive() {
            return Err(Error::InvalidArgument(format!("ray {ray} is not primitive")));
        }
        if !f.constant_term().is_one() {
            return Err(Error::InvalidArgument(format!(
                "ray function must start with 1, found {}",
                f.constant_term()
            )));
        }
        for (&(a, r), _) in f.terms() {
            if (a, r) == (0, 0) {
                continue;
            }
            let on_ray = a as u64 * ray.r as u64 == r as u64 * ray.a as u64;
            if !on_ray {
                return Err(Error::InvalidArgument(format!(
                    "term x^{a} y^{r} is off the ray {ray}"
                )));
            }
        }
        Ok(VertexGenerator { ray, f })
    }

    /// θ_{k·ray, f} rewritten as θ_{ray, f^k}.
    pub fn along(ray: Ray, f: GradedSeries<C>) -> Result<Self> {
        let (prim, k) = ray.primitive();
        let f = if k == 1 { f } else { f.pow_int(k as i64)? };
        Self::new(prim, f)
    }

    pub fn ray(&self) -> Ray {
        self.ray
    }

    pub fn f(&self) -> &GradedSeries<C> {
        &self.f
    }

    pub fn cap(&self) -> Cap {
        self.f.cap()
    }

    pub fn inverse(&self) -> Self {
        VertexGenerator {
            ray: self.ray,
            f: self.f.invert().expect("ray function has constant term 1"),
        }
    }

    pub fn with_cap(&self, cap: Cap) -> Self {
        VertexGenerator { ray: self.ray, f: self.f.with_cap(cap) }
    }

    /// Applies the automorphism to a series, keeping total degree ≤ n_max.
    pub fn apply_upto(&self, s: &GradedSeries<C>, n_max: u32) -> Result<GradedSeries<C>> {
        if s.cap() != self.cap() {
            return Err(Error::CapMismatch(s.cap().to_string(), self.cap().to_string()));
        }
        if self.f.is_one() {
            return Ok(s.truncate_total(n_max));
        }
        let (a, r) = (self.ray.a as i64, self.ray.r as i64);
        // group monomials by the exponent of f they pick up
        let mut parts: BTreeMap<i64, GradedSeries<C>> = BTreeMap::new();
        for (&(al, be), c) in s.terms() {
            if al + be > n_max {
                continue;
            }
            let e = a * be as i64 - r * al as i64;
            parts
                .entry(e)
                .or_insert_with(|| GradedSeries::zero(s.cap()))
                .add_term(al, be, c.clone());
        }
        let mut powers = PowerCache::new(&self.f, n_max);
        let mut out = GradedSeries::zero(s.cap());
        for (e, part) in parts {
            let fe = powers.get(e)?;
            out = out.add(&fe.mul_upto(&part, n_max)?)?;
        }
        Ok(out)
    }

    pub fn apply(&self, s: &GradedSeries<C>) -> Result<GradedSeries<C>> {
        self.apply_upto(s, s.cap().max_total())
    }
}

/// Integer powers of one series, computed on demand.
struct PowerCache<'a, C> {
    f: &'a GradedSeries<C>,
    finv: Option<GradedSeries<C>>,
    n_max: u32,
    pos: Vec<GradedSeries<C>>,
    neg: Vec<GradedSeries<C>>,
}

impl<'a, C: CoeffRing> PowerCache<'a, C> {
    fn new(f: &'a GradedSeries<C>, n_max: u32) -> Self {
        let one = GradedSeries::one(f.cap());
        PowerCache { f, finv: None, n_max, pos: vec![one.clone()], neg: vec![one] }
    }

    fn get(&mut self, e: i64) -> Result<&GradedSeries<C>> {
        let n = e.unsigned_abs() as usize;
        if e >= 0 {
            let base = self.f.truncate_total(self.n_max);
            while self.pos.len() <= n {
                let next = self.pos.last().unwrap().mul_upto(&base, self.n_max)?;
                self.pos.push(next);
            }
            Ok(&self.pos[n])
        } else {
            if self.finv.is_none() {
                self.finv = Some(self.f.truncate_total(self.n_max).invert()?);
            }
            let base = self.finv.as_ref().unwrap();
            while self.neg.len() <= n {
                let next = self.neg.last().unwrap().mul_upto(base, self.n_max)?;
                self.neg.push(next);
            }
            Ok(&self.neg[n])
        }
    }
}

/// Ordered word [g1, ..., gn] acting as g1 ∘ ... ∘ gn.
#[derive(Clone, Debug, PartialEq)]
pub struct VertexWord<C> {
    cap: Cap,
    gens: Vec<VertexGenerator<C>>,
}

impl<C: CoeffRing> VertexWord<C> {
    pub fn identity(cap: Cap) -> Self {
        VertexWord { cap, gens: Vec::new() }
    }

    pub fn new(cap: Cap, gens: Vec<VertexGenerator<C>>) -> Result<Self> {
        for g in &gens {
            if g.cap() != cap {
                return Err(Error::CapMismatch(cap.to_string(), g.cap().to_string()));
            }
        }
        Ok(VertexWord { cap, gens })
    }

    pub fn single(g: VertexGenerator<C>) -> Self {
        VertexWord { cap: g.cap(), gens: vec![g] }
    }

    pub fn cap(&self) -> Cap {
        self.cap
    }

    pub fn generators(&self) -> &[VertexGenerator<C>] {
        &self.gens
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// self ∘ other
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.cap != other.cap {
            return Err(Error::CapMismatch(self.cap.to_string(), other.cap.to_string()));
        }
        let mut gens = self.gens.clone();
        gens.extend(other.gens.iter().cloned());
        Ok(VertexWord { cap: self.cap, gens })
    }

    pub fn inverse(&self) -> Self {
        VertexWord { cap: self.cap, gens: self.gens.iter().rev().map(|g| g.inverse()).collect() }
    }

    pub fn with_cap(&self, cap: Cap) -> Self {
        VertexWord { cap, gens: self.gens.iter().map(|g| g.with_cap(cap)).collect() }
    }

    pub fn apply(&self, s: &GradedSeries<C>) -> Result<GradedSeries<C>> {
        let mut cur = s.clone();
        for g in self.gens.iter().rev() {
            cur = g.apply(&cur)?;
        }
        Ok(cur)
    }

    /// Unit parts (U, V) of the images x ↦ x·U, y ↦ y·V.
    pub fn unit_images(&self) -> Result<(GradedSeries<C>, GradedSeries<C>)> {
        let one = GradedSeries::one(self.cap);
        self.push_units((one.clone(), one), self.cap.max_total())
    }

    /// Composes this word on top of an element given by unit parts, i.e.
    /// returns the unit parts of self ∘ (element), to total degree n_max.
    pub fn push_units(
        &self,
        (mut u, mut v): (GradedSeries<C>, GradedSeries<C>),
        n_max: u32,
    ) -> Result<(GradedSeries<C>, GradedSeries<C>)> {
        for g in self.gens.iter().rev() {
            if g.f.is_one() {
                continue;
            }
            let mut powers = PowerCache::new(&g.f, n_max);
            let gu = g.apply_upto(&u, n_max)?;
            let gv = g.apply_upto(&v, n_max)?;
            u = powers.get(-(g.ray.r as i64))?.mul_upto(&gu, n_max)?;
            v = powers.get(g.ray.a as i64)?.mul_upto(&gv, n_max)?;
        }
        Ok((u, v))
    }

    /// Images of x and y.
    pub fn images(&self) -> Result<(GradedSeries<C>, GradedSeries<C>)> {
        let (u, v) = self.unit_images()?;
        Ok((u.shift(1, 0), v.shift(0, 1)))
    }

    /// True if both words act identically on x and y within the cap.
    pub fn acts_like(&self, other: &Self) -> Result<bool> {
        Ok(self.unit_images()? == other.unit_images()?)
    }
}

/// θ_{ray, (1 - (-1)^{ar} x^a y^r)^exponent}. Non-primitive rays are
/// folded onto their primitive direction.
pub fn make_t<C: CoeffRing>(ray: Ray, exponent: &C, cap: Cap) -> Result<VertexGenerator<C>> {
    if !cap.contains(ray.a, ray.r) {
        return Err(Error::OutOfCap(ray.a, ray.r));
    }
    let base = GradedSeries::from_terms(
        cap,
        [((0, 0), C::one()), ((ray.a, ray.r), C::from_int(-ray.sign()))],
    );
    VertexGenerator::along(ray, base.pow(exponent)?)
}

/// v^{-1} u v u^{-1} as a word.
pub fn commutator<C: CoeffRing>(u: &VertexWord<C>, v: &VertexWord<C>) -> Result<VertexWord<C>> {
    v.inverse().then(u)?.then(v)?.then(&u.inverse())
}

/// Slope-ordered ray functions whose product equals a given element.
#[derive(Clone, Debug, PartialEq)]
pub struct Factorization<C> {
    pub order: SlopeOrder,
    pub cap: Cap,
    rays: Vec<(Ray, GradedSeries<C>)>,
}

impl<C: CoeffRing> Factorization<C> {
    pub fn empty(cap: Cap, order: SlopeOrder) -> Self {
        Factorization { order, cap, rays: Vec::new() }
    }

    /// Rays with nontrivial functions, in composition order.
    pub fn rays(&self) -> &[(Ray, GradedSeries<C>)] {
        &self.rays
    }

    pub fn get(&self, ray: Ray) -> Option<&GradedSeries<C>> {
        self.rays.iter().find(|(r, _)| *r == ray).map(|(_, f)| f)
    }

    /// The ray function, or 1 when the ray carries nothing.
    pub fn function(&self, ray: Ray) -> GradedSeries<C> {
        self.get(ray).cloned().unwrap_or_else(|| GradedSeries::one(self.cap))
    }

    fn slot(&mut self, ray: Ray) -> &mut GradedSeries<C> {
        let pos = self
            .rays
            .iter()
            .position(|(r, _)| self.order.compare(&ray, r) != Ordering::Greater);
        match pos {
            Some(i) if self.rays[i].0 == ray => &mut self.rays[i].1,
            Some(i) => {
                self.rays.insert(i, (ray, GradedSeries::one(self.cap)));
                &mut self.rays[i].1
            }
            None => {
                self.rays.push((ray, GradedSeries::one(self.cap)));
                &mut self.rays.last_mut().unwrap().1
            }
        }
    }

    /// The ordered product as a word.
    pub fn recompose(&self) -> VertexWord<C> {
        VertexWord {
            cap: self.cap,
            gens: self
                .rays
                .iter()
                .map(|(ray, f)| VertexGenerator { ray: *ray, f: f.clone() })
                .collect(),
        }
    }
}

/// Unique slope-ordered product expansion of w, degree by degree.
pub fn factorize<C: CoeffRing>(
    w: &VertexWord<C>,
    cap: Cap,
    order: SlopeOrder,
) -> Result<Factorization<C>> {
    let w = if w.cap() == cap { w.clone() } else { w.with_cap(cap) };
    let target = w.unit_images()?;
    let mut fact = Factorization::empty(cap, order);
    for k in 1..=cap.max_total() {
        let (u, v) = fact.recompose().inverse().push_units(target.clone(), k)?;
        for (&(al, be), c) in u.terms().chain(v.terms()) {
            let d = al + be;
            if d > 0 && d < k {
                return Err(Error::NotInGroup(format!(
                    "discrepancy {c} at x^{al} y^{be} below degree {k}"
                )));
            }
        }
        let mut updates = Vec::new();
        for al in 0..=k {
            let be = k - al;
            if !cap.contains(al, be) {
                continue;
            }
            let cu = u.get(al, be);
            let cv = v.get(al, be);
            if cu.is_zero() && cv.is_zero() {
                continue;
            }
            let (ray, _) = Ray { a: al, r: be }.primitive();
            let c = if ray.a > 0 {
                let c = cv.scale(&Rational::new(1, ray.a as i64));
                let want = c.scale(&Rational::from_int(-(ray.r as i64)));
                if cu != want {
                    return Err(Error::NotInGroup(format!(
                        "x-image {cu} and y-image {cv} disagree at x^{al} y^{be}"
                    )));
                }
                c
            } else {
                if !cv.is_zero() {
                    return Err(Error::NotInGroup(format!(
                        "y-image {cv} at x^0 y^{be} has no ray"
                    )));
                }
                cu.neg()
            };
            updates.push((ray, al, be, c));
        }
        for (ray, al, be, c) in updates {
            fact.slot(ray).add_term(al, be, c);
        }
    }
    fact.rays.retain(|(_, f)| !f.is_one());
    Ok(fact)
}

/// Solves f = ∏_m (1 - (-1)^{m a r} z^m)^{m·Ω_m}, z = x^a y^r, for the Ω_m.
pub fn ray_function_to_bps<C: CoeffRing>(ray: Ray, f: &GradedSeries<C>) -> Result<Vec<(u32, C)>> {
    if !ray.is_primitive() {
        return Err(Error::InvalidArgument(format!("ray {ray} is not primitive")));
    }
    let cap = f.cap();
    let mut residual = f.clone();
    let mut out = Vec::new();
    let mut m = 1;
    while cap.contains(m * ray.a, m * ray.r) {
        let (al, be) = (m * ray.a, m * ray.r);
        let sigma = if (m as u64 * ray.a as u64 * ray.r as u64).is_multiple_of(2) { 1 } else { -1 };
        let c = residual.get(al, be);
        // leading coefficient of (1 - σ z^m)^{mΩ} is -σ m Ω
        let omega = c.scale(&Rational::new(-sigma, m as i64));
        if !omega.is_zero() {
            let factor = GradedSeries::from_terms(cap, [((0, 0), C::one()), ((al, be), C::from_int(-sigma))]);
            let correction = factor.pow(&omega.scale(&Rational::from_int(-(m as i64))))?;
            residual = residual.mul(&correction)?;
        }
        out.push((m, omega));
        m += 1;
    }
    Ok(out)
}


/// Formal symplectic check: (∂x X ∂y Y − ∂y X ∂x Y)·xy = X·Y for the
/// images X, Y of x, y.
///
/// With X = xU and Y = yV this reads
/// (U + x∂xU)(V + y∂yV) − (y∂yU)(x∂xV) = UV, which stays inside the cap.
pub fn preserves_log_form<C: CoeffRing>(w: &VertexWord<C>) -> Result<bool> {
    let (u, v) = w.unit_images()?;
    let dx = |s: &GradedSeries<C>| s.partial(Var::X).shift(1, 0);
    let dy = |s: &GradedSeries<C>| s.partial(Var::Y).shift(0, 1);
    let lhs = u
        .add(&dx(&u))?
        .mul(&v.add(&dy(&v))?)?
        .sub(&dy(&u).mul(&dx(&v))?)?;
    Ok(lhs == u.mul(&v)?)
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "C: CoeffRing")]
struct RayRepr<C> {
    a: u32,
    r: u32,
    f_terms: GradedSeries<C>,
}

#[derive(Serialize, Deserialize)]
#[serde(bound = "C: CoeffRing")]
struct FactorizationRepr<C> {
    order: SlopeOrder,
    rays: Vec<RayRepr<C>>,
}

impl<C: CoeffRing> Serialize for Factorization<C> {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        FactorizationRepr {
            order: self.order,
            rays: self
                .rays
                .iter()
                .map(|(ray, f)| RayRepr { a: ray.a, r: ray.r, f_terms: f.clone() })
                .collect(),
        }
        .serialize(ser)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::MultiPoly;

    type S = GradedSeries<Rational>;

    fn q(n: i64) -> Rational {
        Rational::from_int(n)
    }

    fn ray(a: u32, r: u32) -> Ray {
        Ray::new(a, r).unwrap()
    }

    fn one_plus(cap: Cap, a: u32, r: u32, c: i64) -> S {
        S::from_terms(cap, [((0, 0), q(1)), ((a, r), q(c))])
    }

    fn gen(cap: Cap, a: u32, r: u32, c: i64) -> VertexGenerator<Rational> {
        VertexGenerator::new(ray(a, r), one_plus(cap, a, r, c)).unwrap()
    }

    #[test]
    fn generator_action_examples() {
        let cap = Cap::total(6);
        let f = one_plus(cap, 1, 0, 3);
        let g = VertexGenerator::new(ray(1, 0), f.clone()).unwrap();
        assert_eq!(g.apply(&S::y(cap)).unwrap(), f.shift(0, 1));
        assert_eq!(g.apply(&S::x(cap)).unwrap(), S::x(cap));

        let f = one_plus(cap, 0, 1, 1);
        let g = VertexGenerator::new(ray(0, 1), f.clone()).unwrap();
        assert_eq!(g.apply(&S::x(cap)).unwrap(), f.invert().unwrap().shift(1, 0));

        let g = gen(cap, 1, 1, 1);
        let s = S::monomial(cap, 2, 1, q(1));
        let want = S::from_terms(cap, [((2, 1), q(1)), ((3, 2), q(-1)), ((4, 3), q(1))]);
        assert_eq!(g.apply(&s).unwrap(), want);
    }

    #[test]
    fn rejects_off_ray_terms() {
        let cap = Cap::total(4);
        assert!(VertexGenerator::new(ray(1, 1), one_plus(cap, 2, 1, 1)).is_err());
        assert!(VertexGenerator::new(Ray { a: 2, r: 2 }, one_plus(cap, 2, 2, 1)).is_err());
        let g = VertexGenerator::along(Ray { a: 2, r: 2 }, one_plus(cap, 2, 2, 1)).unwrap();
        assert_eq!(g.ray(), ray(1, 1));
        assert_eq!(g.f().get(2, 2), q(2));
    }

    #[test]
    fn make_t_examples() {
        let cap = Cap::total(4);
        let t = make_t(ray(0, 1), &q(1), cap).unwrap();
        assert_eq!(t.f(), &one_plus(cap, 0, 1, -1));
        let t = make_t(ray(1, 1), &q(1), cap).unwrap();
        assert_eq!(t.f(), &one_plus(cap, 1, 1, 1));

        let cap = Cap::boxed(3, 0);
        let chi = MultiPoly::chi();
        let t = make_t(ray(1, 0), &chi.neg(), cap).unwrap();
        assert_eq!(t.f().get(1, 0), chi);
        assert!(make_t(ray(4, 0), &q(1), cap).is_err());
    }

    #[test]
    fn commutator_examples() {
        let cap = Cap::total(6);
        let u = VertexWord::single(gen(cap, 1, 0, 1));
        let v = VertexWord::single(gen(cap, 0, 1, 1));
        let id = VertexWord::identity(cap);
        assert!(commutator(&u, &id).unwrap().acts_like(&id).unwrap());
        assert!(commutator(&u, &u).unwrap().acts_like(&id).unwrap());
        let c = commutator(&u, &v).unwrap();
        let (uu, vv) = c.unit_images().unwrap();
        assert!(!uu.is_one());
        let lowest = uu.sub(&S::one(cap)).unwrap().sorted_terms()[0].0;
        assert_eq!(lowest, (1, 1));
        assert!(vv.get(1, 0).is_zero() && vv.get(0, 1).is_zero());
    }

    #[test]
    fn factorize_examples() {
        let cap = Cap::total(8);
        let id = VertexWord::<Rational>::identity(cap);
        assert!(factorize(&id, cap, SlopeOrder::Desc).unwrap().rays().is_empty());

        let t = VertexWord::single(make_t(ray(1, 1), &q(1), cap).unwrap());
        let fact = factorize(&t, cap, SlopeOrder::Desc).unwrap();
        assert_eq!(fact.rays().len(), 1);
        assert_eq!(fact.get(ray(1, 1)).unwrap(), &one_plus(cap, 1, 1, 1));

        let u = VertexWord::single(gen(cap, 1, 0, 1));
        let v = VertexWord::single(gen(cap, 0, 1, 1));
        let c = commutator(&u, &v).unwrap();
        let fact = factorize(&c, cap, SlopeOrder::Desc).unwrap();
        assert_eq!(fact.rays().len(), 1);
        let (r0, f0) = &fact.rays()[0];
        assert_eq!(*r0, ray(1, 1));
        assert_eq!(f0, &one_plus(cap, 1, 1, 1));
        assert!(fact.recompose().acts_like(&c).unwrap());
    }

    #[test]
    fn classic_pentagon() {
        // θ_{(1,0),1+x} θ_{(0,1),1+y} = θ_{(0,1),1+y} θ_{(1,1),1+xy} θ_{(1,0),1+x}
        let cap = Cap::total(10);
        let w = VertexWord::new(cap, vec![gen(cap, 1, 0, 1), gen(cap, 0, 1, 1)]).unwrap();
        let fact = factorize(&w, cap, SlopeOrder::Desc).unwrap();
        let rays: Vec<Ray> = fact.rays().iter().map(|(r, _)| *r).collect();
        assert_eq!(rays, vec![ray(0, 1), ray(1, 1), ray(1, 0)]);
        assert_eq!(fact.get(ray(1, 1)).unwrap(), &one_plus(cap, 1, 1, 1));
        assert!(fact.recompose().acts_like(&w).unwrap());
    }

    #[test]
    fn slope_orders() {
        let d = SlopeOrder::Desc;
        assert_eq!(d.compare(&ray(0, 1), &ray(1, 0)), Ordering::Less);
        assert_eq!(d.compare(&ray(1, 2), &ray(1, 1)), Ordering::Less);
        assert_eq!(d.compare(&ray(2, 1), &ray(1, 1)), Ordering::Greater);
        assert_eq!(SlopeOrder::Asc.compare(&ray(0, 1), &ray(1, 0)), Ordering::Greater);
    }

    #[test]
    fn bps_from_ray_functions() {
        let cap = Cap::total(8);
        let f = one_plus(cap, 1, 1, 1);
        let om = ray_function_to_bps(ray(1, 1), &f).unwrap();
        assert_eq!(om[0], (1, q(1)));
        // recompose ∏ (1 - σ_m z^m)^{m Ω_m}
        let mut prod = S::one(cap);
        for (m, o) in &om {
            let sigma = if m % 2 == 1 { -1 } else { 1 };
            let fac = one_plus(cap, *m, *m, -sigma);
            prod = prod.mul(&fac.pow(&(o * &q(*m as i64))).unwrap()).unwrap();
        }
        assert_eq!(prod, f);

        let om = ray_function_to_bps(ray(1, 1), &S::one(cap)).unwrap();
        assert!(om.iter().all(|(_, o)| o.is_zero()));

        let sq = one_plus(cap, 0, 1, -1).pow_int(2).unwrap();
        let om = ray_function_to_bps(ray(0, 1), &sq).unwrap();
        assert_eq!(om[0], (1, q(2)));
        assert!(om[1..].iter().all(|(_, o)| o.is_zero()));
    }

    #[test]
    fn symplectic_generators() {
        let cap = Cap::boxed(5, 4);
        for (a, r) in [(1, 0), (0, 1), (1, 1), (2, 1), (1, 3)] {
            let g = make_t(ray(a, r), &q(3), cap).unwrap();
            assert!(preserves_log_form(&VertexWord::single(g)).unwrap(), "ray ({a},{r})");
        }
    }
}
