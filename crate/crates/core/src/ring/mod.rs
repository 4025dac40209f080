//! Exact coefficient rings.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::DeserializeOwned;
use serde::Serialize;

mod poly;
mod rational;

pub use poly::{Monomial, MultiPoly, VarName};
pub use rational::Rational;

/// Commutative coefficient ring with exact arithmetic.
///
/// Method names avoid the std operator traits so that both owned and
/// borrowed operands work without extra bounds.
pub trait CoeffRing:
    Clone + PartialEq + fmt::Debug + fmt::Display + Serialize + DeserializeOwned + Send + Sync + 'static
{
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn from_rational(q: Rational) -> Self;
    /// The value as a rational, if it involves no variables.
    fn as_constant(&self) -> Option<Rational>;
    fn substitute(&self, bindings: &BTreeMap<VarName, MultiPoly>) -> Self;
    fn specialize(&self, bindings: &BTreeMap<VarName, Rational>) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    fn add_assign(&mut self, rhs: &Self) {
        *self = self.add(rhs);
    }

    /// self += a * b
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self = self.add(&a.mul(b));
    }

    fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_int(n))
    }

    fn scale(&self, q: &Rational) -> Self {
        self.mul(&Self::from_rational(q.clone()))
    }

    fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    fn is_invertible(&self) -> bool {
        self.as_constant().is_some_and(|c| !c.is_zero())
    }

    /// Exact inverse of an invertible constant.
    fn inverse(&self) -> Option<Self> {
        self.as_constant()?.recip().map(Self::from_rational)
    }

    fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }
}

impl CoeffRing for Rational {
    fn zero() -> Self {
        Rational::zero()
    }
    fn one() -> Self {
        Rational::one()
    }
    fn is_zero(&self) -> bool {
        Rational::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn add_assign(&mut self, rhs: &Self) {
        *self += rhs;
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        *self += a * b;
    }
    fn from_rational(q: Rational) -> Self {
        q
    }
    fn scale(&self, q: &Rational) -> Self {
        self * q
    }
    fn as_constant(&self) -> Option<Rational> {
        Some(self.clone())
    }
    fn substitute(&self, _: &BTreeMap<VarName, MultiPoly>) -> Self {
        self.clone()
    }
    fn specialize(&self, _: &BTreeMap<VarName, Rational>) -> Self {
        self.clone()
    }
    fn pow(&self, e: u32) -> Self {
        Rational::pow(self, e as i32)
    }
}

impl CoeffRing for MultiPoly {
    fn zero() -> Self {
        MultiPoly::zero()
    }
    fn one() -> Self {
        MultiPoly::one()
    }
    fn is_zero(&self) -> bool {
        MultiPoly::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        MultiPoly::add(self, rhs)
    }
    fn neg(&self) -> Self {
        MultiPoly::neg(self)
    }
    fn mul(&self, rhs: &Self) -> Self {
        MultiPoly::mul(self, rhs)
    }
    fn sub(&self, rhs: &Self) -> Self {
        MultiPoly::sub(self, rhs)
    }
    fn add_assign(&mut self, rhs: &Self) {
        MultiPoly::add_assign(self, rhs);
    }
    fn add_mul_assign(&mut self, a: &Self, b: &Self) {
        MultiPoly::add_mul_assign(self, a, b);
    }
    fn from_rational(q: Rational) -> Self {
        MultiPoly::constant(q)
    }
    fn scale(&self, q: &Rational) -> Self {
        MultiPoly::scale(self, q)
    }
    fn as_constant(&self) -> Option<Rational> {
        MultiPoly::as_constant(self)
    }
    fn substitute(&self, bindings: &BTreeMap<VarName, MultiPoly>) -> Self {
        MultiPoly::substitute(self, bindings)
    }
    fn specialize(&self, bindings: &BTreeMap<VarName, Rational>) -> Self {
        MultiPoly::specialize(self, bindings)
    }
    fn pow(&self, e: u32) -> Self {
        MultiPoly::pow(self, e)
    }
}

/// Binding chi to a rational value.
pub fn chi_binding(chi: &Rational) -> BTreeMap<VarName, Rational> {
    BTreeMap::from([(VarName::Chi, chi.clone())])
}
