//! Möbius function, Euler-product coefficients and the congruences behind
//! BPS integrality at ranks 2 and 3.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::combinat::partitions_unordered;
use crate::error::{Error, Result};
use crate::ring::Rational;

pub fn mobius(m: u64) -> i64 {
    assert!(m >= 1, "mobius is defined for m ≥ 1");
    let mut n = m;
    let mut sign = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            sign = -sign;
        }
        p += 1;
    }
    if n > 1 {
        sign = -sign;
    }
    sign
}

/// Generalized binomial C(top, k) for any integer top and k ≥ 0.
pub fn binom(top: &BigInt, k: u64) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for j in 0..k {
        num *= top - BigInt::from(j);
        den *= BigInt::from(j + 1);
    }
    num / den
}

/// Exponents c_1..c_N of ∏_n (1 − t^n)^{−c_n}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EulerExponents(pub Vec<i64>);

impl EulerExponents {
    /// c_n = n·s, the MacMahon function M(t)^s.
    pub fn macmahon(s: i64, n_max: usize) -> Self {
        EulerExponents((1..=n_max as i64).map(|n| n * s).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    fn get(&self, n: u32) -> i64 {
        self.0[n as usize - 1]
    }

    fn check(&self, a: u32) -> Result<()> {
        if a as usize > self.0.len() {
            return Err(Error::IndexOutOfRange { index: a as usize, len: self.0.len() });
        }
        Ok(())
    }
}

/// [t^a] ∏(1 − t^n)^{−c_n} as Σ_{λ ⊢ a} ∏_i C(c_i − 1 + m_i, m_i), with m_i
/// the multiplicity of the part i in λ.
pub fn euler_coeff(c: &EulerExponents, a: u32) -> Result<Rational> {
    c.check(a)?;
    let mut acc = BigInt::zero();
    for lambda in partitions_unordered(a) {
        let mut term = BigInt::one();
        let mut idx = 0;
        while idx < lambda.len() {
            let part = lambda[idx];
            let mult = lambda[idx..].iter().take_while(|&&p| p == part).count();
            term *= binom(&BigInt::from(c.get(part) - 1 + mult as i64), mult as u64);
            idx += mult;
        }
        acc += term;
    }
    Ok(Rational::from_bigint(acc))
}

/// Same coefficient in conjugate coordinates: Σ_{p ⊢ a} ∏_i C(c_i − 1 + p_i − p_{i+1}, p_i − p_{i+1}).
pub fn euler_coeff_conjugate(c: &EulerExponents, a: u32) -> Result<Rational> {
    c.check(a)?;
    let mut acc = BigInt::zero();
    for p in partitions_unordered(a) {
        let mut term = BigInt::one();
        for (idx, &pi) in p.iter().enumerate() {
            let next = p.get(idx + 1).copied().unwrap_or(0);
            let xi = (pi - next) as u64;
            term *= binom(&BigInt::from(c.get(idx as u32 + 1) - 1 + xi as i64), xi);
        }
        acc += term;
    }
    Ok(Rational::from_bigint(acc))
}

fn macmahon_coeff(s: i64, a: u32) -> BigInt {
    if a == 0 {
        return BigInt::one();
    }
    let c = EulerExponents::macmahon(s, a as usize);
    euler_coeff(&c, a).expect("exponents cover a").numer().clone()
}

/// [t^a] M(−t)^s.
pub fn macmahon_minus_coeff(s: i64, a: u32) -> BigInt {
    let v = macmahon_coeff(s, a);
    if a % 2 == 1 {
        -v
    } else {
        v
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub a: u32,
    pub chi: i64,
    pub modulus: u32,
    pub lhs: String,
    pub rhs: String,
    pub lhs_residue: u32,
    pub rhs_residue: u32,
    pub pass: bool,
}

fn residue(v: &BigInt, m: u32) -> u32 {
    let r = v.mod_floor(&BigInt::from(m));
    u32::try_from(r).expect("residue fits")
}

fn verdict(a: u32, chi: i64, modulus: u32, lhs: BigInt, rhs: BigInt) -> Verdict {
    let (lr, rr) = (residue(&lhs, modulus), residue(&rhs, modulus));
    Verdict { a, chi, modulus, lhs: lhs.to_string(), rhs: rhs.to_string(), lhs_residue: lr, rhs_residue: rr, pass: lr == rr }
}

/// [t^a] M(t)^{2χ} ≡ (−1)^{a/2} [t^{a/2}] M(t)^χ (mod 4), a even.
pub fn check_mod4(a: u32, chi: i64) -> Result<Verdict> {
    if !a.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("mod-4 check needs even a, got {a}")));
    }
    let lhs = macmahon_coeff(2 * chi, a);
    let mut rhs = macmahon_coeff(chi, a / 2);
    if (a / 2) % 2 == 1 {
        rhs = -rhs;
    }
    Ok(verdict(a, chi, 4, lhs, rhs))
}

/// [t^a] M(−t)^{3χ} ≡ [t^{a/3}] M(−t)^χ (mod 9), 3 | a.
pub fn check_mod9(a: u32, chi: i64) -> Result<Verdict> {
    if !a.is_multiple_of(3) {
        return Err(Error::InvalidArgument(format!("mod-9 check needs 3 | a, got {a}")));
    }
    let lhs = macmahon_minus_coeff(3 * chi, a);
    let rhs = macmahon_minus_coeff(chi, a / 3);
    Ok(verdict(a, chi, 9, lhs, rhs))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Congruence {
    /// C(2iχ − 1 + ξ, ξ) ≡ 0 mod 2 for odd ξ.
    EvenScaleOddXi,
    /// C(2iχ − 1 + ξ, ξ) ≡ 0 mod 4 for even i, odd ξ.
    EvenScaleEvenPartOddXi,
    /// C(2iχ − 1 + ξ, ξ) ≡ (−1)^{ξ/2} C(iχ − 1 + ξ/2, ξ/2) mod 4 for even ξ.
    HalvingMod4,
    /// C(3iχ − 1 + ξ, ξ) ≡ 0 mod 3 for ξ ≢ 0 mod 3.
    TripleScaleMod3,
    /// C(3iχ − 1 + ξ, ξ) ≡ 0 mod 9 for 3 | i, ξ ≢ 0 mod 3.
    TripleScaleMod9,
    /// (−1)^ξ C(3iχ − 1 + ξ, ξ) ≡ (−1)^{ξ/3} C(iχ − 1 + ξ/3, ξ/3) mod 9 for 3 | ξ.
    ThirdingMod9,
}

impl Congruence {
    pub const ALL: [Congruence; 6] = [
        Congruence::EvenScaleOddXi,
        Congruence::EvenScaleEvenPartOddXi,
        Congruence::HalvingMod4,
        Congruence::TripleScaleMod3,
        Congruence::TripleScaleMod9,
        Congruence::ThirdingMod9,
    ];

    /// `None` when the branch conditions do not apply at (i, χ, ξ).
    pub fn holds_at(self, i: i64, chi: i64, xi: u64) -> Option<bool> {
        let b = |scale: i64, x: u64| binom(&BigInt::from(scale * i * chi - 1 + x as i64), x);
        let sgn = |v: BigInt, e: u64| if e % 2 == 1 { -v } else { v };
        let zero_mod = |v: BigInt, m: i64| (v % BigInt::from(m)).is_zero();
        let eq_mod = |l: BigInt, r: BigInt, m: i64| ((l - r) % BigInt::from(m)).is_zero();
        if xi == 0 {
            return None;
        }
        match self {
            Congruence::EvenScaleOddXi => (xi % 2 == 1).then(|| zero_mod(b(2, xi), 2)),
            Congruence::EvenScaleEvenPartOddXi => (xi % 2 == 1 && i % 2 == 0).then(|| zero_mod(b(2, xi), 4)),
            Congruence::HalvingMod4 => xi.is_multiple_of(2).then(|| eq_mod(b(2, xi), sgn(b(1, xi / 2), xi / 2), 4)),
            Congruence::TripleScaleMod3 => (!xi.is_multiple_of(3)).then(|| zero_mod(b(3, xi), 3)),
            Congruence::TripleScaleMod9 => (!xi.is_multiple_of(3) && i % 3 == 0).then(|| zero_mod(b(3, xi), 9)),
            Congruence::ThirdingMod9 => xi.is_multiple_of(3).then(|| eq_mod(sgn(b(3, xi), xi), sgn(b(1, xi / 3), xi / 3), 9)),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CongruenceReport {
    pub congruence: Congruence,
    pub checked: usize,
    pub skipped: usize,
    /// First (i, χ, ξ) where the congruence fails.
    pub counterexample: Option<(i64, i64, u64)>,
}

impl CongruenceReport {
    pub fn pass(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Sweeps every congruence over i ∈ 1..=i_max, χ ∈ chis, ξ ∈ 0..=xi_max.
pub fn binom_congruences(i_max: i64, chis: &[i64], xi_max: u64) -> Vec<CongruenceReport> {
    Congruence::ALL
        .iter()
        .map(|&cg| {
            let mut rep = CongruenceReport { congruence: cg, checked: 0, skipped: 0, counterexample: None };
            for i in 1..=i_max {
                for &chi in chis {
                    for xi in 0..=xi_max {
                        match cg.holds_at(i, chi, xi) {
                            None => rep.skipped += 1,
                            Some(ok) => {
                                rep.checked += 1;
                                if !ok && rep.counterexample.is_none() {
                                    rep.counterexample = Some((i, chi, xi));
                                }
                            }
                        }
                    }
                }
            }
            rep
        })
        .collect()
}

/// Σ_k (2χ)^k/k! K_k(a) mod 4 against Ω(a/2, 1), the reduction of rank-2
/// integrality to the mod-4 lemma. Returns (lhs, rhs).
pub fn rank_two_reduction(a: u32, chi: i64) -> (BigInt, BigInt) {
    // the k-sum at 2χ is [t^a] M(t)^{2χ}
    let lhs = macmahon_coeff(2 * chi, a);
    let rhs = macmahon_minus_coeff(chi, a / 2);
    (lhs, rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mobius_values() {
        assert_eq!([1, 2, 3, 4, 30].map(mobius), [1, -1, -1, 0, -1]);
        for n in 1..=100u64 {
            let s: i64 = (1..=n).filter(|d| n % d == 0).map(mobius).sum();
            assert_eq!(s, i64::from(n == 1));
        }
    }

    #[test]
    fn euler_examples() {
        let ones = EulerExponents(vec![1; 5]);
        assert_eq!(euler_coeff(&ones, 2).unwrap(), Rational::from_int(2));
        assert_eq!(euler_coeff(&EulerExponents::macmahon(1, 4), 4).unwrap(), Rational::from_int(13));
        assert_eq!(euler_coeff(&ones, 0).unwrap(), Rational::one());
        assert!(matches!(euler_coeff(&ones, 6), Err(Error::IndexOutOfRange { index: 6, len: 5 })));
    }

    #[test]
    fn congruence_examples() {
        let v = check_mod4(2, 1).unwrap();
        assert_eq!((v.lhs.as_str(), v.rhs.as_str(), v.pass), ("7", "-1", true));
        assert!(check_mod4(4, 1).unwrap().pass);
        assert!(check_mod4(2, 0).unwrap().pass);
        let v = check_mod9(3, 1).unwrap();
        assert_eq!((v.lhs.as_str(), v.rhs.as_str(), v.pass), ("-37", "-1", true));
        assert!(check_mod9(6, 1).unwrap().pass);
        assert!(check_mod9(6, 0).unwrap().pass);
        assert!(check_mod4(3, 1).is_err());
    }

    #[test]
    fn binomial_branches() {
        assert_eq!(Congruence::EvenScaleOddXi.holds_at(1, 1, 1), Some(true));
        assert_eq!(Congruence::EvenScaleOddXi.holds_at(1, 1, 0), None);
        assert_eq!(Congruence::ThirdingMod9.holds_at(1, 1, 3), Some(true));
        assert_eq!(binom(&BigInt::from(-1), 3), BigInt::from(-1));
    }
}
