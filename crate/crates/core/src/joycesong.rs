//! Joyce-Song wall-crossing for D0-D6 classes of rank 1 and 2, assembled
//! from S and U symbols, tree sums and DT⁻ products.

use std::collections::BTreeMap;
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

pub use crate::combinat::{compositions, partitions_unordered};
use crate::combinat::{divisors, factorial};
use crate::liealg::pairing;
use crate::ring::{CoeffRing, Rational};

/// An ordered partition p ⊢ a.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrderedPartition(Vec<u32>);

impl OrderedPartition {
    pub fn new(parts: Vec<u32>) -> Option<Self> {
        (!parts.is_empty() && parts.iter().all(|&p| p >= 1)).then_some(OrderedPartition(parts))
    }

    pub fn parts(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn size(&self) -> u32 {
        self.0.iter().sum()
    }

    fn sum_range(&self, lo: usize, hi: usize) -> i64 {
        self.0[lo..hi].iter().map(|&x| x as i64).sum()
    }

    fn product(&self) -> i64 {
        self.0.iter().map(|&x| x as i64).product()
    }
}

/// A decomposition γ-multiple + a·μ: the D0 parts of `p` with copies of γ
/// inserted at the 1-based places `gamma_slots` of the full sequence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    pub p: OrderedPartition,
    pub gamma_slots: Vec<usize>,
}

impl Decomposition {
    pub fn new(p: OrderedPartition, gamma_slots: Vec<usize>) -> Option<Self> {
        let n = p.len() + gamma_slots.len();
        let ok = gamma_slots.windows(2).all(|w| w[0] < w[1]) && gamma_slots.iter().all(|&s| s >= 1 && s <= n);
        ok.then_some(Decomposition { p, gamma_slots })
    }

    pub fn len(&self) -> usize {
        self.p.len() + self.gamma_slots.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Classes (a, r) in order.
    pub fn classes(&self) -> Vec<(u32, u32)> {
        let mut parts = self.p.parts().iter();
        (1..=self.len())
            .map(|place| {
                if self.gamma_slots.contains(&place) {
                    (0, 1)
                } else {
                    (*parts.next().expect("slot count matches"), 0)
                }
            })
            .collect()
    }
}

fn fact(n: usize) -> Rational {
    Rational::from_bigint(factorial(n as u32))
}

fn sign(n: i64) -> i64 {
    if n.rem_euclid(2) == 0 {
        1
    } else {
        -1
    }
}

/// Σ_{m | p} 1/m².
pub fn divisor_weight(p: u32) -> Rational {
    static CACHE: Mutex<BTreeMap<u32, Rational>> = Mutex::new(BTreeMap::new());
    let mut cache = CACHE.lock().expect("cache lock");
    cache
        .entry(p)
        .or_insert_with(|| divisors(p).into_iter().map(|m| Rational::new(1, (m * m) as i64)).sum())
        .clone()
}

/// S(p, i) for the single-γ decomposition with n = len(p) + 1.
pub fn s_symbol_r1(p: &OrderedPartition, i: usize) -> i64 {
    let n = p.len() as i64 + 1;
    match i {
        1 => sign(n - 1),
        2 => sign(n - 2),
        _ => 0,
    }
}

/// U(p, i) as the weighted sum of S over contractions of head and tail.
pub fn u_symbol_r1_contractions(p: &OrderedPartition, i: usize) -> Rational {
    let n = p.len() + 1;
    let head = i - 1;
    let tail = n - i;
    let heads: Vec<Vec<u32>> = if head == 0 { vec![vec![]] } else { crate::combinat::all_compositions(head as u32).collect() };
    let tails: Vec<Vec<u32>> = if tail == 0 { vec![vec![]] } else { crate::combinat::all_compositions(tail as u32).collect() };
    let mut acc = Rational::zero();
    for qh in &heads {
        for qt in &tails {
            // S only sees the contracted length and the place of γ
            let contracted = OrderedPartition(vec![1; qh.len() + qt.len()]);
            let s = s_symbol_r1(&contracted, qh.len() + 1);
            if s == 0 {
                continue;
            }
            let w: Rational = qh.iter().chain(qt).map(|&q| fact(q as usize)).product();
            acc += Rational::from_int(s) / w;
        }
    }
    acc
}

/// U(p, i) = (−1)^{n−i}/((i−1)!(n−i)!).
pub fn u_symbol_r1(p: &OrderedPartition, i: usize) -> Rational {
    let n = p.len() + 1;
    Rational::from_int(sign((n - i) as i64)) / (fact(i - 1) * fact(n - i))
}

/// Σ_{q ⊢ s} (−1)^{len q}/∏ q_l! by enumeration, and the value (−1)^s/s!.
pub fn helper_identity(s: u32) -> (Rational, Rational) {
    let lhs = crate::combinat::all_compositions(s)
        .map(|q| {
            let w: Rational = q.iter().map(|&x| fact(x as usize)).product();
            Rational::from_int(sign(q.len() as i64)) / w
        })
        .sum();
    (lhs, Rational::from_int(sign(s as i64)) / fact(s as usize))
}

/// (−1)^{Σ_{k<l} ⟨α_k,α_l⟩}, the sign carried by every tree on the classes.
pub fn pair_sign(classes: &[(u32, u32)]) -> i64 {
    let mut e = 0i64;
    for k in 0..classes.len() {
        for l in k + 1..classes.len() {
            e += pairing(classes[k], classes[l]);
        }
    }
    sign(e)
}

/// Σ over ordered trees on the classes of ∏_{k→l} ⟨α_k,α_l⟩, edges oriented
/// from the lower to the higher place, times [`pair_sign`]. Enumerates every
/// labelled tree through its Prüfer code.
pub fn tree_sum(classes: &[(u32, u32)]) -> i64 {
    let n = classes.len();
    if n == 1 {
        return 1;
    }
    let mut total = 0i64;
    for_each_tree(n, |edges| {
        total += edges.iter().map(|&(k, l)| pairing(classes[k.min(l)], classes[k.max(l)])).product::<i64>();
    });
    pair_sign(classes) * total
}

/// Calls `f` with the edge list of every labelled tree on n ≥ 2 vertices.
fn for_each_tree(n: usize, mut f: impl FnMut(&[(usize, usize)])) {
    let mut code = vec![0usize; n.saturating_sub(2)];
    loop {
        f(&prufer_edges(&code, n));
        let mut pos = 0;
        loop {
            if pos == code.len() {
                return;
            }
            code[pos] += 1;
            if code[pos] < n {
                break;
            }
            code[pos] = 0;
            pos += 1;
        }
    }
}

fn prufer_edges(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; n];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    for &c in code {
        let leaf = (0..n).find(|&v| degree[v] == 1).expect("a leaf exists");
        edges.push((leaf, c));
        degree[leaf] = 0;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// The single-γ tree factor (−1)^a (−1)^{n+i} ∏ p_k.
pub fn tree_factor_r1(p: &OrderedPartition, i: usize) -> i64 {
    let n = p.len() as i64 + 1;
    sign(p.size() as i64) * sign(n + i as i64) * p.product()
}

/// DT⁻ of the D0 parts: ∏_k (−χ Σ_{m|p_k} 1/m²).
pub fn dt_minus<C: CoeffRing>(p: &OrderedPartition, chi: &C) -> C {
    let j: Rational = p.parts().iter().map(|&x| divisor_weight(x)).product();
    chi.neg().pow(p.len() as u32).scale(&j)
}

/// DT-bar(a, 1) from S, U, trees and DT⁻ over all (p, i).
pub fn dt_js_r1<C: CoeffRing>(a: u32, chi: &C) -> C {
    let mut acc = C::zero();
    for k in 1..=a as usize {
        let n = k + 1;
        let pref = Rational::new(sign(n as i64 - 1), 1 << (n - 1));
        for parts in compositions(a, k) {
            let p = OrderedPartition(parts);
            let dm = dt_minus(&p, chi);
            let mut w = Rational::zero();
            for i in 1..=n {
                w += u_symbol_r1(&p, i) * Rational::from_int(tree_factor_r1(&p, i));
            }
            acc.add_assign(&dm.scale(&(w * pref.clone())));
        }
    }
    acc
}

/// Σ_{p ⊢ a, len k} ∏ p_l J(p_l), with J the divisor weight.
pub fn rearranged_weight(a: u32, k: usize) -> Rational {
    compositions(a, k)
        .map(|p| p.iter().map(|&x| Rational::from_int(x as i64) * divisor_weight(x)).product::<Rational>())
        .sum()
}

fn r2_decomposition(p: &OrderedPartition, i: usize, j: usize) -> Decomposition {
    Decomposition::new(p.clone(), vec![i, j]).expect("valid places")
}

/// Tree sum for (p, i, j) by enumerating all trees.
pub fn tree_sum_r2_enumerated(p: &OrderedPartition, i: usize, j: usize) -> i64 {
    tree_sum(&r2_decomposition(p, i, j).classes())
}

/// Closed form of the (p, i, j) tree sum, n = len(p) + 2.
pub fn tree_sum_r2(p: &OrderedPartition, i: usize, j: usize) -> i64 {
    let n = p.len() + 2;
    let common = sign(n as i64) * sign(i as i64 + 1) * (1i64 << (n - 3)) * p.product();
    if j == i + 1 {
        common * (p.sum_range(0, i - 1) - p.sum_range(i - 1, p.len()))
    } else if j == i + 2 {
        common * p.parts()[i - 1] as i64
    } else {
        0
    }
}

/// U(p, i, j) for the two-γ decomposition, first-order plus second-order
/// term. For j = i + 2 only the n − i − 2 parts behind the second γ can be
/// contracted.
pub fn u_symbol_r2(p: &OrderedPartition, i: usize, j: usize) -> Rational {
    let n = p.len() + 2;
    let (head, tail) = (p.sum_range(0, i - 1), p.sum_range(i - 1, p.len()));
    let delta = |b: bool| Rational::from_int(b as i64);
    let half = Rational::new(1, 2);
    if j == i + 1 {
        let base = Rational::from_int(sign((n - i - 1) as i64)) / (fact(i - 1) * fact(n - i - 1));
        let first = base.clone() * half.clone() * (delta(head >= tail) - delta(head < tail));
        let second = -base * half * delta(head == tail);
        first + second
    } else if j == i + 2 {
        let pi = p.parts()[i - 1] as i64;
        let base = Rational::from_int(sign((n - i - 1) as i64)) / (fact(i - 1) * fact(n - i - 2));
        let first = base.clone() * delta(head < tail) * delta(head + pi >= tail - pi);
        let second = base * half * (delta(head == tail) - delta(head + pi == tail - pi));
        first + second
    } else {
        Rational::zero()
    }
}

/// U(p, i, j) from the sums over tail contractions q.
pub fn u_symbol_r2_contractions(p: &OrderedPartition, i: usize, j: usize) -> Rational {
    let n = p.len() + 2;
    let (head, tail) = (p.sum_range(0, i - 1), p.sum_range(i - 1, p.len()));
    let delta = |b: bool| Rational::from_int(b as i64);
    let half = Rational::new(1, 2);
    if j == i + 1 {
        let q = helper_sum(n - i - 1) / fact(i - 1);
        let first = q.clone() * (half.clone() - delta(head < tail));
        let second = -q * half * delta(head == tail);
        first + second
    } else if j == i + 2 {
        let pi = p.parts()[i - 1] as i64;
        let q = helper_sum(n - i - 2) / fact(i - 1);
        let first = -q.clone() * delta(head < tail) * delta(head + pi >= tail - pi);
        let second = q * half * (delta(head + pi == tail - pi) - delta(head == tail));
        first + second
    } else {
        Rational::zero()
    }
}

fn helper_sum(s: usize) -> Rational {
    if s == 0 {
        Rational::one()
    } else {
        helper_identity(s as u32).0
    }
}

/// DT-bar(a, 2): the rescaled rank-1 copy plus the two-γ decompositions.
pub fn dt_js_r2<C: CoeffRing>(a: u32, chi: &C) -> C {
    let mut acc = C::zero();
    // decompositions with a single 2γ
    for k in 1..=a as usize {
        let n = k + 1;
        let coeff = Rational::new(1 << (n - 1), 4) / fact(n - 1) * rearranged_weight(a, k);
        acc.add_assign(&chi.pow(k as u32).scale(&coeff));
    }
    // decompositions γ, γ at places i < j
    for k in 1..=a as usize {
        let n = k + 2;
        let pref = Rational::new(sign(n as i64 - 1), 1 << (n - 1));
        for parts in compositions(a, k) {
            let p = OrderedPartition(parts);
            let mut w = Rational::zero();
            for i in 1..n {
                for j in [i + 1, i + 2] {
                    if j > n {
                        continue;
                    }
                    let t = tree_sum_r2(&p, i, j);
                    if t != 0 {
                        w += u_symbol_r2(&p, i, j) * Rational::from_int(t);
                    }
                }
            }
            if !w.is_zero() {
                acc.add_assign(&dt_minus(&p, chi).scale(&(w * pref.clone())));
            }
        }
    }
    acc
}

/// Which side of the wall a phase comparison refers to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    /// D0 phase above the D6 phase, where DT⁻ is known.
    Minus,
    /// D0 phase below the D6 phase.
    Plus,
}

/// Central charge of aμ + rγ: (∓a, a + r), upper half plane for effective classes.
fn charge(side: Side, (a, r): (u32, u32)) -> (i64, i64) {
    let x = a as i64;
    match side {
        Side::Minus => (-x, x + r as i64),
        Side::Plus => (x, x + r as i64),
    }
}

/// Sign of phase(u) − phase(v).
fn phase_cmp(side: Side, u: (u32, u32), v: (u32, u32)) -> std::cmp::Ordering {
    let (zu, zv) = (charge(side, u), charge(side, v));
    (zv.0 * zu.1 - zv.1 * zu.0).cmp(&0)
}

fn add(u: (u32, u32), v: (u32, u32)) -> (u32, u32) {
    (u.0 + v.0, u.1 + v.1)
}

fn total(classes: &[(u32, u32)]) -> (u32, u32) {
    classes.iter().fold((0, 0), |acc, &c| add(acc, c))
}

/// Joyce's S symbol from the see-saw inequalities between the two sides.
pub fn s_symbol(classes: &[(u32, u32)]) -> i64 {
    use std::cmp::Ordering::*;
    let mut s = 1;
    for i in 0..classes.len().saturating_sub(1) {
        let before = phase_cmp(Side::Minus, classes[i], classes[i + 1]);
        let split = phase_cmp(Side::Plus, total(&classes[..=i]), total(&classes[i + 1..]));
        match (before, split) {
            (Less | Equal, Greater) => s = -s,
            (Greater, Less | Equal) => {}
            _ => return 0,
        }
    }
    s
}

/// Cut points of nondecreasing surjections {1..n} → {1..m}: every subset of
/// the n − 1 gaps.
fn groupings(n: usize) -> impl Iterator<Item = Vec<std::ops::Range<usize>>> {
    (0u32..1 << n.saturating_sub(1)).map(move |mask| {
        let mut out = Vec::new();
        let mut start = 0;
        for gap in 0..n.saturating_sub(1) {
            if mask & (1 << gap) != 0 {
                out.push(start..gap + 1);
                start = gap + 1;
            }
        }
        out.push(start..n);
        out
    })
}

/// Joyce's U symbol: weighted sum of products of S over two nested
/// contractions of the decomposition.
pub fn u_symbol(classes: &[(u32, u32)]) -> Rational {
    let whole = total(classes);
    let mut acc = Rational::zero();
    for blocks in groupings(classes.len()) {
        let betas: Vec<(u32, u32)> = blocks.iter().map(|b| total(&classes[b.clone()])).collect();
        let same_phase = blocks
            .iter()
            .zip(&betas)
            .all(|(b, &beta)| classes[b.clone()].iter().all(|&c| phase_cmp(Side::Minus, c, beta).is_eq()));
        if !same_phase {
            continue;
        }
        let weight: Rational = blocks.iter().map(|b| fact(b.len())).product::<Rational>().recip().expect("nonzero");
        for outer in groupings(betas.len()) {
            let ok = outer.iter().all(|o| phase_cmp(Side::Plus, total(&betas[o.clone()]), whole).is_eq());
            if !ok {
                continue;
            }
            let s: i64 = outer.iter().map(|o| s_symbol(&betas[o.clone()])).product();
            if s == 0 {
                continue;
            }
            let l = outer.len() as i64;
            acc += weight.clone() * Rational::new(sign(l - 1) * s, l);
        }
    }
    acc
}

/// [`tree_sum`] by the matrix-tree theorem.
pub fn tree_sum_det(classes: &[(u32, u32)]) -> Rational {
    let n = classes.len();
    if n == 1 {
        return Rational::one();
    }
    let w = |k: usize, l: usize| Rational::from_int(pairing(classes[k.min(l)], classes[k.max(l)]));
    let m = n - 1;
    let mut lap: Vec<Vec<Rational>> = (1..n)
        .map(|k| {
            (1..n)
                .map(|l| if k == l { (0..n).filter(|&x| x != k).map(|x| w(k, x)).sum() } else { -w(k, l) })
                .collect()
        })
        .collect();
    let mut det = Rational::from_int(pair_sign(classes));
    for col in 0..m {
        let Some(piv) = (col..m).find(|&r| !lap[r][col].is_zero()) else {
            return Rational::zero();
        };
        if piv != col {
            lap.swap(piv, col);
            det = -det;
        }
        let pv = lap[col][col].clone();
        det *= pv.clone();
        for r in col + 1..m {
            if lap[r][col].is_zero() {
                continue;
            }
            let f = lap[r][col].clone() / pv.clone();
            let pivot_row = lap[col].clone();
            for (cell, p) in lap[r].iter_mut().zip(pivot_row).skip(col) {
                *cell -= f.clone() * p;
            }
        }
    }
    det
}

/// DT⁻ of a single class: −χ Σ_{m|p} 1/m² for pμ, 1/q² for qγ, 0 if mixed.
fn dt_minus_class<C: CoeffRing>((a, r): (u32, u32), chi: &C) -> C {
    match (a, r) {
        (p, 0) => chi.neg().scale(&divisor_weight(p)),
        (0, q) => C::from_rational(Rational::new(1, (q * q) as i64)),
        _ => C::zero(),
    }
}

/// Ordered decompositions of (a, r) into pure D0 classes pμ and pure D6
/// classes qγ.
pub fn pure_decompositions(a: u32, r: u32) -> Vec<Vec<(u32, u32)>> {
    fn rec(a: u32, r: u32, cur: &mut Vec<(u32, u32)>, out: &mut Vec<Vec<(u32, u32)>>) {
        if a == 0 && r == 0 {
            out.push(cur.clone());
            return;
        }
        for p in 1..=a {
            cur.push((p, 0));
            rec(a - p, r, cur, out);
            cur.pop();
        }
        for q in 1..=r {
            cur.push((0, q));
            rec(a, r - q, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(a, r, &mut Vec::new(), &mut out);
    out
}

/// DT-bar(a, r) from the general Joyce-Song formula: every decomposition
/// into pure classes, Joyce's U symbol and the matrix-tree sum.
pub fn dt_js<C: CoeffRing>(a: u32, r: u32, chi: &C) -> C {
    dt_js_by_gamma_type(a, r, chi).into_values().fold(C::zero(), |acc, v| acc.add(&v))
}

/// The Joyce-Song sum split by the ordered sequence of D6 multiplicities
/// (e.g. [2, 1] for 2γ before γ).
pub fn dt_js_by_gamma_type<C: CoeffRing>(a: u32, r: u32, chi: &C) -> BTreeMap<Vec<u32>, C> {
    let mut out: BTreeMap<Vec<u32>, C> = BTreeMap::new();
    for dec in pure_decompositions(a, r) {
        let n = dec.len();
        let trees = tree_sum_det(&dec);
        if trees.is_zero() {
            continue;
        }
        let u = u_symbol(&dec);
        if u.is_zero() {
            continue;
        }
        let mut dm = C::one();
        for &c in &dec {
            dm = dm.mul(&dt_minus_class(c, chi));
        }
        let pref = Rational::new(sign(n as i64 - 1), 1 << (n - 1));
        let key: Vec<u32> = dec.iter().filter(|c| c.1 > 0).map(|c| c.1).collect();
        out.entry(key).or_insert_with(C::zero).add_assign(&dm.scale(&(pref * u * trees)));
    }
    out
}

/// Shape of a nonvanishing tree on a three-γ decomposition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CapShape {
    /// One D0 vertex joined to all three γ vertices.
    OneCap,
    /// Two D0 vertices, each joined to two γ vertices.
    TwoCaps,
}

/// A nonvanishing tree on a three-γ decomposition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CappedTree {
    pub shape: CapShape,
    /// D0 parts of the cap vertices, in place order.
    pub caps: Vec<u32>,
    /// Tree weight divided by the common factor ∏ p_k.
    pub weight: i64,
}

/// Every tree with nonzero weight on the classes of a decomposition.
pub fn capped_trees(d: &Decomposition) -> Vec<CappedTree> {
    let classes = d.classes();
    let n = classes.len();
    let common: i64 = classes.iter().filter(|c| c.1 == 0).map(|c| c.0 as i64).product();
    let sgn = pair_sign(&classes);
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    for_each_tree(n, |edges| {
        let w: i64 = edges.iter().map(|&(k, l)| pairing(classes[k.min(l)], classes[k.max(l)])).product();
        if w == 0 {
            return;
        }
        let caps: Vec<u32> = (0..n)
            .filter(|&v| classes[v].1 == 0 && edges.iter().filter(|&&(k, l)| k == v || l == v).count() >= 2)
            .map(|v| classes[v].0)
            .collect();
        let shape = if caps.len() == 1 { CapShape::OneCap } else { CapShape::TwoCaps };
        out.push(CappedTree { shape, caps, weight: sgn * w / common });
    });
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::MultiPoly;

    fn op(v: &[u32]) -> OrderedPartition {
        OrderedPartition::new(v.to_vec()).unwrap()
    }

    #[test]
    fn s_symbols() {
        assert_eq!(s_symbol_r1(&op(&[1]), 1), -1);
        assert_eq!(s_symbol_r1(&op(&[1, 1]), 3), 0);
        assert_eq!(s_symbol_r1(&op(&[1, 1, 1]), 2), 1);
    }

    #[test]
    fn u_symbols() {
        assert_eq!(u_symbol_r1_contractions(&op(&[1]), 1), Rational::from_int(-1));
        assert_eq!(u_symbol_r1_contractions(&op(&[1, 2]), 1), Rational::new(1, 2));
        for n in 2..=8usize {
            let p = OrderedPartition(vec![1; n - 1]);
            let mut alt = Rational::zero();
            for i in 1..=n {
                assert_eq!(u_symbol_r1_contractions(&p, i), u_symbol_r1(&p, i), "n={n} i={i}");
                alt += Rational::sign_pow(i as i64) * u_symbol_r1(&p, i);
            }
            assert_eq!(alt, Rational::sign_pow(n as i64) * Rational::from_int(1 << (n - 1)) / fact(n - 1));
        }
    }

    #[test]
    fn helper_values() {
        assert_eq!(helper_identity(1).0, Rational::from_int(-1));
        assert_eq!(helper_identity(2).0, Rational::new(1, 2));
        assert_eq!(helper_identity(5).0, Rational::new(-1, 120));
        for s in 1..=8 {
            let (l, r) = helper_identity(s);
            assert_eq!(l, r);
        }
    }

    #[test]
    fn rank_one_trees() {
        assert_eq!(tree_factor_r1(&op(&[1]), 1), 1);
        assert_eq!(tree_factor_r1(&op(&[2, 1]), 1), -2);
        for parts in [vec![1], vec![2, 1], vec![1, 3, 2], vec![2, 2, 1, 1]] {
            let p = OrderedPartition(parts);
            for i in 1..=p.len() + 1 {
                let d = Decomposition::new(p.clone(), vec![i]).unwrap();
                assert_eq!(tree_sum(&d.classes()), tree_factor_r1(&p, i));
            }
        }
    }

    #[test]
    fn divisor_weights() {
        assert_eq!(divisor_weight(4), Rational::new(21, 16));
        assert_eq!(divisor_weight(2) * divisor_weight(3), Rational::new(25, 18));
        assert_eq!(dt_minus(&op(&[2, 3]), &Rational::one()), Rational::new(25, 18));
    }

    #[test]
    fn rank_one_assembly() {
        let chi = MultiPoly::chi();
        assert_eq!(dt_js_r1(1, &chi), chi.neg());
        assert_eq!(dt_js_r1(2, &Rational::one()), Rational::from_int(3));
    }

    #[test]
    fn rank_two_tree_sums() {
        assert_eq!(tree_sum_r2(&op(&[1, 1]), 1, 4), 0);
        for k in 1..=4usize {
            for a in k as u32..=6 {
                for parts in compositions(a, k) {
                    let p = OrderedPartition(parts);
                    let n = k + 2;
                    for i in 1..n {
                        for j in i + 1..=n {
                            assert_eq!(tree_sum_r2_enumerated(&p, i, j), tree_sum_r2(&p, i, j), "{p:?} {i} {j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn general_engine_rank_one() {
        let chi = MultiPoly::chi();
        for a in 1..=4 {
            assert_eq!(dt_js(a, 1, &chi), dt_js_r1(a, &chi), "a={a}");
        }
    }

    #[test]
    fn general_engine_symbols() {
        for parts in [vec![1], vec![2, 1], vec![1, 3, 2], vec![2, 2, 1, 1]] {
            let p = OrderedPartition(parts);
            for i in 1..=p.len() + 1 {
                let d = Decomposition::new(p.clone(), vec![i]).unwrap();
                assert_eq!(u_symbol(&d.classes()), u_symbol_r1(&p, i), "{p:?} {i}");
                assert_eq!(s_symbol(&d.classes()), s_symbol_r1(&p, i), "{p:?} {i}");
                assert_eq!(tree_sum_det(&d.classes()), Rational::from_int(tree_sum(&d.classes())));
            }
        }
    }

    #[test]
    fn rank_two_u_symbols() {
        for k in 1..=4usize {
            for a in k as u32..=6 {
                for parts in compositions(a, k) {
                    let p = OrderedPartition(parts);
                    for i in 1..k + 2 {
                        for j in i + 1..=k + 2 {
                            let d = Decomposition::new(p.clone(), vec![i, j]).unwrap().classes();
                            let tree = tree_sum_r2(&p, i, j);
                            if tree == 0 {
                                continue;
                            }
                            let g = u_symbol(&d);
                            assert_eq!(u_symbol_r2(&p, i, j), g, "{p:?} {i} {j}");
                            assert_eq!(u_symbol_r2_contractions(&p, i, j), g, "{p:?} {i} {j}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rank_three_tree_shapes() {
        for a in 1..=4u32 {
            for k in 1..=a as usize {
                for parts in compositions(a, k) {
                    let p = OrderedPartition(parts);
                    let n = k + 3;
                    for i in 1..=n {
                        for j in i + 1..=n {
                            for l in j + 1..=n {
                                let d = Decomposition::new(p.clone(), vec![i, j, l]).unwrap();
                                let trees = capped_trees(&d);
                                let total: i64 = trees.iter().map(|t| t.weight).sum::<i64>() * p.product();
                                assert_eq!(Rational::from_int(total), tree_sum_det(&d.classes()));
                                for t in trees {
                                    let mag: i64 = match t.shape {
                                        CapShape::OneCap => (t.caps[0] as i64).pow(2),
                                        CapShape::TwoCaps => {
                                            assert_eq!(t.caps.len(), 2);
                                            t.caps[0] as i64 * t.caps[1] as i64
                                        }
                                    };
                                    assert_eq!(t.weight.abs(), mag, "{p:?} {i} {j} {l}");
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn rank_three_scaled_copy() {
        let chi = MultiPoly::chi();
        for a in 1..=4u32 {
            let split = dt_js_by_gamma_type(a, 3, &chi);
            let mut want = MultiPoly::zero();
            for k in 1..=a as usize {
                let q = crate::dtcore::pair_weight(a, k) * Rational::from_int(3).pow(k as i32 - 2) / fact(k);
                want = want.add(&chi.pow(k as u32).scale(&(q * Rational::sign_pow(a as i64))));
            }
            assert_eq!(split[&vec![3]], want, "a={a}");
        }
    }

    #[test]
    fn rank_two_dt() {
        let chi = MultiPoly::chi();
        assert_eq!(dt_js_r2(2, &chi), chi.scale(&Rational::new(-5, 4)));
        assert_eq!(dt_js_r2(3, &Rational::one()), Rational::from_int(-6));
    }
}
