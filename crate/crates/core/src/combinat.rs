//! Compositions, partitions and related enumerations.

use serde::{Deserialize, Serialize};

/// Ordered partitions of `a` into exactly `k` positive parts, in
/// lexicographic order.
#[derive(Clone, Debug)]
pub struct Compositions {
    a: u32,
    k: usize,
    cur: Option<Vec<u32>>,
}

impl Compositions {
    pub fn new(a: u32, k: usize) -> Self {
        let cur = if k == 0 {
            (a == 0).then(Vec::new)
        } else if (a as usize) < k {
            None
        } else {
            let mut v = vec![1; k];
            v[k - 1] = a - (k as u32 - 1);
            Some(v)
        };
        Compositions { a, k, cur }
    }
}

impl Iterator for Compositions {
    type Item = Vec<u32>;

    fn next(&mut self) -> Option<Vec<u32>> {
        let out = self.cur.take()?;
        let k = self.k;
        if k >= 2 {
            // rightmost position (before the last) that can be bumped
            let mut next = out.clone();
            let mut i = k - 1;
            while i > 0 {
                i -= 1;
                let prefix: u32 = next[..=i].iter().sum();
                let room = self.a - prefix - (k - 1 - i) as u32;
                if room >= 1 {
                    next[i] += 1;
                    for v in next.iter_mut().take(k - 1).skip(i + 1) {
                        *v = 1;
                    }
                    let used: u32 = next[..k - 1].iter().sum();
                    next[k - 1] = self.a - used;
                    self.cur = Some(next);
                    break;
                }
            }
        }
        Some(out)
    }
}

pub fn compositions(a: u32, k: usize) -> Compositions {
    Compositions::new(a, k)
}

/// All ordered partitions of `a`, by increasing length.
pub fn all_compositions(a: u32) -> impl Iterator<Item = Vec<u32>> {
    (1..=a as usize).flat_map(move |k| compositions(a, k))
}

/// Unordered partitions of `a`, parts in nonincreasing order.
pub fn partitions_unordered(a: u32) -> Vec<Vec<u32>> {
    fn rec(rest: u32, max: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if rest == 0 {
            out.push(cur.clone());
            return;
        }
        for p in (1..=rest.min(max)).rev() {
            cur.push(p);
            rec(rest - p, p, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(a, a, &mut Vec::new(), &mut out);
    out
}

pub fn divisors(n: u32) -> Vec<u32> {
    (1..=n).filter(|&d| n.is_multiple_of(d)).collect()
}

/// Multi-indices n, i of equal length with Σ n_l i_l fixed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompositionPair {
    pub n: Vec<u32>,
    pub i: Vec<u32>,
}

impl CompositionPair {
    pub fn len(&self) -> usize {
        self.n.len()
    }

    pub fn is_empty(&self) -> bool {
        self.n.is_empty()
    }

    pub fn dot(&self) -> u32 {
        self.n.iter().zip(&self.i).map(|(n, i)| n * i).sum()
    }
}

/// All pairs (n, i) of length k with n·i = a.
pub fn composition_pairs(a: u32, k: usize) -> Vec<CompositionPair> {
    fn rec(p: &[u32], n: &mut Vec<u32>, out: &mut Vec<CompositionPair>) {
        let l = n.len();
        if l == p.len() {
            let i = p.iter().zip(n.iter()).map(|(x, d)| x / d).collect();
            out.push(CompositionPair { n: n.clone(), i });
            return;
        }
        for d in divisors(p[l]) {
            n.push(d);
            rec(p, n, out);
            n.pop();
        }
    }
    let mut out = Vec::new();
    for p in compositions(a, k) {
        rec(&p, &mut Vec::with_capacity(k), &mut out);
    }
    out
}

pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

pub fn factorial(n: u32) -> num_bigint::BigInt {
    (1..=n as u64).map(num_bigint::BigInt::from).product()
}
