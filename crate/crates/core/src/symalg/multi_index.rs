use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// A multi-index `α = (α₁, …, α_d) ∈ ℕ^d`.
///
/// Ordered graded-lexicographically: total degree first, then entries
/// with the larger leading entry first (so `(1,0)` precedes `(0,1)`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        Self(entries)
    }

    pub fn zeros(dim: usize) -> Self {
        Self(vec![0; dim])
    }

    pub fn unit(dim: usize, j: usize) -> Self {
        let mut v = vec![0; dim];
        v[j] = 1;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|&a| a as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&a| a == 0)
    }

    /// `α! = Π αⱼ!` as an arbitrary-precision integer.
    pub fn factorial(&self) -> BigInt {
        self.0.iter().map(|&a| factorial(a)).product()
    }

    /// Componentwise `self ≤ other`.
    pub fn le(&self, other: &Self) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn checked_sub(&self, other: &Self) -> Option<Self> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(Self)
    }

    pub fn add(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise minimum.
    pub fn min(&self, other: &Self) -> Self {
        Self(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    /// `Π C(αⱼ, κⱼ)`; zero unless `κ ≤ α`.
    pub fn binomial(&self, kappa: &Self) -> BigInt {
        self.0.iter().zip(&kappa.0).map(|(&a, &k)| binomial(a, k)).product()
    }

    /// Falling factorial `α!/(α−κ)!`; zero unless `κ ≤ α`.
    pub fn falling(&self, kappa: &Self) -> BigInt {
        self.0
            .iter()
            .zip(&kappa.0)
            .map(|(&a, &k)| {
                if k > a {
                    BigInt::from(0)
                } else {
                    ((a - k + 1)..=a).map(BigInt::from).product::<BigInt>()
                }
            })
            .product()
    }

    /// All `κ` with `0 ≤ κ ≤ self` componentwise.
    pub fn sub_indices(&self) -> Vec<MultiIndex> {
        let mut out = vec![Vec::with_capacity(self.dim())];
        for &a in &self.0 {
            let mut next = Vec::with_capacity(out.len() * (a as usize + 1));
            for prefix in &out {
                for k in 0..=a {
                    let mut p = prefix.clone();
                    p.push(k);
                    next.push(p);
                }
            }
            out = next;
        }
        out.into_iter().map(MultiIndex).collect()
    }

    /// All multi-indices of dimension `dim` with `|α| = degree`, in graded-lex order.
    pub fn of_degree(dim: usize, degree: usize) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; dim];
        fill(dim, degree, 0, &mut cur, &mut out);
        out
    }

    /// All multi-indices with `|α| ≤ max_degree`, ascending.
    pub fn up_to_degree(dim: usize, max_degree: usize) -> Vec<MultiIndex> {
        (0..=max_degree).flat_map(|n| Self::of_degree(dim, n)).collect()
    }
}

fn fill(dim: usize, remaining: usize, pos: usize, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
    if dim == 0 {
        if remaining == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return;
    }
    if pos == dim - 1 {
        cur[pos] = remaining as u32;
        out.push(MultiIndex(cur.clone()));
        return;
    }
    for k in (0..=remaining).rev() {
        cur[pos] = k as u32;
        fill(dim, remaining - k, pos + 1, cur, out);
    }
    cur[pos] = 0;
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).map(BigInt::from).fold(BigInt::one(), |a, b| a * b)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::from(0);
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    acc
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl<const N: usize> From<[u32; N]> for MultiIndex {
    fn from(v: [u32; N]) -> Self {
        Self(v.to_vec())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graded_lex_enumeration() {
        let all = MultiIndex::up_to_degree(2, 2);
        let want: Vec<MultiIndex> = vec![
            [0, 0].into(),
            [1, 0].into(),
            [0, 1].into(),
            [2, 0].into(),
            [1, 1].into(),
            [0, 2].into(),
        ];
        assert_eq!(all, want);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(sorted, all);
    }

    #[test]
    fn basis_size_is_binomial() {
        for d in 1..=3 {
            for n in 0..=6u32 {
                let count = MultiIndex::up_to_degree(d, n as usize).len();
                assert_eq!(BigInt::from(count), binomial(n + d as u32, d as u32));
            }
        }
    }

    #[test]
    fn factorials_do_not_overflow() {
        let a = MultiIndex::from([30, 25]);
        assert_eq!(a.factorial(), factorial(30) * factorial(25));
        assert!(a.factorial() > BigInt::from(u64::MAX));
    }

    #[test]
    fn falling_and_binomial() {
        let a = MultiIndex::from([4, 2]);
        let k = MultiIndex::from([2, 1]);
        assert_eq!(a.falling(&k), BigInt::from(12 * 2));
        assert_eq!(a.binomial(&k), BigInt::from(6 * 2));
        assert_eq!(a.falling(&MultiIndex::from([5, 0])), BigInt::from(0));
        assert_eq!(a.sub_indices().len(), 5 * 3);
    }
}
