//! Combinatorics on words: fractional powers, repetitions `U V^w` at the
//! start of a word, the stammering statistic and factor complexity.
//!
//! Everything here is generic over the letter type, so the same code serves
//! partial-quotient words and plain test alphabets.

pub mod criteria;
pub mod sturmian;

use std::collections::HashSet;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

pub use crate::rosen::Word;

/// `V^s = V^⌊s⌋ V'` with `V'` the prefix of `V` of length `⌈(s - ⌊s⌋)|V|⌉`.
pub fn fractional_power<T: Clone>(v: &[T], s: &BigRational) -> Vec<T> {
    assert!(!v.is_empty() && *s >= BigRational::zero(), "need nonempty V and s >= 0");
    let whole = s.floor().to_integer();
    let frac = s - BigRational::from_integer(whole.clone());
    let extra = (frac * BigRational::from_integer(BigInt::from(v.len()))).ceil().to_integer();
    let whole: usize = whole.try_into().expect("exponent fits in usize");
    let extra: usize = extra.try_into().expect("bounded by |V|");
    let mut out = Vec::with_capacity(whole * v.len() + extra);
    for _ in 0..whole {
        out.extend_from_slice(v);
    }
    out.extend_from_slice(&v[..extra]);
    out
}

/// `word[..u]` followed by `V^w`, `V = word[u..u+v]`, `|V^w| = matched`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Repetition {
    pub u: usize,
    pub v: usize,
    /// Length of `V^w`, so `w = matched / v`.
    pub matched: usize,
}

impl Repetition {
    pub fn w(&self) -> BigRational {
        BigRational::new(BigInt::from(self.matched), BigInt::from(self.v))
    }

    /// `(|U| + w|V|)/(2|U| + |V|)`.
    pub fn stammer_ratio(&self) -> BigRational {
        BigRational::new(BigInt::from(self.u + self.matched), BigInt::from(2 * self.u + self.v))
    }

    /// `|U V^w|`.
    pub fn prefix_len(&self) -> usize {
        self.u + self.matched
    }
}

/// `z[i]` = length of the longest common prefix of `s` and `s[i..]`.
pub fn z_function<T: Eq>(s: &[T]) -> Vec<usize> {
    let n = s.len();
    let mut z = vec![0; n];
    if n == 0 {
        return z;
    }
    z[0] = n;
    let (mut l, mut r) = (0, 0);
    for i in 1..n {
        if i < r {
            z[i] = (r - i).min(z[i - l]);
        }
        while i + z[i] < n && s[z[i]] == s[i + z[i]] {
            z[i] += 1;
        }
        if i + z[i] > r {
            l = i;
            r = i + z[i];
        }
    }
    z
}

/// Every `(u, v)` whose maximal exponent exceeds 1, with that exponent.
pub fn repetition_exponents<T: Eq>(word: &[T]) -> Vec<Repetition> {
    let mut out = Vec::new();
    for u in 0..word.len() {
        let z = z_function(&word[u..]);
        for v in 1..z.len() {
            if z[v] >= 1 {
                out.push(Repetition { u, v, matched: v + z[v] });
            }
        }
    }
    out
}

/// Max of the stammer ratio over all repetitions, or 1 when there are none.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stammer {
    pub value: BigRational,
    pub witness: Option<Repetition>,
}

pub fn stammer_statistic<T: Eq>(word: &[T]) -> Stammer {
    let mut best = Stammer { value: BigRational::one(), witness: None };
    for u in 0..word.len() {
        let z = z_function(&word[u..]);
        for v in 1..z.len() {
            if z[v] == 0 {
                continue;
            }
            let rep = Repetition { u, v, matched: v + z[v] };
            let r = rep.stammer_ratio();
            if r > best.value {
                best = Stammer { value: r, witness: Some(rep) };
            }
        }
    }
    best
}

/// A prefix `U V^s` with `|U V^s| ≥ n|U V|`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PrefixRepetition {
    pub u: usize,
    pub v: usize,
    pub s: BigRational,
    pub prefix_len: usize,
}

/// Searches for `U V^s` at the start of `word` with `|U V^s| ≥ n |U V|`,
/// preferring short `U V`.
pub fn prefix_repetition_search<T: Eq>(word: &[T], n: usize) -> Option<PrefixRepetition> {
    let len = word.len();
    let n = n.max(1);
    // |U V| ≤ len / n is necessary.
    let budget = len / n;
    for u in 0..budget {
        let z = z_function(&word[u..]);
        for v in 1..=(budget - u) {
            let matched = v + z.get(v).copied().unwrap_or(0);
            if u + matched >= n * (u + v) {
                let rep = Repetition { u, v, matched };
                return Some(PrefixRepetition { u, v, s: rep.w(), prefix_len: rep.prefix_len() });
            }
        }
    }
    None
}

/// Number of distinct factors of length `n`.
pub fn factor_complexity<T: Eq + Hash>(word: &[T], n: usize) -> usize {
    if n == 0 {
        return 1;
    }
    word.windows(n).collect::<HashSet<_>>().len()
}
