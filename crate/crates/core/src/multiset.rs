//! Multisets over finite alphabets.
//!
//! A multiset is stored as a count vector aligned with the alphabet order.
//! Every multiset-indexed object in the crate (urn spaces, webs of the
//! symmetric equalisers, coefficient tables of `!X`) is laid out in the
//! canonical order produced here: lexicographically *descending* on count
//! vectors. For bounded families (all multisets of size ≤ n) the same rule
//! applies to the unpadded count vectors, which coincides with the order of
//! the padded size-n multisets over the alphabet extended by a trailing `★`.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Ordered list of distinct symbol names.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "AlphabetRepr", into = "AlphabetRepr")]
pub struct Alphabet {
    symbols: Vec<String>,
}

#[derive(Serialize, Deserialize)]
struct AlphabetRepr {
    symbols: Vec<String>,
}

impl TryFrom<AlphabetRepr> for Alphabet {
    type Error = Error;
    fn try_from(r: AlphabetRepr) -> Result<Self> {
        Alphabet::new(r.symbols)
    }
}

impl From<Alphabet> for AlphabetRepr {
    fn from(a: Alphabet) -> Self {
        AlphabetRepr { symbols: a.symbols }
    }
}

impl Alphabet {
    pub fn new<S: Into<String>>(symbols: impl IntoIterator<Item = S>) -> Result<Self> {
        let symbols: Vec<String> = symbols.into_iter().map(Into::into).collect();
        if symbols.is_empty() {
            return Err(Error::Alphabet("alphabet must be non-empty".into()));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::Alphabet(format!("duplicate symbol {s:?}")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// `{t, f}`.
    pub fn bool() -> Self {
        Alphabet::new(["t", "f"]).expect("static alphabet")
    }

    /// `{a, b, c, ...}` with `k` letters (k ≤ 26).
    pub fn letters(k: usize) -> Self {
        assert!((1..=26).contains(&k));
        Alphabet::new((0..k).map(|i| ((b'a' + i as u8) as char).to_string())).expect("distinct")
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    pub fn position(&self, symbol: &str) -> Option<usize> {
        self.symbols.iter().position(|s| s == symbol)
    }

    /// Renders a multiset as `[t,t,f]`.
    pub fn show(&self, mu: &Multiset) -> String {
        let mut parts = Vec::with_capacity(mu.size() as usize);
        for (a, &c) in mu.counts().iter().enumerate() {
            for _ in 0..c {
                parts.push(self.symbols.get(a).map_or("?", |s| s.as_str()));
            }
        }
        format!("[{}]", parts.join(","))
    }
}

/// Count vector over `k` positions.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Multiset {
    counts: Vec<u32>,
}

impl Multiset {
    pub fn new(counts: Vec<u32>) -> Self {
        Multiset { counts }
    }

    pub fn empty(k: usize) -> Self {
        Multiset { counts: vec![0; k] }
    }

    pub fn singleton(k: usize, a: usize) -> Self {
        let mut counts = vec![0; k];
        counts[a] = 1;
        Multiset { counts }
    }

    pub fn counts(&self) -> &[u32] {
        &self.counts
    }

    pub fn arity(&self) -> usize {
        self.counts.len()
    }

    pub fn size(&self) -> u32 {
        self.counts.iter().sum()
    }

    pub fn count(&self, a: usize) -> u32 {
        self.counts[a]
    }

    /// `ν ⊆ μ` componentwise.
    pub fn is_subset_of(&self, other: &Multiset) -> bool {
        self.counts.len() == other.counts.len()
            && self.counts.iter().zip(&other.counts).all(|(a, b)| a <= b)
    }

    pub fn plus(&self, other: &Multiset) -> Multiset {
        Multiset {
            counts: self.counts.iter().zip(&other.counts).map(|(a, b)| a + b).collect(),
        }
    }

    /// `μ + [a]`.
    pub fn with(&self, a: usize) -> Multiset {
        let mut counts = self.counts.clone();
        counts[a] += 1;
        Multiset { counts }
    }

    /// `μ − [a]`, absent when `a ∉ μ`.
    pub fn without(&self, a: usize) -> Option<Multiset> {
        let mut counts = self.counts.clone();
        counts[a] = counts[a].checked_sub(1)?;
        Some(Multiset { counts })
    }

    /// Sorted enumeration: each position repeated by its count.
    pub fn canonical_tuple(&self) -> TupleIndex {
        let mut entries = Vec::with_capacity(self.size() as usize);
        for (a, &c) in self.counts.iter().enumerate() {
            entries.extend(std::iter::repeat(a).take(c as usize));
        }
        TupleIndex { entries }
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.counts)
    }
}

/// Ordered tuple of alphabet positions; the basis of `X^{⊗n}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TupleIndex {
    pub entries: Vec<usize>,
}

impl TupleIndex {
    pub fn new(entries: Vec<usize>) -> Self {
        TupleIndex { entries }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Position in the Kronecker ordering of `k^n` tuples (first coordinate
    /// most significant).
    pub fn rank(&self, k: usize) -> usize {
        self.entries.iter().fold(0, |acc, &a| acc * k + a)
    }

    pub fn unrank(mut rank: usize, k: usize, n: usize) -> TupleIndex {
        let mut entries = vec![0; n];
        for slot in entries.iter_mut().rev() {
            *slot = rank % k;
            rank /= k;
        }
        TupleIndex { entries }
    }
}

/// All size-`n` multisets over `k` positions, lexicographically descending.
pub fn enumerate(k: usize, n: usize) -> Vec<Multiset> {
    let mut out = Vec::new();
    let mut counts = vec![0u32; k];
    fill_exact(&mut counts, 0, n as u32, &mut out);
    out
}

fn fill_exact(counts: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Multiset>) {
    if pos + 1 >= counts.len() {
        if let Some(last) = counts.last_mut() {
            *last = left;
            out.push(Multiset::new(counts.clone()));
        } else if left == 0 {
            out.push(Multiset::new(Vec::new()));
        }
        return;
    }
    for c in (0..=left).rev() {
        counts[pos] = c;
        fill_exact(counts, pos + 1, left - c, out);
    }
    counts[pos] = 0;
}

/// All multisets of size ≤ `n` over `k` positions, lexicographically
/// descending on count vectors.
pub fn enumerate_bounded(k: usize, n: usize) -> Vec<Multiset> {
    let mut out = Vec::new();
    let mut counts = vec![0u32; k];
    fill_bounded(&mut counts, 0, n as u32, &mut out);
    out
}

fn fill_bounded(counts: &mut Vec<u32>, pos: usize, left: u32, out: &mut Vec<Multiset>) {
    if pos == counts.len() {
        out.push(Multiset::new(counts.clone()));
        return;
    }
    for c in (0..=left).rev() {
        counts[pos] = c;
        fill_bounded(counts, pos + 1, left - c, out);
    }
    counts[pos] = 0;
}

/// Size-`n` multisets over an alphabet.
pub fn enumerate_multisets(alphabet: &Alphabet, n: usize) -> Vec<Multiset> {
    enumerate(alphabet.len(), n)
}

/// Number of enumerations of `mu`: `|μ|! / Π μ(a)!`.
pub fn multinomial(mu: &Multiset) -> BigUint {
    // Product of binomials C(c_1 + … + c_i, c_i) keeps intermediates small.
    let mut acc = BigUint::one();
    let mut running = 0u64;
    for &c in mu.counts() {
        for j in 1..=c as u64 {
            running += 1;
            acc *= BigUint::from(running);
            acc /= BigUint::from(j);
        }
    }
    acc
}

/// Machine-word multinomial; overflow is reported, never wrapped.
pub fn multinomial_u64(mu: &Multiset) -> Result<u64> {
    multinomial(mu)
        .to_u64()
        .ok_or(Error::Overflow("multinomial coefficient"))
}

/// Tally of a tuple over `k` positions.
pub fn multiset_of(tuple: &TupleIndex, k: usize) -> Result<Multiset> {
    let mut counts = vec![0u32; k];
    for &a in &tuple.entries {
        if a >= k {
            return Err(Error::IndexOutOfRange { index: a, bound: k });
        }
        counts[a] += 1;
    }
    Ok(Multiset::new(counts))
}

/// `μ − ν` when `ν ⊆ μ`.
pub fn difference(mu: &Multiset, nu: &Multiset) -> Option<Multiset> {
    if !nu.is_subset_of(mu) {
        return None;
    }
    Some(Multiset::new(
        mu.counts.iter().zip(&nu.counts).map(|(a, b)| a - b).collect(),
    ))
}

/// An enumerated family of multisets with reverse lookup.
#[derive(Clone, Debug, PartialEq)]
pub struct MultisetBasis {
    items: Vec<Multiset>,
    index: HashMap<Multiset, usize>,
}

impl MultisetBasis {
    pub fn from_items(items: Vec<Multiset>) -> Self {
        let index = items.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        MultisetBasis { items, index }
    }

    /// Size exactly `n`.
    pub fn exact(k: usize, n: usize) -> Self {
        Self::from_items(enumerate(k, n))
    }

    /// Size at most `n`.
    pub fn bounded(k: usize, n: usize) -> Self {
        Self::from_items(enumerate_bounded(k, n))
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn items(&self) -> &[Multiset] {
        &self.items
    }

    pub fn get(&self, i: usize) -> &Multiset {
        &self.items[i]
    }

    pub fn position(&self, mu: &Multiset) -> Option<usize> {
        self.index.get(mu).copied()
    }
}

/// Binomial coefficient as a big integer.
pub fn binomial(n: u64, r: u64) -> BigUint {
    if r > n {
        return BigUint::from(0u32);
    }
    let r = r.min(n - r);
    let mut acc = BigUint::one();
    for j in 1..=r {
        acc *= BigUint::from(n - r + j);
        acc /= BigUint::from(j);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn bool_pairs_in_canonical_order() {
        let b = Alphabet::bool();
        let ms = enumerate_multisets(&b, 2);
        let shown: Vec<_> = ms.iter().map(|m| b.show(m)).collect();
        assert_eq!(shown, ["[t,t]", "[t,f]", "[f,f]"]);
    }

    #[test]
    fn size_zero_is_the_empty_multiset() {
        for k in 1..5 {
            assert_eq!(enumerate(k, 0), vec![Multiset::empty(k)]);
        }
    }

    #[test]
    fn three_letters_pairs_match_sorted_pairs() {
        // brute force: sorted pairs (i ≤ j)
        let mut brute = std::collections::HashSet::new();
        for i in 0..3 {
            for j in i..3 {
                brute.insert(multiset_of(&TupleIndex::new(vec![i, j]), 3).unwrap());
            }
        }
        let ms = enumerate(3, 2);
        assert_eq!(ms.len(), 6);
        assert_eq!(ms.iter().cloned().collect::<std::collections::HashSet<_>>(), brute);
    }

    #[test]
    fn multinomial_examples() {
        assert_eq!(multinomial(&Multiset::empty(2)), BigUint::one());
        assert_eq!(multinomial(&Multiset::new(vec![2, 1])), BigUint::from(3u32));
        assert_eq!(multinomial(&Multiset::new(vec![1, 1])), BigUint::from(2u32));
    }

    #[test]
    fn multinomial_overflow_is_reported() {
        // 40 distinct symbols once each: 40! > u64::MAX
        let mu = Multiset::new(vec![1; 40]);
        assert_eq!(multinomial_u64(&mu), Err(Error::Overflow("multinomial coefficient")));
        assert_eq!(multinomial_u64(&Multiset::new(vec![3, 2])).unwrap(), 10);
    }

    #[test]
    fn tally_examples() {
        let tf = multiset_of(&TupleIndex::new(vec![0, 1, 0]), 2).unwrap();
        assert_eq!(tf, Multiset::new(vec![2, 1]));
        assert_eq!(multiset_of(&TupleIndex::new(vec![]), 2).unwrap(), Multiset::empty(2));
        let aaa = multiset_of(&TupleIndex::new(vec![0, 0, 0]), 3).unwrap();
        assert_eq!(multinomial(&aaa), BigUint::one());
        assert!(multiset_of(&TupleIndex::new(vec![2]), 2).is_err());
    }

    #[test]
    fn difference_examples() {
        let ttf = Multiset::new(vec![2, 1]);
        assert_eq!(difference(&ttf, &Multiset::new(vec![1, 0])), Some(Multiset::new(vec![1, 1])));
        assert_eq!(difference(&Multiset::new(vec![1, 0]), &Multiset::new(vec![0, 1])), None);
        assert_eq!(difference(&ttf, &ttf), Some(Multiset::empty(2)));
    }

    #[test]
    fn bounded_order_matches_padded_order() {
        for k in 1..4 {
            for n in 0..5 {
                let padded: Vec<Vec<u32>> = enumerate(k + 1, n)
                    .into_iter()
                    .map(|m| m.counts()[..k].to_vec())
                    .collect();
                let bounded: Vec<Vec<u32>> = enumerate_bounded(k, n)
                    .into_iter()
                    .map(|m| m.counts().to_vec())
                    .collect();
                assert_eq!(padded, bounded);
            }
        }
    }

    #[test]
    fn fibers_of_tally_have_multinomial_size() {
        for k in 1..=4usize {
            for n in 0..=6usize {
                if k.pow(n as u32) > 5000 {
                    continue;
                }
                let basis = MultisetBasis::exact(k, n);
                let mut fiber = vec![0u64; basis.len()];
                for r in 0..k.pow(n as u32) {
                    let mu = multiset_of(&TupleIndex::unrank(r, k, n), k).unwrap();
                    fiber[basis.position(&mu).expect("surjective")] += 1;
                }
                for (mu, &f) in basis.items().iter().zip(&fiber) {
                    assert_eq!(BigUint::from(f), multinomial(mu));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn enumeration_partitions_tuples(k in 1usize..5, n in 0usize..7) {
            let ms = enumerate(k, n);
            prop_assert_eq!(BigUint::from(ms.len() as u64), binomial((n + k - 1) as u64, (k - 1) as u64));
            let total: BigUint = ms.iter().map(multinomial).sum();
            prop_assert_eq!(total, BigUint::from(k as u64).pow(n as u32));
            for w in ms.windows(2) {
                prop_assert!(w[0] > w[1]);
            }
        }

        #[test]
        fn rank_unrank(k in 1usize..5, n in 0usize..6, seed in any::<u64>()) {
            let total = k.pow(n as u32);
            let r = (seed as usize) % total;
            prop_assert_eq!(TupleIndex::unrank(r, k, n).rank(k), r);
        }
    }
}
