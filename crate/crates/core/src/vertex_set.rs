//! Fixed-universe vertex subsets backed by a packed bitset.
//!
//! Every territory, cop placement, separator and feedback set in the crate is a
//! [`VertexSet`]. The universe size is part of the value, so sets over
//! different graphs never compare equal by accident.

use std::cmp::Ordering;
use std::fmt;

use itertools::Itertools;
use serde::{Serialize, Serializer};
use smallvec::{smallvec, SmallVec};

const WORD: usize = 64;

type Words = SmallVec<[u64; 2]>;

/// A subset of `{0, …, universe-1}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    universe: usize,
    words: Words,
}

#[inline]
fn word_count(universe: usize) -> usize {
    universe.div_ceil(WORD)
}

impl VertexSet {
    /// The empty set over `universe` vertices.
    pub fn empty(universe: usize) -> Self {
        VertexSet {
            universe,
            words: smallvec![0; word_count(universe)],
        }
    }

    /// The full set `{0, …, universe-1}`.
    pub fn full(universe: usize) -> Self {
        let mut set = Self::empty(universe);
        for (i, w) in set.words.iter_mut().enumerate() {
            let lo = i * WORD;
            let hi = (lo + WORD).min(universe);
            *w = if hi - lo == WORD {
                u64::MAX
            } else {
                (1u64 << (hi - lo)) - 1
            };
        }
        set
    }

    /// Builds a set from vertex indices.
    ///
    /// Panics if an index is outside the universe.
    pub fn from_indices<I: IntoIterator<Item = usize>>(universe: usize, indices: I) -> Self {
        let mut set = Self::empty(universe);
        for v in indices {
            set.insert(v);
        }
        set
    }

    pub fn singleton(universe: usize, v: usize) -> Self {
        Self::from_indices(universe, [v])
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD] >> (v % WORD) & 1 == 1
    }

    /// Inserts `v`, returning whether it was absent.
    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(
            v < self.universe,
            "vertex {v} outside universe of size {}",
            self.universe
        );
        let mask = 1u64 << (v % WORD);
        let word = &mut self.words[v / WORD];
        let fresh = *word & mask == 0;
        *word |= mask;
        fresh
    }

    /// Removes `v`, returning whether it was present.
    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        if v >= self.universe {
            return false;
        }
        let mask = 1u64 << (v % WORD);
        let word = &mut self.words[v / WORD];
        let present = *word & mask != 0;
        *word &= !mask;
        present
    }

    /// Number of members.
    #[inline]
    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    fn check_universe(&self, other: &Self) {
        debug_assert_eq!(
            self.universe, other.universe,
            "vertex sets over different universes"
        );
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.check_universe(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    /// `universe \ self`.
    pub fn complement(&self) -> Self {
        Self::full(self.universe).difference(self)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.check_universe(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    /// Smallest member, if any.
    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// All subsets of `self` with exactly `size` members, in lexicographic
    /// order of their sorted member lists.
    pub fn subsets_of_size(&self, size: usize) -> impl Iterator<Item = VertexSet> + '_ {
        let universe = self.universe;
        self.iter()
            .combinations(size)
            .map(move |combo| VertexSet::from_indices(universe, combo))
    }

    /// All subsets `T ⊆ self` with `|self \ T| <= max_removed`, i.e. the
    /// subsets whose complement inside `self` is bounded.
    pub fn subsets_with_bounded_complement(
        &self,
        max_removed: usize,
    ) -> impl Iterator<Item = VertexSet> + '_ {
        let top = max_removed.min(self.len());
        (0..=top).flat_map(move |r| self.subsets_of_size(r).map(move |w| self.difference(&w)))
    }

    /// Packed word representation, least significant vertex first.
    pub fn words(&self) -> &[u64] {
        &self.words
    }

    /// Relabels members through `map` (old index → new index) into a new
    /// universe; members mapped to `None` are dropped.
    pub fn remap(&self, map: &[Option<usize>], universe: usize) -> VertexSet {
        VertexSet::from_indices(universe, self.iter().filter_map(|v| map[v]))
    }
}

impl Ord for VertexSet {
    /// Lexicographic order of the sorted member sequences, so `{0,3} < {1}`
    /// and `{0} < {0,1}`.
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter()
            .cmp(other.iter())
            .then(self.universe.cmp(&other.universe))
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.iter().join(","))
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn full_and_complement_respect_universe() {
        for n in [0, 1, 5, 63, 64, 65, 130] {
            let full = VertexSet::full(n);
            assert_eq!(full.len(), n);
            assert!(full.complement().is_empty());
            assert_eq!(full.iter().last(), n.checked_sub(1));
        }
    }

    #[test]
    fn lexicographic_order() {
        let a = VertexSet::from_indices(5, [0, 3]);
        let b = VertexSet::from_indices(5, [1]);
        let c = VertexSet::from_indices(5, [0]);
        assert!(a < b);
        assert!(c < a);
        assert!(VertexSet::empty(5) < c);
    }

    #[test]
    fn subsets_enumeration() {
        let s = VertexSet::from_indices(6, [1, 2, 4, 5]);
        let pairs: Vec<_> = s.subsets_of_size(2).map(|x| x.to_vec()).collect();
        assert_eq!(pairs.len(), 6);
        assert_eq!(pairs[0], vec![1, 2]);
        assert_eq!(pairs[5], vec![4, 5]);
        let bounded: Vec<_> = s.subsets_with_bounded_complement(1).collect();
        assert_eq!(bounded.len(), 5);
        assert_eq!(bounded[0], s);
        assert_eq!(VertexSet::empty(3).subsets_of_size(0).count(), 1);
    }

    #[test]
    fn set_algebra() {
        let a = VertexSet::from_indices(70, [1, 65, 69]);
        let b = VertexSet::from_indices(70, [1, 2]);
        assert_eq!(a.union(&b).to_vec(), vec![1, 2, 65, 69]);
        assert_eq!(a.intersection(&b).to_vec(), vec![1]);
        assert_eq!(a.difference(&b).to_vec(), vec![65, 69]);
        assert!(a.intersection(&b).is_subset(&a));
        assert!(!a.is_subset(&b));
        assert!(a.difference(&b).is_disjoint(&b));
    }
}
