//! Fixed-width subsets of a ground set `0..n`.

use std::fmt;

/// Subset of `0..n` stored as a bitmask; bit `e` is set iff element `e` is present.
///
/// Ordering is the integer order of the encoding, which is what every
/// deterministic listing in this crate sorts by.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ElementSet(u32);

impl ElementSet {
    pub const MAX_ELEMENTS: usize = 20;

    pub const fn empty() -> Self {
        ElementSet(0)
    }

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= Self::MAX_ELEMENTS);
        ElementSet(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(e: usize) -> Self {
        debug_assert!(e < Self::MAX_ELEMENTS);
        ElementSet(1 << e)
    }

    pub const fn from_bits(bits: u32) -> Self {
        ElementSet(bits)
    }

    pub const fn bits(self) -> u32 {
        self.0
    }

    pub fn contains(self, e: usize) -> bool {
        e < 32 && self.0 >> e & 1 == 1
    }

    pub fn with(self, e: usize) -> Self {
        ElementSet(self.0 | 1 << e)
    }

    pub fn without(self, e: usize) -> Self {
        ElementSet(self.0 & !(1 << e))
    }

    pub fn union(self, other: Self) -> Self {
        ElementSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        ElementSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        ElementSet(self.0 & !other.0)
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Self) -> bool {
        self.is_subset(other) && self != other
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// All subsets of `0..n`, in encoding order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = ElementSet> {
        (0..1u64 << n).map(|b| ElementSet(b as u32))
    }

    /// All `k`-element subsets of `0..n`, in encoding order.
    pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = ElementSet> {
        Self::all_subsets(n).filter(move |s| s.len() == k)
    }
}

impl FromIterator<usize> for ElementSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        iter.into_iter().fold(ElementSet::empty(), ElementSet::with)
    }
}

impl IntoIterator for ElementSet {
    type Item = usize;
    type IntoIter = Elements;

    fn into_iter(self) -> Elements {
        self.iter()
    }
}

/// Elements of an [`ElementSet`] in increasing order.
pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
