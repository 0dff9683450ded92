use std::fmt;

use fixedbitset::FixedBitSet;

/// A set of vertex ids drawn from `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Region {
    bits: FixedBitSet,
}

impl Region {
    pub fn empty(universe: usize) -> Self {
        Region { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Region { bits }
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(universe: usize, it: I) -> Self {
        let mut r = Region::empty(universe);
        for v in it {
            r.insert(v);
        }
        r
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        !self.bits.put(v)
    }

    #[inline]
    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn union_with(&mut self, other: &Region) {
        self.bits.union_with(&other.bits);
    }

    pub fn intersect_with(&mut self, other: &Region) {
        self.bits.intersect_with(&other.bits);
    }

    pub fn difference_with(&mut self, other: &Region) {
        self.bits.difference_with(&other.bits);
    }

    pub fn union(&self, other: &Region) -> Region {
        let mut r = self.clone();
        r.union_with(other);
        r
    }

    pub fn intersection(&self, other: &Region) -> Region {
        let mut r = self.clone();
        r.intersect_with(other);
        r
    }

    pub fn difference(&self, other: &Region) -> Region {
        let mut r = self.clone();
        r.difference_with(other);
        r
    }

    pub fn is_subset(&self, other: &Region) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn is_disjoint(&self, other: &Region) -> bool {
        self.bits.is_disjoint(&other.bits)
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl fmt::Debug for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
