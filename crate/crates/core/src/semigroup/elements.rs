use std::fmt;

use fixedbitset::FixedBitSet;

/// A subset of the elements of a finite presentation.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ElementSet(FixedBitSet);

impl ElementSet {
    pub fn empty(universe: usize) -> Self {
        ElementSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        ElementSet(bits)
    }

    pub fn from_elements(universe: usize, elements: impl IntoIterator<Item = u32>) -> Self {
        let mut set = ElementSet::empty(universe);
        for x in elements {
            set.insert(x);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    /// Returns true when `x` was not already present.
    pub fn insert(&mut self, x: u32) -> bool {
        !self.0.put(x as usize)
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.contains(x as usize)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.ones().map(|i| i as u32)
    }

    pub fn to_vec(&self) -> Vec<u32> {
        self.iter().collect()
    }

    pub fn union_with(&mut self, other: &ElementSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersection(&self, other: &ElementSet) -> ElementSet {
        let mut out = self.clone();
        out.0.intersect_with(&other.0);
        out
    }

    pub fn is_subset(&self, other: &ElementSet) -> bool {
        self.0.is_subset(&other.0)
    }
}

impl fmt::Debug for ElementSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
