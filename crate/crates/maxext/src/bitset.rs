//! Fixed-width bit vectors used internally by the closure and search code.

use crate::finset::FinSet;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct BitSet {
    blocks: Vec<u64>,
    size: u32,
}

impl BitSet {
    pub fn new(size: u32) -> Self {
        BitSet {
            blocks: vec![0; (size as usize + 63) / 64],
            size,
        }
    }

    pub fn from_finset(set: &FinSet, size: u32) -> Self {
        let mut b = BitSet::new(size);
        for e in set.iter() {
            b.insert(e);
        }
        b
    }

    pub fn to_finset(&self) -> FinSet {
        FinSet::from_elements(self.iter())
    }

    pub fn contains(&self, e: u32) -> bool {
        debug_assert!(e < self.size);
        self.blocks[e as usize / 64] >> (e % 64) & 1 == 1
    }

    /// Returns true if the element was newly added.
    pub fn insert(&mut self, e: u32) -> bool {
        debug_assert!(e < self.size);
        let block = &mut self.blocks[e as usize / 64];
        let bit = 1u64 << (e % 64);
        let fresh = *block & bit == 0;
        *block |= bit;
        fresh
    }

    pub fn remove(&mut self, e: u32) {
        debug_assert!(e < self.size);
        self.blocks[e as usize / 64] &= !(1u64 << (e % 64));
    }

    pub fn is_subset_of(&self, other: &BitSet) -> bool {
        self.blocks
            .iter()
            .zip(&other.blocks)
            .all(|(a, b)| a & !b == 0)
    }

    pub fn intersects(&self, other: &BitSet) -> bool {
        self.blocks.iter().zip(&other.blocks).any(|(a, b)| a & b != 0)
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.blocks.iter().enumerate().flat_map(|(k, &block)| {
            (0..64)
                .filter(move |i| block >> i & 1 == 1)
                .map(move |i| (k * 64) as u32 + i)
        })
    }
}
