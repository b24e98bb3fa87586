//! Finite sets of naturals and their canonical numeric indices.
//!
//! A set `F` is coded as the number `n = sum of 2^i for i in F`, so membership
//! of `i` in the set coded by `n` is a single bit test and every natural is a
//! valid index.

use std::fmt;

use crate::error::{Error, Result};

/// Default cap on the base size for subset enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 24;

/// A finite set of naturals, kept strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct FinSet {
    elements: Vec<u32>,
}

impl FinSet {
    pub fn empty() -> Self {
        FinSet { elements: Vec::new() }
    }

    pub fn singleton(element: u32) -> Self {
        FinSet { elements: vec![element] }
    }

    /// Builds a set from arbitrary elements; duplicates collapse.
    pub fn from_elements<I: IntoIterator<Item = u32>>(elements: I) -> Self {
        let mut v: Vec<u32> = elements.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        FinSet { elements: v }
    }

    pub fn elements(&self) -> &[u32] {
        &self.elements
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.elements.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, element: u32) -> bool {
        self.elements.binary_search(&element).is_ok()
    }

    pub fn max(&self) -> Option<u32> {
        self.elements.last().copied()
    }

    /// Returns `self ∪ {element}` as a new set.
    pub fn inserted(&self, element: u32) -> Self {
        if self.contains(element) {
            return self.clone();
        }
        let mut v = self.elements.clone();
        let pos = v.partition_point(|&e| e < element);
        v.insert(pos, element);
        FinSet { elements: v }
    }

    /// Returns `self ∖ {element}` as a new set.
    pub fn removed(&self, element: u32) -> Self {
        FinSet {
            elements: self.iter().filter(|&e| e != element).collect(),
        }
    }

    pub fn union(&self, other: &FinSet) -> Self {
        FinSet::from_elements(self.iter().chain(other.iter()))
    }

    pub fn intersection(&self, other: &FinSet) -> Self {
        FinSet {
            elements: self.iter().filter(|&e| other.contains(e)).collect(),
        }
    }

    pub fn difference(&self, other: &FinSet) -> Self {
        FinSet {
            elements: self.iter().filter(|&e| !other.contains(e)).collect(),
        }
    }

    pub fn is_subset_of(&self, other: &FinSet) -> bool {
        self.iter().all(|e| other.contains(e))
    }

    pub fn is_strict_subset_of(&self, other: &FinSet) -> bool {
        self.len() < other.len() && self.is_subset_of(other)
    }

    /// All subsets of this set, under the default enumeration cap.
    pub fn subsets(&self) -> Result<Subsets> {
        self.subsets_with_cap(DEFAULT_ENUMERATION_CAP)
    }

    /// All `2^|self|` subsets, yielded in index order of the characteristic
    /// vector over this set's ascending enumeration. For bases with all
    /// elements below 64 this coincides with canonical index order.
    pub fn subsets_with_cap(&self, cap: usize) -> Result<Subsets> {
        if self.len() > cap {
            return Err(Error::EnumerationBudget { size: self.len(), cap });
        }
        Ok(Subsets {
            base: self.elements.clone(),
            next: 0,
            total: 1u64 << self.len(),
        })
    }
}

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, e) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{e}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<u32> for FinSet {
    fn from_iter<I: IntoIterator<Item = u32>>(iter: I) -> Self {
        FinSet::from_elements(iter)
    }
}

/// Iterator over all subsets of a base set.
#[derive(Debug)]
pub struct Subsets {
    base: Vec<u32>,
    next: u64,
    total: u64,
}

impl Iterator for Subsets {
    type Item = FinSet;

    fn next(&mut self) -> Option<FinSet> {
        if self.next >= self.total {
            return None;
        }
        let mask = self.next;
        self.next += 1;
        Some(FinSet {
            elements: self
                .base
                .iter()
                .enumerate()
                .filter(|(j, _)| mask >> j & 1 == 1)
                .map(|(_, &e)| e)
                .collect(),
        })
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = (self.total - self.next) as usize;
        (left, Some(left))
    }
}

/// The canonical index of a finite set: `n = sum of 2^i over i in F`.
pub fn index_of(set: &FinSet) -> Result<u64> {
    let mut n = 0u64;
    for e in set.iter() {
        if e >= 64 {
            return Err(Error::IndexOverflow(e));
        }
        n |= 1u64 << e;
    }
    Ok(n)
}

/// The finite set with canonical index `n`; inverse of [`index_of`].
pub fn members(n: u64) -> FinSet {
    FinSet {
        elements: (0..64).filter(|&i| n >> i & 1 == 1).collect(),
    }
}

/// The membership predicate on indices: true iff `i` is in the set coded
/// by `n`. Positions at or above the index width are never members.
pub fn index_contains(i: u64, n: u64) -> bool {
    i < 64 && n >> i & 1 == 1
}

/// The ground segment `{0, …, size−1}` standing in for the naturals.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Universe {
    size: u32,
}

impl Universe {
    pub fn new(size: u32) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidInput("universe size must be at least 1".into()));
        }
        Ok(Universe { size })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn contains(&self, set: &FinSet) -> bool {
        set.max().map_or(true, |m| m < self.size)
    }

    pub fn check(&self, set: &FinSet) -> Result<()> {
        match set.max() {
            Some(m) if m >= self.size => Err(Error::OutsideUniverse { elem: m, size: self.size }),
            _ => Ok(()),
        }
    }

    pub fn ground_set(&self) -> FinSet {
        FinSet { elements: (0..self.size).collect() }
    }
}

/// Parses the textual set literal syntax: `{}`, `{1,2,5}`, `{0..7}`, or a mix
/// of single elements and inclusive ranges. Duplicate elements are rejected.
pub fn parse_set_literal(text: &str) -> Result<FinSet> {
    let s = text.trim();
    let inner = s
        .strip_prefix('{')
        .and_then(|rest| rest.strip_suffix('}'))
        .ok_or_else(|| Error::InvalidInput(format!("set literal must be braced: `{s}`")))?;
    let inner = inner.trim();
    let mut elements: Vec<u32> = Vec::new();
    if !inner.is_empty() {
        for item in inner.split(',') {
            let item = item.trim();
            if let Some((lo, hi)) = item.split_once("..") {
                let lo: u32 = parse_nat(lo)?;
                let hi: u32 = parse_nat(hi)?;
                if lo > hi {
                    return Err(Error::InvalidInput(format!("empty range `{item}`")));
                }
                elements.extend(lo..=hi);
            } else {
                elements.push(parse_nat(item)?);
            }
        }
    }
    let mut sorted = elements.clone();
    sorted.sort_unstable();
    let before = sorted.len();
    sorted.dedup();
    if sorted.len() != before {
        return Err(Error::InvalidInput(format!("duplicate element in set literal `{s}`")));
    }
    Ok(FinSet { elements: sorted })
}

fn parse_nat(text: &str) -> Result<u32> {
    text.trim()
        .parse()
        .map_err(|_| Error::InvalidInput(format!("expected a natural number, got `{}`", text.trim())))
}
