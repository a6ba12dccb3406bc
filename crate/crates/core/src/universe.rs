//! Contract universes and the contract sets defined over them.
//!
//! A [`ContractUniverse`] fixes the finite, ordered set of all contracts. Every
//! [`ContractSet`] is a membership vector over exactly one universe; binary set
//! operations refuse to mix sets from different universes.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{BitAnd, BitOr, Sub};
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::error::{Error, Result};

#[derive(Debug)]
struct UniverseInner {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

/// The finite ordered set of all contracts.
///
/// Label order is fixed at construction; it defines the index of each
/// contract and the canonical order used whenever sets are rendered.
/// Cloning is cheap (the label table is shared).
#[derive(Clone, Debug)]
pub struct ContractUniverse {
    inner: Arc<UniverseInner>,
}

impl ContractUniverse {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { inner: Arc::new(UniverseInner { labels, index }) })
    }

    pub fn len(&self) -> usize {
        self.inner.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.inner.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.inner.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.inner.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Result<usize> {
        self.inner.index.get(label).copied().ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn empty_set(&self) -> ContractSet {
        ContractSet::empty(self)
    }

    pub fn full_set(&self) -> ContractSet {
        ContractSet::full(self)
    }

    /// Every subset of the universe in ascending mask order (contract `i` is
    /// bit `i`). Only available for universes of at most 63 contracts.
    pub fn subsets(&self) -> impl Iterator<Item = ContractSet> + '_ {
        assert!(self.len() < 64, "subset enumeration needs fewer than 64 contracts");
        (0..(1u64 << self.len())).map(move |mask| ContractSet::from_mask(self, mask))
    }

    pub(crate) fn same_as(&self, other: &ContractUniverse) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner) || self.inner.labels == other.inner.labels
    }
}

impl PartialEq for ContractUniverse {
    fn eq(&self, other: &Self) -> bool {
        self.same_as(other)
    }
}

impl Eq for ContractUniverse {}

/// Build a universe from a label list.
pub fn make_universe<I, S>(labels: I) -> Result<ContractUniverse>
where
    I: IntoIterator<Item = S>,
    S: Into<String>,
{
    ContractUniverse::new(labels)
}

/// A subset of a [`ContractUniverse`].
#[derive(Clone)]
pub struct ContractSet {
    universe: ContractUniverse,
    members: FixedBitSet,
}

impl ContractSet {
    pub fn empty(universe: &ContractUniverse) -> Self {
        Self { universe: universe.clone(), members: FixedBitSet::with_capacity(universe.len()) }
    }

    pub fn full(universe: &ContractUniverse) -> Self {
        let mut members = FixedBitSet::with_capacity(universe.len());
        members.insert_range(..);
        Self { universe: universe.clone(), members }
    }

    pub fn from_indices<I>(universe: &ContractUniverse, indices: I) -> Result<Self>
    where
        I: IntoIterator<Item = usize>,
    {
        let mut set = Self::empty(universe);
        for index in indices {
            if index >= universe.len() {
                return Err(Error::IndexOutOfRange { index, size: universe.len() });
            }
            set.members.insert(index);
        }
        Ok(set)
    }

    pub fn from_labels<I, S>(universe: &ContractUniverse, labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut set = Self::empty(universe);
        for label in labels {
            set.members.insert(universe.index_of(label.as_ref())?);
        }
        Ok(set)
    }

    /// Set whose members are the one-bits of `mask`; bits beyond the universe
    /// size are ignored.
    pub fn from_mask(universe: &ContractUniverse, mask: u64) -> Self {
        let mut set = Self::empty(universe);
        let mut rest = mask;
        while rest != 0 {
            let bit = rest.trailing_zeros() as usize;
            if bit >= universe.len() {
                break;
            }
            set.members.insert(bit);
            rest &= rest - 1;
        }
        set
    }

    /// Bit mask of the members, or `None` when the universe has more than 64 contracts.
    pub fn to_mask(&self) -> Option<u64> {
        if self.universe.len() > 64 {
            return None;
        }
        Some(self.members.ones().fold(0u64, |acc, i| acc | (1u64 << i)))
    }

    pub fn universe(&self) -> &ContractUniverse {
        &self.universe
    }

    pub fn contains(&self, index: usize) -> bool {
        self.members.contains(index)
    }

    pub fn contains_label(&self, label: &str) -> bool {
        self.universe.index_of(label).map(|i| self.contains(i)).unwrap_or(false)
    }

    pub fn insert(&mut self, index: usize) {
        self.members.insert(index);
    }

    pub fn remove(&mut self, index: usize) {
        self.members.set(index, false);
    }

    /// Copy of this set with `index` added.
    pub fn with(&self, index: usize) -> Self {
        let mut set = self.clone();
        set.insert(index);
        set
    }

    pub fn len(&self) -> usize {
        self.members.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_clear()
    }

    /// Member indices in universe order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.ones()
    }

    pub fn labels(&self) -> Vec<&str> {
        self.iter().map(|i| self.universe.label(i)).collect()
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.universe.same_as(&other.universe) {
            Ok(())
        } else {
            Err(Error::UniverseMismatch)
        }
    }

    pub fn union(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut members = self.members.clone();
        members.union_with(&other.members);
        Ok(Self { universe: self.universe.clone(), members })
    }

    pub fn intersection(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut members = self.members.clone();
        members.intersect_with(&other.members);
        Ok(Self { universe: self.universe.clone(), members })
    }

    pub fn difference(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let mut members = self.members.clone();
        members.difference_with(&other.members);
        Ok(Self { universe: self.universe.clone(), members })
    }

    /// Complement relative to the whole universe.
    pub fn complement(&self) -> Self {
        let mut members = self.members.clone();
        members.toggle_range(..);
        Self { universe: self.universe.clone(), members }
    }

    pub fn is_subset(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.members.is_subset(&other.members))
    }

    pub fn is_disjoint(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.members.is_disjoint(&other.members))
    }

    /// Equality that reports a universe mismatch instead of answering `false`.
    pub fn set_eq(&self, other: &Self) -> Result<bool> {
        self.check(other)?;
        Ok(self.members == other.members)
    }

    /// Subset test for sets already known to share a universe.
    ///
    /// # Panics
    /// Panics if the universes differ.
    pub fn subset_of(&self, other: &Self) -> bool {
        self.is_subset(other).expect("contract sets from different universes")
    }

    /// Every subset of this set in ascending mask order. Needs a universe of
    /// fewer than 64 contracts.
    pub fn subsets(&self) -> impl Iterator<Item = ContractSet> + '_ {
        let mask = self.to_mask().filter(|_| self.universe.len() < 64);
        let mask = mask.expect("subset enumeration needs fewer than 64 contracts");
        crate::masks::submasks(mask).map(move |m| ContractSet::from_mask(&self.universe, m))
    }
}

impl PartialEq for ContractSet {
    fn eq(&self, other: &Self) -> bool {
        self.universe.same_as(&other.universe) && self.members == other.members
    }
}

impl Eq for ContractSet {}

impl std::hash::Hash for ContractSet {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.universe.len().hash(state);
        self.members.as_slice().hash(state);
    }
}

/// Canonical order: sets compare as binary numbers whose most significant bit
/// is the last contract of the universe. For universes of at most 64
/// contracts this is ascending mask order.
impl Ord for ContractSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.universe
            .len()
            .cmp(&other.universe.len())
            .then_with(|| self.members.as_slice().iter().rev().cmp(other.members.as_slice().iter().rev()))
    }
}

impl PartialOrd for ContractSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ContractSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (n, label) in self.labels().into_iter().enumerate() {
            if n > 0 {
                f.write_str(", ")?;
            }
            f.write_str(label)?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for ContractSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

// Operator forms panic on a universe mismatch; use the named methods to get an error instead.

impl BitOr for &ContractSet {
    type Output = ContractSet;
    fn bitor(self, rhs: Self) -> ContractSet {
        self.union(rhs).expect("contract sets from different universes")
    }
}

impl BitAnd for &ContractSet {
    type Output = ContractSet;
    fn bitand(self, rhs: Self) -> ContractSet {
        self.intersection(rhs).expect("contract sets from different universes")
    }
}

impl Sub for &ContractSet {
    type Output = ContractSet;
    fn sub(self, rhs: Self) -> ContractSet {
        self.difference(rhs).expect("contract sets from different universes")
    }
}
