//! Subsets of a finite group as sorted index lists with a membership bitmap.

use fixedbitset::FixedBitSet;

use super::group::FiniteGroup;
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct GroupSubset {
    universe: u32,
    members: Vec<u32>,
    bits: FixedBitSet,
}

impl PartialEq for GroupSubset {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe && self.members == other.members
    }
}

impl Eq for GroupSubset {}

impl GroupSubset {
    pub fn empty(universe: u32) -> Self {
        Self {
            universe,
            members: Vec::new(),
            bits: FixedBitSet::with_capacity(universe as usize),
        }
    }

    pub fn full(universe: u32) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe as usize);
        bits.insert_range(..);
        Self {
            universe,
            members: (0..universe).collect(),
            bits,
        }
    }

    /// Deduplicating constructor; panics on out-of-range indices.
    pub fn from_indices<I: IntoIterator<Item = u32>>(universe: u32, items: I) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe as usize);
        for x in items {
            assert!(x < universe, "element {x} outside group of order {universe}");
            bits.insert(x as usize);
        }
        Self::from_bits(universe, bits)
    }

    pub fn try_from_indices<I: IntoIterator<Item = u32>>(universe: u32, items: I) -> Result<Self> {
        let mut bits = FixedBitSet::with_capacity(universe as usize);
        for x in items {
            if x >= universe {
                return Err(Error::Domain(format!(
                    "element {x} outside group of order {universe}"
                )));
            }
            bits.insert(x as usize);
        }
        Ok(Self::from_bits(universe, bits))
    }

    pub fn from_bits(universe: u32, bits: FixedBitSet) -> Self {
        debug_assert_eq!(bits.len(), universe as usize);
        let members = bits.ones().map(|i| i as u32).collect();
        Self {
            universe,
            members,
            bits,
        }
    }

    pub fn singleton(universe: u32, x: u32) -> Self {
        Self::from_indices(universe, [x])
    }

    pub fn identity<G: FiniteGroup + ?Sized>(g: &G) -> Self {
        Self::singleton(g.order(), g.identity())
    }

    pub fn universe(&self) -> u32 {
        self.universe
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    #[inline]
    pub fn contains(&self, x: u32) -> bool {
        self.bits.contains(x as usize)
    }

    pub fn members(&self) -> &[u32] {
        &self.members
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.members.iter().copied()
    }

    pub fn is_full(&self) -> bool {
        self.members.len() == self.universe as usize
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Self::from_bits(self.universe, bits)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Self::from_bits(self.universe, bits)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.bits
            .as_slice()
            .iter()
            .zip(other.bits.as_slice())
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Self::from_bits(self.universe, bits)
    }

    pub fn with(&self, x: u32) -> Self {
        let mut bits = self.bits.clone();
        bits.insert(x as usize);
        Self::from_bits(self.universe, bits)
    }

    pub fn without(&self, x: u32) -> Self {
        let mut bits = self.bits.clone();
        bits.set(x as usize, false);
        Self::from_bits(self.universe, bits)
    }

    pub fn inverse<G: FiniteGroup + ?Sized>(&self, g: &G) -> Self {
        Self::from_indices(self.universe, self.iter().map(|x| g.inv(x)))
    }

    pub fn is_symmetric<G: FiniteGroup + ?Sized>(&self, g: &G) -> bool {
        self.iter().all(|x| self.contains(g.inv(x)))
    }

    /// A ∪ A⁻¹.
    pub fn symmetrize<G: FiniteGroup + ?Sized>(&self, g: &G) -> Self {
        self.union(&self.inverse(g))
    }

    /// A ∪ A⁻¹ ∪ {1}.
    pub fn symmetric_with_identity<G: FiniteGroup + ?Sized>(&self, g: &G) -> Self {
        self.symmetrize(g).with(g.identity())
    }

    pub fn contains_identity<G: FiniteGroup + ?Sized>(&self, g: &G) -> bool {
        self.contains(g.identity())
    }

    /// Left translate xA.
    pub fn left_translate<G: FiniteGroup + ?Sized>(&self, g: &G, x: u32) -> Self {
        Self::from_indices(self.universe, self.iter().map(|a| g.mul(x, a)))
    }

    /// Right translate Ax.
    pub fn right_translate<G: FiniteGroup + ?Sized>(&self, g: &G, x: u32) -> Self {
        Self::from_indices(self.universe, self.iter().map(|a| g.mul(a, x)))
    }

    /// Sorted JSON array of element indices.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.members).expect("integer arrays serialize")
    }

    pub fn from_json(universe: u32, s: &str) -> Result<Self> {
        let items: Vec<u32> =
            serde_json::from_str(s).map_err(|e| Error::Parse(format!("subset JSON: {e}")))?;
        Self::try_from_indices(universe, items)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::setcalc::group::CyclicGroup;

    #[test]
    fn dedup_and_order() {
        let s = GroupSubset::from_indices(10, [5, 1, 5, 3]);
        assert_eq!(s.members(), &[1, 3, 5]);
        assert!(s.contains(3) && !s.contains(4));
    }

    #[test]
    fn json_round_trip() {
        let s = GroupSubset::from_indices(10, [9, 0, 4]);
        assert_eq!(s.to_json(), "[0,4,9]");
        assert_eq!(GroupSubset::from_json(10, "[4,9,0]").unwrap(), s);
        assert!(GroupSubset::from_json(10, "[10]").is_err());
        assert!(GroupSubset::from_json(10, "{").is_err());
    }

    #[test]
    fn symmetry_in_cyclic_group() {
        let z = CyclicGroup::new(7).unwrap();
        let a = GroupSubset::from_indices(7, [1, 2]);
        assert!(!a.is_symmetric(&z));
        let s = a.symmetric_with_identity(&z);
        assert_eq!(s.members(), &[0, 1, 2, 5, 6]);
        assert!(s.is_symmetric(&z));
    }
}
