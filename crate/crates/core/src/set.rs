//! Finite subsets of the ground set `[n] = {1, …, n}`.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize};

use crate::error::{Error, Result};

/// A strictly increasing list of positive integers.
///
/// Serializes as a JSON array sorted ascending. The ground-set bound `n` is
/// not stored; use [`IntSet::within`] or [`IntSet::check_within`] to
/// validate against a particular `[n]`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct IntSet(Vec<u32>);

impl IntSet {
    pub fn empty() -> Self {
        IntSet(Vec::new())
    }

    /// Sorts and deduplicates `elems`. Zero is rejected since the ground set
    /// starts at 1.
    pub fn new(mut elems: Vec<u32>) -> Result<Self> {
        elems.sort_unstable();
        elems.dedup();
        if elems.first() == Some(&0) {
            return Err(Error::Domain("0 is not an element of [n]".into()));
        }
        Ok(IntSet(elems))
    }

    /// Like [`IntSet::new`] but also requires every element to be at most `n`.
    pub fn within(n: u32, elems: Vec<u32>) -> Result<Self> {
        let set = Self::new(elems)?;
        set.check_within(n)?;
        Ok(set)
    }

    /// `{1, …, n}`.
    pub fn interval(n: u32) -> Self {
        IntSet((1..=n).collect())
    }

    /// Builds from an already sorted, duplicate-free, zero-free list.
    pub(crate) fn from_sorted_unchecked(elems: Vec<u32>) -> Self {
        debug_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(elems.first().is_none_or(|&x| x > 0));
        IntSet(elems)
    }

    pub fn check_within(&self, n: u32) -> Result<()> {
        match self.largest() {
            Some(m) if m > n => Err(Error::Domain(format!("element {m} exceeds n = {n}"))),
            _ => Ok(()),
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = u32> + '_ {
        self.0.iter().copied()
    }

    pub fn into_vec(self) -> Vec<u32> {
        self.0
    }

    pub fn largest(&self) -> Option<u32> {
        self.0.last().copied()
    }

    pub fn contains(&self, x: u32) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &IntSet) -> bool {
        let mut it = other.0.iter().peekable();
        'outer: for &x in &self.0 {
            while let Some(&&y) = it.peek() {
                if y < x {
                    it.next();
                } else if y == x {
                    it.next();
                    continue 'outer;
                } else {
                    return false;
                }
            }
            return false;
        }
        true
    }

    pub fn union(&self, other: &IntSet) -> IntSet {
        let mut out = Vec::with_capacity(self.len() + other.len());
        let (a, b) = (&self.0, &other.0);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        IntSet(out)
    }

    pub fn intersection(&self, other: &IntSet) -> IntSet {
        IntSet(self.0.iter().copied().filter(|&x| other.contains(x)).collect())
    }

    pub fn difference(&self, other: &IntSet) -> IntSet {
        IntSet(self.0.iter().copied().filter(|&x| !other.contains(x)).collect())
    }

    pub fn with(&self, x: u32) -> Result<IntSet> {
        let mut v = self.0.clone();
        v.push(x);
        IntSet::new(v)
    }

    pub fn without(&self, x: u32) -> IntSet {
        IntSet(self.0.iter().copied().filter(|&y| y != x).collect())
    }

    /// The `k` smallest elements (all of them when `k ≥ len`).
    pub fn smallest(&self, k: usize) -> IntSet {
        IntSet(self.0[..k.min(self.len())].to_vec())
    }

    /// Dense membership table of length `n + 1`.
    pub fn indicator(&self, n: u32) -> Vec<bool> {
        let mut mask = vec![false; n as usize + 1];
        for &x in &self.0 {
            if (x as usize) < mask.len() {
                mask[x as usize] = true;
            }
        }
        mask
    }

    /// Subset of `[n]` selected by the low `n` bits of `mask` (bit `i` ↦ `i + 1`).
    pub fn from_mask(mask: u64) -> IntSet {
        let mut v = Vec::with_capacity(mask.count_ones() as usize);
        let mut m = mask;
        while m != 0 {
            let i = m.trailing_zeros();
            v.push(i + 1);
            m &= m - 1;
        }
        IntSet(v)
    }
}

impl<'de> Deserialize<'de> for IntSet {
    fn deserialize<D: Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<u32>::deserialize(de)?;
        IntSet::new(v).map_err(serde::de::Error::custom)
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

impl fmt::Display for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, "}}")
    }
}

impl<'a> IntoIterator for &'a IntSet {
    type Item = u32;
    type IntoIter = std::iter::Copied<std::slice::Iter<'a, u32>>;

    fn into_iter(self) -> Self::IntoIter {
        self.0.iter().copied()
    }
}

/// Builds an [`IntSet`] from literal elements, panicking on invalid input.
#[macro_export]
macro_rules! int_set {
    () => { $crate::IntSet::empty() };
    ($($x:expr),+ $(,)?) => {
        $crate::IntSet::new(vec![$($x),+]).expect("valid set literal")
    };
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalizes_input() {
        let s = IntSet::new(vec![5, 1, 3, 1]).unwrap();
        assert_eq!(s.as_slice(), &[1, 3, 5]);
        assert!(IntSet::new(vec![0, 2]).is_err());
        assert!(IntSet::within(4, vec![1, 5]).is_err());
        assert!(IntSet::within(5, vec![1, 5]).is_ok());
    }

    #[test]
    fn set_algebra() {
        let a = int_set![1, 2, 5, 9];
        let b = int_set![2, 9, 10];
        assert_eq!(a.union(&b), int_set![1, 2, 5, 9, 10]);
        assert_eq!(a.intersection(&b), int_set![2, 9]);
        assert_eq!(a.difference(&b), int_set![1, 5]);
        assert!(int_set![2, 9].is_subset(&a));
        assert!(!b.is_subset(&a));
        assert!(IntSet::empty().is_subset(&a));
        assert_eq!(a.smallest(2), int_set![1, 2]);
    }

    #[test]
    fn json_is_sorted_array() {
        let s = int_set![4, 2];
        assert_eq!(serde_json::to_string(&s).unwrap(), "[2,4]");
        let back: IntSet = serde_json::from_str("[9,3,3]").unwrap();
        assert_eq!(back, int_set![3, 9]);
        assert!(serde_json::from_str::<IntSet>("[0]").is_err());
    }

    #[test]
    fn masks() {
        assert_eq!(IntSet::from_mask(0b1011), int_set![1, 2, 4]);
        assert_eq!(IntSet::from_mask(0), IntSet::empty());
    }
}
