//! Bit-indexed subsets of a small ground set and ordered families of them.
//!
//! Elements are stored 0-based internally; everything that crosses the
//! public boundary as a *label* (JSON, CLI, error messages) is 1-based.

use std::cmp::Ordering;
use std::fmt;

use serde::{de, Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest ground set the crate accepts. The rank table of a matroid has
/// `2^n` entries, so this also bounds memory per matroid (1 MiB).
pub const MAX_N: usize = 20;

/// A subset of `{0, .., n-1}` packed into a machine word.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    #[inline]
    pub const fn from_bits(bits: u32) -> Self {
        Subset(bits)
    }

    #[inline]
    pub const fn bits(self) -> u32 {
        self.0
    }

    #[inline]
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= 32);
        if n == 32 {
            Subset(u32::MAX)
        } else {
            Subset((1u32 << n) - 1)
        }
    }

    #[inline]
    pub fn singleton(e: usize) -> Self {
        Subset(1 << e)
    }

    /// Builds a subset from 1-based labels, checking each against `n`.
    pub fn from_labels(n: usize, labels: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &l in labels {
            if l == 0 || l > n {
                return Err(Error::LabelOutOfRange { label: l, n });
            }
            bits |= 1 << (l - 1);
        }
        Ok(Subset(bits))
    }

    /// Sorted 1-based labels.
    pub fn labels(self) -> Vec<usize> {
        self.iter().map(|e| e + 1).collect()
    }

    #[inline]
    pub fn contains(self, e: usize) -> bool {
        self.0 >> e & 1 == 1
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn with(self, e: usize) -> Self {
        Subset(self.0 | 1 << e)
    }

    #[inline]
    pub fn without(self, e: usize) -> Self {
        Subset(self.0 & !(1 << e))
    }

    #[inline]
    pub fn union(self, o: Subset) -> Self {
        Subset(self.0 | o.0)
    }

    #[inline]
    pub fn intersection(self, o: Subset) -> Self {
        Subset(self.0 & o.0)
    }

    #[inline]
    pub fn difference(self, o: Subset) -> Self {
        Subset(self.0 & !o.0)
    }

    #[inline]
    pub fn is_subset_of(self, o: Subset) -> bool {
        self.0 & !o.0 == 0
    }

    #[inline]
    pub fn intersects(self, o: Subset) -> bool {
        self.0 & o.0 != 0
    }

    #[inline]
    pub fn first(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    #[inline]
    pub fn last(self) -> Option<usize> {
        (self.0 != 0).then(|| 31 - self.0.leading_zeros() as usize)
    }

    /// Elements in increasing order (0-based).
    pub fn iter(self) -> Elements {
        Elements(self.0)
    }

    /// Every subset of `self`, in increasing bit order, `∅` first.
    pub fn subsets(self) -> SubsetsOf {
        SubsetsOf {
            mask: self.0,
            cur: 0,
            done: false,
        }
    }

    /// Compare as sorted element lists (`{1,2} < {1,3} < {2}`).
    pub fn lex_cmp(self, o: Subset) -> Ordering {
        let mut a = self.iter();
        let mut b = o.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Less,
                (Some(_), None) => return Ordering::Greater,
                (Some(x), Some(y)) if x != y => return x.cmp(&y),
                _ => {}
            }
        }
    }

    /// Compare by size, then lexicographically.
    pub fn graded_cmp(self, o: Subset) -> Ordering {
        self.len().cmp(&o.len()).then_with(|| self.lex_cmp(o))
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, l) in self.labels().into_iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as the sorted array of 1-based labels.
impl Serialize for Subset {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter().map(|e| e + 1))
    }
}

impl<'de> Deserialize<'de> for Subset {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let labels = Vec::<usize>::deserialize(d)?;
        let mut bits = 0u32;
        for l in labels {
            if l == 0 || l > 32 {
                return Err(de::Error::custom(format!("element label {l} out of range")));
            }
            bits |= 1 << (l - 1);
        }
        Ok(Subset(bits))
    }
}

/// Serializes a 0-based element as its 1-based label.
pub(crate) fn serialize_label<S: Serializer>(e: &usize, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_u64(*e as u64 + 1)
}

pub struct Elements(u32);

impl Iterator for Elements {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let e = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(e)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let c = self.0.count_ones() as usize;
        (c, Some(c))
    }
}

impl ExactSizeIterator for Elements {}

pub struct SubsetsOf {
    mask: u32,
    cur: u32,
    done: bool,
}

impl Iterator for SubsetsOf {
    type Item = Subset;

    fn next(&mut self) -> Option<Subset> {
        if self.done {
            return None;
        }
        let out = Subset(self.cur);
        if self.cur == self.mask {
            self.done = true;
        } else {
            self.cur = (self.cur.wrapping_sub(self.mask)) & self.mask;
        }
        Some(out)
    }
}

/// All `k`-subsets of `{0, .., n-1}` in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = Subset> {
    let mut idx: Vec<usize> = (0..k).collect();
    let mut done = k > n;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = Subset(idx.iter().fold(0u32, |acc, &i| acc | 1 << i));
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                done = true;
                break;
            }
            i -= 1;
            if idx[i] < n - k + i {
                idx[i] += 1;
                for j in i + 1..k {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    })
}

/// An ordered list of subsets of a common ground set.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SetFamily {
    n: usize,
    members: Vec<Subset>,
}

impl SetFamily {
    pub fn new(n: usize, members: Vec<Subset>) -> Result<Self> {
        let full = Subset::full(n);
        if let Some(bad) = members.iter().find(|m| !m.is_subset_of(full)) {
            return Err(Error::InvalidInput(format!(
                "member {bad} is not contained in a ground set of size {n}"
            )));
        }
        Ok(SetFamily { n, members })
    }

    pub fn from_labels(n: usize, members: &[Vec<usize>]) -> Result<Self> {
        let members = members
            .iter()
            .map(|m| Subset::from_labels(n, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(SetFamily { n, members })
    }

    pub fn empty(n: usize) -> Self {
        SetFamily { n, members: Vec::new() }
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    pub fn members(&self) -> &[Subset] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Subset> {
        self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.contains(&s)
    }

    pub fn union(&self) -> Subset {
        self.members.iter().fold(Subset::EMPTY, |acc, &m| acc.union(m))
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter().copied()
    }

    /// Removes duplicates and orders members by size, then lexicographically.
    pub fn canonical(mut self) -> Self {
        self.members.sort_by(|a, b| a.graded_cmp(*b));
        self.members.dedup();
        self
    }

    /// Removes duplicates and orders members lexicographically.
    pub fn lex_sorted(mut self) -> Self {
        self.members.sort_by(|a, b| a.lex_cmp(*b));
        self.members.dedup();
        self
    }

    pub fn to_labels(&self) -> Vec<Vec<usize>> {
        self.members.iter().map(|m| m.labels()).collect()
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.members.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str("]")
    }
}

/// Binomial coefficient as `u64`; saturates rather than overflowing.
pub fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u64 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        let s = Subset::from_labels(5, &[5, 1, 3]).unwrap();
        assert_eq!(s.labels(), vec![1, 3, 5]);
        assert_eq!(s.to_string(), "{1,3,5}");
        assert!(Subset::from_labels(5, &[6]).is_err());
        assert!(Subset::from_labels(5, &[0]).is_err());
    }

    #[test]
    fn subsets_enumerates_power_set() {
        let s = Subset::from_bits(0b1011);
        let all: Vec<_> = s.subsets().collect();
        assert_eq!(all.len(), 8);
        assert!(all.iter().all(|t| t.is_subset_of(s)));
        assert_eq!(Subset::EMPTY.subsets().count(), 1);
    }

    #[test]
    fn k_subsets_counts() {
        for n in 0..8 {
            for k in 0..=n + 1 {
                let v: Vec<_> = k_subsets(n, k).collect();
                assert_eq!(v.len() as u64, binomial(n as u64, k as u64), "n={n} k={k}");
                assert!(v.iter().all(|s| s.len() == k));
                assert!(v.windows(2).all(|w| w[0].lex_cmp(w[1]) == Ordering::Less));
            }
        }
    }

    #[test]
    fn lex_order() {
        let a = Subset::from_labels(4, &[1, 2]).unwrap();
        let b = Subset::from_labels(4, &[1, 3]).unwrap();
        let c = Subset::from_labels(4, &[2]).unwrap();
        assert_eq!(a.lex_cmp(b), Ordering::Less);
        assert_eq!(b.lex_cmp(c), Ordering::Less);
        assert_eq!(c.graded_cmp(a), Ordering::Less);
    }
}
