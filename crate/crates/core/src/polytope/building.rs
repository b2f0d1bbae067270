//! Building sets: families containing every singleton and closed under
//! unions of intersecting members.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::subset::{SetFamily, Subset, MAX_N};

/// A family of subsets of `{1..n}` stored as one bit per subset.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FamilyBits {
    n: usize,
    words: Vec<u64>,
}

impl FamilyBits {
    pub fn new(n: usize) -> Self {
        let words = (1usize << n).div_ceil(64);
        FamilyBits {
            n,
            words: vec![0; words],
        }
    }

    pub fn from_members(n: usize, members: impl IntoIterator<Item = Subset>) -> Self {
        let mut f = FamilyBits::new(n);
        for s in members {
            f.insert(s);
        }
        f
    }

    pub fn ground_size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn contains(&self, s: Subset) -> bool {
        let i = s.bits() as usize;
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    /// Returns whether `s` was new.
    #[inline]
    pub fn insert(&mut self, s: Subset) -> bool {
        let i = s.bits() as usize;
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.words[w] & b == 0;
        self.words[w] |= b;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, s: Subset) {
        let i = s.bits() as usize;
        self.words[i / 64] &= !(1u64 << (i % 64));
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Members in increasing bit order.
    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let b = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(Subset::from_bits((wi * 64 + b) as u32))
            })
        })
    }

    pub fn is_subfamily_of(&self, o: &FamilyBits) -> bool {
        self.words.iter().zip(&o.words).all(|(a, b)| a & !b == 0)
    }

    pub fn to_family(&self) -> SetFamily {
        SetFamily::new(self.n, self.iter().collect())
            .expect("members lie in the ground set")
            .canonical()
    }
}

impl fmt::Debug for FamilyBits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_family())
    }
}

/// A family closed under unions of intersecting members that contains all
/// singletons.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BuildingSet {
    members: FamilyBits,
}

impl BuildingSet {
    /// The least building set containing `family` (members must be
    /// nonempty).
    pub fn closure_of(family: &SetFamily) -> Result<BuildingSet> {
        let n = family.ground_size();
        if n > MAX_N {
            return Err(Error::Scope(format!("n = {n} exceeds {MAX_N}")));
        }
        if family.iter().any(|s| s.is_empty()) {
            return Err(Error::InvalidInput("building closure needs nonempty members".into()));
        }
        let mut b = BuildingSet::singletons(n);
        for s in family.iter() {
            b.insert(s);
        }
        Ok(b)
    }

    /// Just the singletons.
    pub fn singletons(n: usize) -> BuildingSet {
        BuildingSet {
            members: FamilyBits::from_members(n, (0..n).map(Subset::singleton)),
        }
    }

    /// Adds `s` and closes again. Only unions involving new members need
    /// to be formed, since the old members were already closed.
    pub fn insert(&mut self, s: Subset) {
        if s.is_empty() || !self.members.insert(s) {
            return;
        }
        let mut queue = vec![s];
        while let Some(x) = queue.pop() {
            let partners: Vec<Subset> = self.members.iter().filter(|t| t.intersects(x)).collect();
            for t in partners {
                let u = t.union(x);
                if self.members.insert(u) {
                    queue.push(u);
                }
            }
        }
    }

    pub fn ground_size(&self) -> usize {
        self.members.n
    }

    pub fn contains(&self, s: Subset) -> bool {
        self.members.contains(s)
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn bits(&self) -> &FamilyBits {
        &self.members
    }

    pub fn members(&self) -> SetFamily {
        self.members.to_family()
    }

    pub fn iter(&self) -> impl Iterator<Item = Subset> + '_ {
        self.members.iter()
    }
}

impl fmt::Debug for BuildingSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BuildingSet{}", self.members.to_family())
    }
}

impl Serialize for BuildingSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.members.to_family().members().serialize(s)
    }
}

pub fn building_closure(family: &SetFamily) -> Result<BuildingSet> {
    BuildingSet::closure_of(family)
}

/// Contains every singleton and the union of any two intersecting members.
pub fn is_building_set(f: &FamilyBits) -> bool {
    if f.contains(Subset::EMPTY) {
        return false;
    }
    if !(0..f.n).all(|e| f.contains(Subset::singleton(e))) {
        return false;
    }
    let members: Vec<Subset> = f.iter().collect();
    members.iter().enumerate().all(|(i, &a)| {
        members[i + 1..]
            .iter()
            .all(|&b| !a.intersects(b) || f.contains(a.union(b)))
    })
}

/// Members of a building set whose removal still leaves a building set.
pub fn removable_members(b: &BuildingSet) -> Vec<Subset> {
    let mut f = b.members.clone();
    b.iter()
        .filter(|&x| {
            f.remove(x);
            let ok = is_building_set(&f);
            f.insert(x);
            ok
        })
        .collect()
}
