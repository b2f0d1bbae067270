//! Finite matroids stored by their list of bases.
//!
//! Every matroid carries a rank table with one entry per subset of the
//! ground set, filled once at construction. Rank and closure are then table
//! lookups, which keeps the exhaustive searches elsewhere in the crate cheap.

use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::subset::{k_subsets, SetFamily, Subset, MAX_N};

/// Ground sets up to this size get the basis-exchange check on every
/// construction from user-supplied bases.
pub const EXCHANGE_CHECK_MAX_N: usize = 12;

/// How much checking [`Matroid::from_bases_with`] performs.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Validation {
    /// Basis exchange for `n <= 12`, structural checks only above.
    Auto,
    /// Basis exchange regardless of size.
    Full,
    /// Structural checks only (equal cardinalities, labels in range).
    Structural,
}

#[derive(Clone)]
pub struct Matroid {
    n: usize,
    rank: usize,
    bases: Vec<Subset>,
    rank_table: Arc<Vec<u8>>,
}

/// A matroid obtained from another one on a subset of its elements, along
/// with the original 1-based label of each new element.
#[derive(Clone, Debug)]
pub struct Minor {
    pub matroid: Matroid,
    pub labels: Vec<usize>,
}

impl PartialEq for Matroid {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.bases == other.bases
    }
}

impl Eq for Matroid {}

impl fmt::Debug for Matroid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Matroid")
            .field("n", &self.n)
            .field("rank", &self.rank)
            .field("bases", &self.bases.len())
            .finish()
    }
}

impl Matroid {
    pub fn from_bases(n: usize, bases: Vec<Subset>) -> Result<Self> {
        Self::from_bases_with(n, bases, Validation::Auto)
    }

    pub fn from_bases_with(n: usize, mut bases: Vec<Subset>, validation: Validation) -> Result<Self> {
        if n > MAX_N {
            return Err(Error::Scope(format!(
                "ground set of size {n} exceeds the supported maximum {MAX_N}"
            )));
        }
        let full = Subset::full(n);
        if bases.is_empty() {
            return Err(Error::InvalidMatroid("a matroid needs at least one basis".into()));
        }
        if let Some(b) = bases.iter().find(|b| !b.is_subset_of(full)) {
            return Err(Error::InvalidMatroid(format!(
                "basis {b} is not contained in the ground set 1..={n}"
            )));
        }
        let r = bases[0].len();
        if let Some(b) = bases.iter().find(|b| b.len() != r) {
            return Err(Error::InvalidMatroid(format!(
                "bases have different sizes ({} and {})",
                r,
                b.len()
            )));
        }
        bases.sort_unstable();
        bases.dedup();
        let m = Self::from_sorted_bases(n, bases);
        let exchange = match validation {
            Validation::Full => true,
            Validation::Auto => n <= EXCHANGE_CHECK_MAX_N,
            Validation::Structural => false,
        };
        if exchange {
            if let Some((b1, b2, x)) = m.exchange_violation() {
                return Err(Error::InvalidMatroid(format!(
                    "basis exchange fails: removing {} from {b1} admits no replacement from {b2}",
                    x + 1
                )));
            }
        }
        Ok(m)
    }

    /// Callers guarantee the bases are sorted, deduplicated, equicardinal,
    /// and satisfy basis exchange.
    pub(crate) fn from_sorted_bases(n: usize, bases: Vec<Subset>) -> Self {
        debug_assert!(!bases.is_empty());
        let rank = bases[0].len();
        let rank_table = Arc::new(build_rank_table(n, &bases));
        Matroid {
            n,
            rank,
            bases,
            rank_table,
        }
    }

    pub(crate) fn from_unsorted_bases(n: usize, mut bases: Vec<Subset>) -> Self {
        bases.sort_unstable();
        bases.dedup();
        Self::from_sorted_bases(n, bases)
    }

    /// `U_{r,n}`: every `r`-subset is a basis.
    pub fn uniform(r: usize, n: usize) -> Result<Self> {
        if r > n {
            return Err(Error::InvalidInput(format!(
                "uniform matroid needs r <= n (got r={r}, n={n})"
            )));
        }
        if n > MAX_N {
            return Err(Error::Scope(format!("n={n} exceeds {MAX_N}")));
        }
        Ok(Self::from_unsorted_bases(n, k_subsets(n, r).collect()))
    }

    /// The paving matroid of rank `m + 1` whose hyperplanes are `blocks`.
    ///
    /// `blocks` must be an `m`-partition of `{1..n}`: every block has at
    /// least `m` elements and every `m`-subset lies in exactly one block.
    pub fn from_m_partition(n: usize, blocks: &SetFamily, m: usize) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidInput("m-partition needs m >= 1".into()));
        }
        if n <= m {
            return Err(Error::InvalidInput(format!(
                "m-partition needs n > m (got n={n}, m={m})"
            )));
        }
        if n > MAX_N {
            return Err(Error::Scope(format!("n={n} exceeds {MAX_N}")));
        }
        if blocks.ground_size() != n {
            return Err(Error::InvalidInput(format!(
                "block family lives on {} elements, expected {n}",
                blocks.ground_size()
            )));
        }
        if let Some(b) = blocks.iter().find(|b| b.len() < m) {
            return Err(Error::InvalidInput(format!("block {b} has fewer than {m} elements")));
        }
        for s in k_subsets(n, m) {
            let count = blocks.iter().filter(|b| s.is_subset_of(*b)).count();
            if count != 1 {
                return Err(Error::InvalidPartition {
                    m,
                    subset: s.labels(),
                    count,
                });
            }
        }
        let bases: Vec<Subset> = k_subsets(n, m + 1)
            .filter(|s| !blocks.iter().any(|b| s.is_subset_of(b)))
            .collect();
        if bases.is_empty() {
            return Err(Error::InvalidInput(
                "every (m+1)-subset lies in a block; the blocks do not define a rank-(m+1) matroid".into(),
            ));
        }
        Ok(Self::from_unsorted_bases(n, bases))
    }

    pub fn dual(&self) -> Matroid {
        let full = Subset::full(self.n);
        Self::from_unsorted_bases(self.n, self.bases.iter().map(|b| full.difference(*b)).collect())
    }

    /// `M | S`, relabeled onto `1..|S|` in increasing order of `S`.
    pub fn restriction(&self, s: Subset) -> Result<Minor> {
        self.check_subset(s)?;
        let rk = self.rank_of(s);
        let bases = self
            .bases
            .iter()
            .map(|b| b.intersection(s))
            .filter(|b| b.len() == rk)
            .collect();
        Ok(self.relabeled_minor(s, bases))
    }

    /// `M / S` on `E \ S`, relabeled in increasing order.
    pub fn contraction(&self, s: Subset) -> Result<Minor> {
        self.check_subset(s)?;
        let rk = self.rank_of(s);
        let rest = self.ground().difference(s);
        let bases = self
            .bases
            .iter()
            .filter(|b| b.intersection(s).len() == rk)
            .map(|b| b.intersection(rest))
            .collect();
        Ok(self.relabeled_minor(rest, bases))
    }

    /// The interval minor `M[F, G]` on `G \ F`: restrictions to `G \ F` of
    /// the bases meeting `F` and `G` in full rank.
    pub fn minor_interval(&self, f: Subset, g: Subset) -> Result<Minor> {
        self.check_subset(f)?;
        self.check_subset(g)?;
        if !self.is_flat(f) {
            return Err(Error::InvalidInput(format!("{f} is not a flat")));
        }
        if !self.is_flat(g) {
            return Err(Error::InvalidInput(format!("{g} is not a flat")));
        }
        if !f.is_subset_of(g) {
            return Err(Error::InvalidInput(format!("{f} is not contained in {g}")));
        }
        let (rf, rg) = (self.rank_of(f), self.rank_of(g));
        let part = g.difference(f);
        let bases = self
            .bases
            .iter()
            .filter(|b| b.intersection(f).len() == rf && b.intersection(g).len() == rg)
            .map(|b| b.intersection(part))
            .collect();
        Ok(self.relabeled_minor(part, bases))
    }

    fn relabeled_minor(&self, part: Subset, bases: Vec<Subset>) -> Minor {
        let elems: Vec<usize> = part.iter().collect();
        let mut pos = [usize::MAX; 32];
        for (i, &e) in elems.iter().enumerate() {
            pos[e] = i;
        }
        let bases = bases
            .into_iter()
            .map(|b| Subset::from_bits(b.iter().fold(0u32, |acc, e| acc | 1 << pos[e])))
            .collect();
        Minor {
            matroid: Self::from_unsorted_bases(elems.len(), bases),
            labels: elems.iter().map(|e| e + 1).collect(),
        }
    }

    /// Disjoint union; part `i` occupies the labels right after part `i-1`.
    pub fn direct_sum(parts: &[Matroid]) -> Result<Matroid> {
        let total: usize = parts.iter().map(|p| p.n).sum();
        if total > MAX_N {
            return Err(Error::Scope(format!(
                "direct sum has {total} elements, more than the supported {MAX_N}"
            )));
        }
        let mut bases = vec![Subset::EMPTY];
        let mut offset = 0;
        for p in parts {
            let mut next = Vec::with_capacity(bases.len() * p.bases.len());
            for acc in &bases {
                for b in &p.bases {
                    next.push(acc.union(Subset::from_bits(b.bits() << offset)));
                }
            }
            bases = next;
            offset += p.n;
        }
        Ok(Self::from_unsorted_bases(total, bases))
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn bases(&self) -> &[Subset] {
        &self.bases
    }

    #[inline]
    pub fn ground(&self) -> Subset {
        Subset::full(self.n)
    }

    pub fn check_subset(&self, s: Subset) -> Result<()> {
        if s.is_subset_of(self.ground()) {
            Ok(())
        } else {
            let label = s.difference(self.ground()).first().map_or(0, |e| e + 1);
            Err(Error::LabelOutOfRange { label, n: self.n })
        }
    }

    /// Rank of a subset; `s` must lie in the ground set.
    #[inline]
    pub fn rank_of(&self, s: Subset) -> usize {
        self.rank_table[s.bits() as usize] as usize
    }

    /// Rank of a set given by 1-based labels.
    pub fn rank_of_labels(&self, labels: &[usize]) -> Result<usize> {
        Ok(self.rank_of(Subset::from_labels(self.n, labels)?))
    }

    #[inline]
    pub fn is_independent(&self, s: Subset) -> bool {
        self.rank_of(s) == s.len()
    }

    pub fn is_basis(&self, s: Subset) -> bool {
        self.bases.binary_search(&s).is_ok()
    }

    pub fn closure(&self, s: Subset) -> Subset {
        let rk = self.rank_of(s);
        self.ground()
            .difference(s)
            .iter()
            .filter(|&e| self.rank_of(s.with(e)) == rk)
            .fold(s, |acc, e| acc.with(e))
    }

    pub fn is_flat(&self, s: Subset) -> bool {
        let rk = self.rank_of(s);
        self.ground().difference(s).iter().all(|e| self.rank_of(s.with(e)) > rk)
    }

    /// All flats, ordered by size and then lexicographically.
    pub fn flats(&self) -> SetFamily {
        let members = (0..1u32 << self.n)
            .map(Subset::from_bits)
            .filter(|&s| self.is_flat(s))
            .collect();
        SetFamily::new(self.n, members)
            .expect("flats lie in the ground set")
            .canonical()
    }

    pub fn flats_of_rank(&self, k: usize) -> SetFamily {
        let members = self
            .flats()
            .into_members()
            .into_iter()
            .filter(|&f| self.rank_of(f) == k)
            .collect();
        SetFamily::new(self.n, members).expect("flats lie in the ground set")
    }

    /// Flats of rank `r - 1`.
    pub fn hyperplanes(&self) -> SetFamily {
        if self.rank == 0 {
            return SetFamily::empty(self.n);
        }
        self.flats_of_rank(self.rank - 1)
    }

    /// Minimal dependent sets, ordered by size and then lexicographically.
    pub fn circuits(&self) -> SetFamily {
        let members = (0..1u32 << self.n)
            .map(Subset::from_bits)
            .filter(|&s| !self.is_independent(s) && s.iter().all(|e| self.is_independent(s.without(e))))
            .collect();
        SetFamily::new(self.n, members)
            .expect("circuits lie in the ground set")
            .canonical()
    }

    pub fn loops(&self) -> Subset {
        self.closure(Subset::EMPTY)
    }

    /// No circuit is smaller than the rank, i.e. every set of size `r - 1`
    /// is independent.
    pub fn is_paving(&self) -> bool {
        if self.rank == 0 {
            return true;
        }
        k_subsets(self.n, self.rank - 1).all(|s| self.is_independent(s))
    }

    /// Every flat of rank one is a single element.
    pub fn is_simple_rank1(&self) -> bool {
        self.ground()
            .iter()
            .all(|e| self.rank_of(Subset::singleton(e)) == 0 || self.closure(Subset::singleton(e)).len() == 1)
    }

    /// A proper nonempty `S` with `rank(S) + rank(E \ S) = rank(E)`, if any.
    pub fn separator(&self) -> Option<Subset> {
        if self.n <= 1 {
            return None;
        }
        let full = self.ground();
        // Fix element 0 in S; the complement covers the other half.
        (0..1u32 << (self.n - 1))
            .map(|bits| Subset::from_bits(bits << 1 | 1))
            .filter(|&s| s != full)
            .find(|&s| self.rank_of(s) + self.rank_of(full.difference(s)) == self.rank)
    }

    /// Connected: no proper nonempty separator. The empty matroid is not
    /// considered connected.
    pub fn is_connected(&self) -> bool {
        self.n >= 1 && self.separator().is_none()
    }

    /// Connectivity of the dual matroid.
    pub fn is_coconnected(&self) -> bool {
        self.dual().is_connected()
    }

    /// Brute-force basis-exchange check; returns a violating `(B1, B2, x)`.
    pub fn exchange_violation(&self) -> Option<(Subset, Subset, usize)> {
        for &b1 in &self.bases {
            for &b2 in &self.bases {
                if b1 == b2 {
                    continue;
                }
                for x in b1.difference(b2).iter() {
                    let base = b1.without(x);
                    let ok = b2.difference(b1).iter().any(|y| self.is_basis(base.with(y)));
                    if !ok {
                        return Some((b1, b2, x));
                    }
                }
            }
        }
        None
    }
}

fn build_rank_table(n: usize, bases: &[Subset]) -> Vec<u8> {
    let size = 1usize << n;
    let mut indep = vec![false; size];
    for b in bases {
        indep[b.bits() as usize] = true;
    }
    for s in (0..size).rev() {
        if indep[s] {
            let mut rest = s;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                indep[s & !low] = true;
                rest &= rest - 1;
            }
        }
    }
    let mut rank = vec![0u8; size];
    for s in 1..size {
        if indep[s] {
            rank[s] = s.count_ones() as u8;
        } else {
            let mut best = 0u8;
            let mut rest = s;
            while rest != 0 {
                let low = rest & rest.wrapping_neg();
                best = best.max(rank[s & !low]);
                rest &= rest - 1;
            }
            rank[s] = best;
        }
    }
    rank
}
