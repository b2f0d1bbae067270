//! Paving matroids built from block partitions, used as positive and
//! negative instances for the covering checks.

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::mcb::Witness;
use crate::subset::{k_subsets, SetFamily, Subset, MAX_N};

/// Parameters of the block paving matroid: `n / B` blocks of size `B` plus
/// every `m`-subset that meets two blocks, as hyperplanes of rank `m + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct NobdParams {
    pub n: usize,
    #[serde(rename = "B")]
    pub b: usize,
    pub m: usize,
}

impl NobdParams {
    pub fn new(n: usize, b: usize, m: usize) -> Result<Self> {
        let p = NobdParams { n, b, m };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        let NobdParams { n, b, m } = *self;
        if m == 0 {
            return Err(Error::Parameter("m >= 1 violated".into()));
        }
        if !b.is_multiple_of(2) {
            return Err(Error::Parameter(format!("B even violated (B = {b})")));
        }
        if b < 2 * m + 2 {
            return Err(Error::Parameter(format!("B >= 2m + 2 violated ({b} < {})", 2 * m + 2)));
        }
        check_blocks(n, b)
    }

    /// `n/B + B/m - 3`, exact.
    pub fn a_max(&self) -> Ratio<i64> {
        Ratio::new(self.n as i64, self.b as i64) + Ratio::new(self.b as i64, self.m as i64) - 3
    }

    /// Largest integer degree covered by [`Self::a_max`] (0 if negative).
    pub fn a_max_floor(&self) -> usize {
        self.a_max().floor().to_integer().max(0) as usize
    }

    pub fn block_count(&self) -> usize {
        self.n / self.b
    }
}

fn check_blocks(n: usize, b: usize) -> Result<()> {
    if b == 0 || !n.is_multiple_of(b) {
        return Err(Error::Parameter(format!("B | n violated (n = {n}, B = {b})")));
    }
    if n / b >= b {
        return Err(Error::Parameter(format!("n/B < B violated ({} >= {b})", n / b)));
    }
    if n / b < 2 {
        return Err(Error::Parameter(format!(
            "n/B >= 2 violated: a single block would be the whole ground set (n = {n}, B = {b})"
        )));
    }
    if n > MAX_N {
        return Err(Error::Scope(format!("n = {n} exceeds {MAX_N}")));
    }
    Ok(())
}

/// The consecutive blocks `{1..B}, {B+1..2B}, ..`.
pub fn blocks(n: usize, b: usize) -> Vec<Subset> {
    (0..n / b)
        .map(|i| Subset::from_bits(Subset::full(b).bits() << (i * b)))
        .collect()
}

/// Blocks followed by the `m`-subsets meeting at least two blocks
/// (lexicographic order).
pub fn block_hyperplanes(n: usize, b: usize, m: usize) -> SetFamily {
    let blks = blocks(n, b);
    let mut members = blks.clone();
    members.extend(k_subsets(n, m).filter(|s| !blks.iter().any(|bl| s.is_subset_of(*bl))));
    SetFamily::new(n, members).expect("blocks lie in the ground set")
}

pub fn nobd_paving(p: &NobdParams) -> Result<Matroid> {
    p.validate()?;
    Matroid::from_m_partition(p.n, &block_hyperplanes(p.n, p.b, p.m), p.m)
}

/// Rank-3 block paving matroid: blocks of size `B` and all cross pairs.
/// Requires `B` even, `B >= 4`, `B | n` and `n/B < B`.
pub fn pavexmp_paving(n: usize, b: usize) -> Result<Matroid> {
    if !b.is_multiple_of(2) {
        return Err(Error::Parameter(format!("B even violated (B = {b})")));
    }
    if b < 4 {
        return Err(Error::Parameter(format!("B >= 4 violated (B = {b})")));
    }
    check_blocks(n, b)?;
    Matroid::from_m_partition(n, &block_hyperplanes(n, b, 2), 2)
}

/// Number of 2-subsets meeting two blocks: `C(n,2) - (n/B) C(B,2)`.
pub fn cross_pair_count(n: usize, b: usize) -> usize {
    n * (n - 1) / 2 - (n / b) * (b * (b - 1) / 2)
}

/// Smallest integer `d` with `(n-1)/a < d < (m-1)a`, if there is one.
pub fn mcbdimnobd_gap(n: usize, a: usize, m: usize) -> Option<usize> {
    if a == 0 || n == 0 {
        return None;
    }
    let d = (n - 1) / a + 1;
    (m >= 1 && d < (m - 1) * a).then_some(d)
}

/// Paving matroid induced on the complement of a hyperplane.
#[derive(Clone, Debug)]
pub struct RestrictedPaving {
    pub matroid: Matroid,
    /// Original 1-based label of each new element.
    pub labels: Vec<usize>,
    /// Hyperplane traces kept as blocks (new labels).
    pub traces: Vec<Subset>,
    /// `m`-subsets added as their own blocks because no trace held them.
    pub padded: Vec<Subset>,
}

/// The paving matroid `R` on `C = E \ A` of rank `m + 1` whose hyperplanes
/// are the traces `H ∩ C` with `m <= |H ∩ C| < |C|`, completed to an
/// `m`-partition by adding each uncovered `m`-subset as a block.
pub fn restrict_complement(m_: &Matroid, a: Subset) -> Result<RestrictedPaving> {
    m_.check_subset(a)?;
    let r = m_.rank();
    if r < 2 || !m_.is_paving() {
        return Err(Error::InvalidInput(
            "expected a paving matroid of rank at least 2".into(),
        ));
    }
    let m = r - 1;
    let hyperplanes = m_.hyperplanes();
    if !hyperplanes.contains(a) {
        return Err(Error::InvalidInput(format!("{a} is not a hyperplane")));
    }
    let rest = m_.ground().difference(a);
    if rest.len() <= m {
        return Err(Error::InvalidInput(format!(
            "complement of the hyperplane has {} elements; need at least m + 1 = {}",
            rest.len(),
            m + 1
        )));
    }
    let elems: Vec<usize> = rest.iter().collect();
    let relabel = |s: Subset| {
        Subset::from_bits(
            elems
                .iter()
                .enumerate()
                .filter(|&(_, &e)| s.contains(e))
                .fold(0u32, |acc, (i, _)| acc | 1 << i),
        )
    };
    let k = elems.len();
    let mut traces: Vec<Subset> = hyperplanes
        .iter()
        .map(|h| relabel(h.intersection(rest)))
        .filter(|t| t.len() >= m && *t != Subset::full(k))
        .collect();
    traces.sort_by(|x, y| x.lex_cmp(*y));
    traces.dedup();
    let padded: Vec<Subset> = k_subsets(k, m)
        .filter(|s| !traces.iter().any(|t| s.is_subset_of(*t)))
        .collect();
    let mut all = traces.clone();
    all.extend(padded.iter().copied());
    let matroid = Matroid::from_m_partition(k, &SetFamily::new(k, all)?, m)?;
    Ok(RestrictedPaving {
        matroid,
        labels: elems.iter().map(|e| e + 1).collect(),
        traces,
        padded,
    })
}

/// Parameters of the negative paving construction. `type2` partitions
/// `E \ A` into blocks avoiding `A`; `None` means the single block `E \ A`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NegPavingParams {
    pub n: usize,
    pub a: Subset,
    pub m: usize,
    pub type2: Option<Vec<Subset>>,
}

#[derive(Clone, Debug)]
pub struct NegPaving {
    pub matroid: Matroid,
    /// `|C| + 1`.
    pub witness_size: usize,
    /// `A` followed by the members of `C`, the `m`-subsets of `E \ A`
    /// minus its largest element.
    pub witness: Witness,
    pub type2: Vec<Subset>,
    pub type3_count: usize,
}

pub fn neg_paving(p: &NegPavingParams) -> Result<NegPaving> {
    let NegPavingParams { n, a, m, .. } = *p;
    if m < 3 {
        return Err(Error::Parameter(format!("m >= 3 violated (m = {m})")));
    }
    if n > MAX_N {
        return Err(Error::Scope(format!("n = {n} exceeds {MAX_N}")));
    }
    let full = Subset::full(n);
    if !a.is_subset_of(full) {
        return Err(Error::Parameter(format!("A = {a} is not inside 1..={n}")));
    }
    if a.len() < m {
        return Err(Error::Parameter(format!("|A| >= m violated ({} < {m})", a.len())));
    }
    let rest = full.difference(a);
    if rest.len() < m + 1 {
        return Err(Error::Parameter(format!(
            "|E \\ A| >= m + 1 violated ({} < {})",
            rest.len(),
            m + 1
        )));
    }
    let type2 = match &p.type2 {
        None => vec![rest],
        Some(t) => {
            if let Some(bad) = t.iter().find(|b| !b.is_subset_of(rest) || b.len() < m) {
                return Err(Error::Parameter(format!(
                    "Type-2 block {bad} must avoid A and have at least {m} elements"
                )));
            }
            t.clone()
        }
    };
    for s in k_subsets(n, m).filter(|s| s.is_subset_of(rest)) {
        let count = type2.iter().filter(|b| s.is_subset_of(**b)).count();
        if count != 1 {
            return Err(Error::InvalidPartition {
                m,
                subset: s.labels(),
                count,
            });
        }
    }
    let mut hyperplanes = vec![a];
    hyperplanes.extend(type2.iter().copied());
    let type3: Vec<Subset> = k_subsets(n, m)
        .filter(|s| s.intersects(a) && s.intersects(rest))
        .collect();
    let type3_count = type3.len();
    hyperplanes.extend(type3);
    let matroid = Matroid::from_m_partition(n, &SetFamily::new(n, hyperplanes)?, m)?;

    let p_out = rest.last().expect("E \\ A is nonempty");
    let sub = rest.without(p_out);
    let sub_elems: Vec<usize> = sub.iter().collect();
    let mut flats = vec![a];
    flats.extend(
        k_subsets(sub_elems.len(), m).map(|s| Subset::from_bits(s.iter().fold(0u32, |acc, i| acc | 1 << sub_elems[i]))),
    );
    let witness_size = flats.len();
    Ok(NegPaving {
        matroid,
        witness_size,
        witness: Witness { flats, omitted: p_out },
        type2,
        type3_count,
    })
}
