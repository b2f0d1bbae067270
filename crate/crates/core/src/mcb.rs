//! Decision procedures for the matroidal Cayley–Bacharach property.
//!
//! `MCB(a)` asks that no union of `a` flats (repeats allowed) equals the
//! ground set minus a single point. The set-theoretic variant `sMCB(a)`
//! replaces flats by the members of an arbitrary family of proper subsets.
//!
//! Both reduce to the same search. A violation missing `p` is a cover of
//! `E \ p` by at most `a` members avoiding `p` (pad with repeats to reach
//! exactly `a`), and any member avoiding `p` may be swapped for a maximal one
//! avoiding `p` without leaving `E \ p`. So for each `p` we run a bounded
//! set-cover search over the inclusion-maximal members avoiding `p`,
//! branching on the lowest uncovered element.
//!
//! Points are tried from the largest label down; inside one point the
//! candidates are visited in lexicographic order. The first cover found is
//! the reported witness, sorted lexicographically and padded by repeating
//! its last member. The per-point searches run in parallel, but each is
//! deterministic and the witness is picked afterwards, so the output does
//! not depend on the thread schedule.

use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::subset::{SetFamily, Subset};

/// Default cap on search nodes.
pub const DEFAULT_BUDGET: u64 = 1_000_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchOptions {
    /// Exclude the improper flat `E`. It can never take part in a violation,
    /// so the verdict does not depend on this flag.
    pub proper_only: bool,
    pub budget: u64,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            proper_only: true,
            budget: DEFAULT_BUDGET,
        }
    }
}

/// `a` members (repeats allowed) whose union is `E \ {omitted}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub flats: Vec<Subset>,
    /// 0-based element left out.
    #[serde(serialize_with = "crate::subset::serialize_label")]
    pub omitted: usize,
}

impl Witness {
    pub fn omitted_label(&self) -> usize {
        self.omitted + 1
    }

    pub fn union(&self) -> Subset {
        self.flats.iter().fold(Subset::EMPTY, |acc, f| acc.union(*f))
    }

    /// The union is exactly `E \ p` and there are `a` members.
    pub fn is_valid_for(&self, n: usize, a: usize) -> bool {
        self.flats.len() == a && self.omitted < n && self.union() == Subset::full(n).without(self.omitted)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    /// Members of the family the search ranged over.
    pub candidates: usize,
    /// Search nodes visited, summed over all points.
    pub nodes: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct McbVerdict {
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub stats: SearchStats,
}

impl McbVerdict {
    fn from_witness(witness: Option<Witness>, stats: SearchStats) -> Self {
        McbVerdict {
            holds: witness.is_none(),
            witness,
            stats,
        }
    }
}

/// Decides `MCB(a)` for `m`.
pub fn check_mcb(m: &Matroid, a: usize) -> Result<McbVerdict> {
    check_mcb_with(m, a, SearchOptions::default())
}

pub fn check_mcb_with(m: &Matroid, a: usize, opts: SearchOptions) -> Result<McbVerdict> {
    if a == 0 {
        return Err(Error::InvalidInput("degree a must be at least 1".into()));
    }
    let family = flat_family(m, opts.proper_only);
    let (witness, nodes) = cover_search(m.n(), family.members(), a, opts.budget)?;
    Ok(McbVerdict::from_witness(
        witness,
        SearchStats {
            candidates: family.len(),
            nodes,
        },
    ))
}

/// Decides `sMCB(a)` for a family of proper subsets of `{1..n}`.
pub fn check_smcb(n: usize, family: &SetFamily, a: usize) -> Result<McbVerdict> {
    check_smcb_with(n, family, a, DEFAULT_BUDGET)
}

pub fn check_smcb_with(n: usize, family: &SetFamily, a: usize, budget: u64) -> Result<McbVerdict> {
    if a == 0 {
        return Err(Error::InvalidInput("degree a must be at least 1".into()));
    }
    let full = Subset::full(n);
    if let Some(bad) = family.iter().find(|f| !f.is_subset_of(full) || *f == full) {
        return Err(Error::InvalidInput(format!(
            "family member {bad} is not a proper subset of the {n}-element ground set"
        )));
    }
    let (witness, nodes) = cover_search(n, family.members(), a, budget)?;
    Ok(McbVerdict::from_witness(
        witness,
        SearchStats {
            candidates: family.len(),
            nodes,
        },
    ))
}

fn flat_family(m: &Matroid, proper_only: bool) -> SetFamily {
    let flats = m.flats();
    if !proper_only {
        return flats;
    }
    let full = m.ground();
    let members = flats.into_members().into_iter().filter(|&f| f != full).collect();
    SetFamily::new(m.n(), members).expect("flats lie in the ground set")
}

struct Budget {
    used: AtomicU64,
    limit: u64,
}

impl Budget {
    fn spend(&self, k: u64) -> Result<()> {
        let used = self.used.fetch_add(k, AtomicOrdering::Relaxed) + k;
        if used > self.limit {
            Err(Error::BudgetExceeded {
                explored: used,
                limit: self.limit,
            })
        } else {
            Ok(())
        }
    }
}

/// Core search shared by `MCB` and `sMCB`. Returns the witness (if any) and
/// the number of nodes visited.
pub(crate) fn cover_search(n: usize, members: &[Subset], a: usize, limit: u64) -> Result<(Option<Witness>, u64)> {
    let budget = Budget {
        used: AtomicU64::new(0),
        limit,
    };
    let per_point: Vec<Result<(Option<Vec<Subset>>, u64)>> = (0..n)
        .rev()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|p| search_point(n, members, a, p, &budget))
        .collect();
    let mut nodes = 0;
    let mut witness = None;
    for (p, res) in (0..n).rev().zip(per_point) {
        let (found, k) = res?;
        nodes += k;
        if witness.is_none() {
            if let Some(mut flats) = found {
                flats.sort_by(|x, y| x.lex_cmp(*y));
                let last = *flats.last().expect("covers are nonempty");
                flats.resize(a, last);
                witness = Some(Witness { flats, omitted: p });
            }
        }
    }
    Ok((witness, nodes))
}

/// Inclusion-maximal members avoiding `p`, deduplicated, in lexicographic
/// order.
fn maximal_avoiding(members: &[Subset], p: usize) -> Vec<Subset> {
    let mut avoid: Vec<Subset> = members.iter().copied().filter(|f| !f.contains(p)).collect();
    avoid.sort_unstable();
    avoid.dedup();
    let mut out: Vec<Subset> = avoid
        .iter()
        .copied()
        .filter(|&f| !avoid.iter().any(|&g| g != f && f.is_subset_of(g)))
        .collect();
    out.sort_by(|x, y| x.lex_cmp(*y));
    out
}

fn search_point(
    n: usize,
    members: &[Subset],
    a: usize,
    p: usize,
    budget: &Budget,
) -> Result<(Option<Vec<Subset>>, u64)> {
    let cands = maximal_avoiding(members, p);
    let target = Subset::full(n).without(p);
    if cands.is_empty() {
        return Ok((None, 1));
    }
    if target.is_empty() {
        // only the empty set avoids the single point
        return Ok((Some(vec![cands[0]]), 1));
    }
    let max_size = cands.iter().map(|c| c.len()).max().unwrap_or(0);
    if max_size == 0 {
        return Ok((None, 1));
    }
    let mut ctx = PointSearch {
        cands: &cands,
        a,
        max_size,
        chosen: Vec::with_capacity(a),
        nodes: 0,
        pending: 0,
        budget,
    };
    let found = ctx.dfs(target)?;
    budget.spend(ctx.pending)?;
    Ok((found.then(|| ctx.chosen.clone()), ctx.nodes))
}

struct PointSearch<'a> {
    cands: &'a [Subset],
    a: usize,
    max_size: usize,
    chosen: Vec<Subset>,
    nodes: u64,
    pending: u64,
    budget: &'a Budget,
}

impl PointSearch<'_> {
    fn dfs(&mut self, uncovered: Subset) -> Result<bool> {
        self.nodes += 1;
        self.pending += 1;
        if self.pending >= 4096 {
            self.budget.spend(self.pending)?;
            self.pending = 0;
        }
        let x = match uncovered.first() {
            None => return Ok(true),
            Some(x) => x,
        };
        let slots = self.a - self.chosen.len();
        if slots == 0 || slots * self.max_size < uncovered.len() {
            return Ok(false);
        }
        for i in 0..self.cands.len() {
            let c = self.cands[i];
            if !c.contains(x) {
                continue;
            }
            self.chosen.push(c);
            if self.dfs(uncovered.difference(c))? {
                return Ok(true);
            }
            self.chosen.pop();
        }
        Ok(false)
    }
}

/// Reference search: every `a`-multiset of (proper) flats, in index order
/// over the flats sorted by size then lexicographically, abandoning partial
/// tuples that can no longer reach `n - 1` points.
pub fn check_mcb_exhaustive(m: &Matroid, a: usize, opts: SearchOptions) -> Result<McbVerdict> {
    if a == 0 {
        return Err(Error::InvalidInput("degree a must be at least 1".into()));
    }
    let family = flat_family(m, opts.proper_only);
    let n = m.n();
    let full = m.ground();
    let mut found = None;
    let mut nodes = 0u64;
    for_each_multiset(
        family.members(),
        a,
        n.saturating_sub(1),
        opts.budget,
        &mut nodes,
        |tuple, union| {
            if union != full && union.len() + 1 == n {
                let omitted = full.difference(union).first().expect("one point missing");
                found = Some(Witness {
                    flats: tuple.to_vec(),
                    omitted,
                });
                return false;
            }
            true
        },
    )?;
    Ok(McbVerdict::from_witness(
        found,
        SearchStats {
            candidates: family.len(),
            nodes,
        },
    ))
}

/// Every `a`-multiset (as a nondecreasing index tuple) of `members` whose
/// union has at least `threshold` elements.
pub fn near_covers(members: &[Subset], a: usize, threshold: usize, budget: u64) -> Result<Vec<Vec<Subset>>> {
    let mut out = Vec::new();
    let mut nodes = 0;
    for_each_multiset(members, a, threshold, budget, &mut nodes, |tuple, _| {
        out.push(tuple.to_vec());
        true
    })?;
    Ok(out)
}

/// Visits complete `a`-multisets with union size `>= threshold`; the
/// callback returns `false` to stop.
fn for_each_multiset<F>(
    members: &[Subset],
    a: usize,
    threshold: usize,
    budget: u64,
    nodes: &mut u64,
    mut visit: F,
) -> Result<()>
where
    F: FnMut(&[Subset], Subset) -> bool,
{
    // suffix_max[i] = largest member size among members[i..]
    let mut suffix_max = vec![0usize; members.len() + 1];
    for i in (0..members.len()).rev() {
        suffix_max[i] = suffix_max[i + 1].max(members[i].len());
    }
    let mut tuple = Vec::with_capacity(a);
    let mut state = MultisetWalk {
        members,
        a,
        threshold,
        suffix_max: &suffix_max,
        budget,
        nodes,
    };
    state.walk(0, Subset::EMPTY, &mut tuple, &mut visit).map(|_| ())
}

struct MultisetWalk<'a> {
    members: &'a [Subset],
    a: usize,
    threshold: usize,
    suffix_max: &'a [usize],
    budget: u64,
    nodes: &'a mut u64,
}

impl MultisetWalk<'_> {
    fn walk<F>(&mut self, start: usize, union: Subset, tuple: &mut Vec<Subset>, visit: &mut F) -> Result<bool>
    where
        F: FnMut(&[Subset], Subset) -> bool,
    {
        *self.nodes += 1;
        if *self.nodes > self.budget {
            return Err(Error::BudgetExceeded {
                explored: *self.nodes,
                limit: self.budget,
            });
        }
        if tuple.len() == self.a {
            if union.len() >= self.threshold {
                return Ok(visit(tuple, union));
            }
            return Ok(true);
        }
        let slots = self.a - tuple.len();
        for i in start..self.members.len() {
            if union.len() + slots * self.suffix_max[i] < self.threshold {
                break;
            }
            tuple.push(self.members[i]);
            let go = self.walk(i, union.union(self.members[i]), tuple, visit)?;
            tuple.pop();
            if !go {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// `n - 1 - B(a - 1) >= r`: with that slack, `a` sets of size at most `B`
/// covering `n - 1` points each have at least `r` elements.
pub fn hyperplane_bound_applies(n: usize, b: usize, a: usize, r: usize) -> bool {
    let lhs = n as i64 - 1 - (b as i64) * (a as i64 - 1);
    lhs >= r as i64
}

/// A cover of `E` by flats together with their ranks.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CoverProfile {
    pub flats: Vec<Subset>,
    pub ranks: Vec<usize>,
    pub total_rank: usize,
}

impl CoverProfile {
    /// Ranks sorted ascending, as a multiset.
    pub fn rank_multiset(&self) -> Vec<usize> {
        let mut r = self.ranks.clone();
        r.sort_unstable();
        r
    }
}

/// Inclusion-minimal covers of `E` by at most `k_max` distinct flats.
///
/// Flats are taken in size-then-lexicographic order and each cover is
/// listed once, in that order.
pub fn cover_profiles(m: &Matroid, k_max: usize, proper_only: bool) -> Result<Vec<CoverProfile>> {
    if k_max == 0 {
        return Err(Error::InvalidInput("k_max must be at least 1".into()));
    }
    let full = m.ground();
    let flats: Vec<Subset> = flat_family(m, proper_only)
        .into_members()
        .into_iter()
        .filter(|f| !f.is_empty())
        .collect();
    let mut suffix_max = vec![0usize; flats.len() + 1];
    for i in (0..flats.len()).rev() {
        suffix_max[i] = suffix_max[i + 1].max(flats[i].len());
    }
    let mut out = Vec::new();
    let mut chosen = Vec::with_capacity(k_max);
    collect_minimal_covers(
        &flats,
        &suffix_max,
        full,
        k_max,
        0,
        Subset::EMPTY,
        &mut chosen,
        &mut out,
    );
    Ok(out
        .into_iter()
        .map(|flats| {
            let ranks: Vec<usize> = flats.iter().map(|&f| m.rank_of(f)).collect();
            let total_rank = ranks.iter().sum();
            CoverProfile {
                flats,
                ranks,
                total_rank,
            }
        })
        .collect())
}

#[allow(clippy::too_many_arguments)]
fn collect_minimal_covers(
    flats: &[Subset],
    suffix_max: &[usize],
    full: Subset,
    k_max: usize,
    start: usize,
    union: Subset,
    chosen: &mut Vec<Subset>,
    out: &mut Vec<Vec<Subset>>,
) {
    if union == full && !chosen.is_empty() {
        if is_minimal_cover(chosen) {
            out.push(chosen.clone());
        }
        return;
    }
    let slots = k_max - chosen.len();
    if slots == 0 {
        return;
    }
    let missing = full.difference(union).len();
    for i in start..flats.len() {
        if slots * suffix_max[i] < missing {
            break;
        }
        let f = flats[i];
        if f.is_subset_of(union) {
            continue;
        }
        chosen.push(f);
        collect_minimal_covers(flats, suffix_max, full, k_max, i + 1, union.union(f), chosen, out);
        chosen.pop();
    }
}

/// Every member owns an element no other member contains.
pub fn is_minimal_cover(members: &[Subset]) -> bool {
    members.iter().enumerate().all(|(i, &f)| {
        let others = members
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(Subset::EMPTY, |acc, (_, &g)| acc.union(g));
        !f.difference(others).is_empty()
    })
}

/// Smallest total rank over covers of `E` by at most `k` proper flats.
pub fn min_total_rank_cover(m: &Matroid, k: usize) -> Result<usize> {
    cover_profiles(m, k, true)?
        .iter()
        .map(|p| p.total_rank)
        .min()
        .ok_or(Error::NoCover { k })
}
