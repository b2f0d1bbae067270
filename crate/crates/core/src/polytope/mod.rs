//! Matroid polytopes as signed Minkowski sums of simplices.
//!
//! A vector `z` indexed by the nonempty subsets of `[n]` defines, through
//! Möbius inversion `y_I = Σ_{J ⊆ I} (-1)^{|I|-|J|} z_J`, the signed sum
//! `Σ y_I Δ_I`. Its minimum support function is `w ↦ Σ y_I min_{i∈I} w_i`,
//! which is what every comparison here evaluates; no hull is ever built.

pub mod building;

use std::collections::HashMap;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::mcb::{check_mcb, check_smcb, McbVerdict};
use crate::subset::{SetFamily, Subset};

pub use building::{building_closure, is_building_set, removable_members, BuildingSet, FamilyBits};

/// Largest ground set accepted by [`decompose`].
pub const DECOMPOSE_MAX_N: usize = 10;
/// Largest ground set for permutation-vertex enumeration.
pub const VERTEX_MAX_N: usize = 8;
/// Largest ground set for [`normal_fan_equivalent`].
pub const FAN_MAX_N: usize = 6;

/// Which rank expression defines `z_I`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Convention {
    /// `z_I = r - rank(I)`.
    SpanAsStated,
    /// `z_I = r - rank(E \ I)`.
    ComplementSpan,
}

impl Convention {
    pub const ALL: [Convention; 2] = [Convention::SpanAsStated, Convention::ComplementSpan];
}

/// Indicator vectors of the bases, in basis order.
pub fn polytope_vertices(m: &Matroid) -> Vec<Vec<u8>> {
    m.bases()
        .iter()
        .map(|b| (0..m.n()).map(|i| b.contains(i) as u8).collect())
        .collect()
}

/// `z` indexed by subset bits, with `z_∅ = 0`.
pub fn z_values(m: &Matroid, convention: Convention) -> Vec<i64> {
    let full = m.ground();
    let r = m.rank() as i64;
    (0..1u32 << m.n())
        .map(|bits| {
            let s = Subset::from_bits(bits);
            if s.is_empty() {
                return 0;
            }
            match convention {
                Convention::SpanAsStated => r - m.rank_of(s) as i64,
                Convention::ComplementSpan => r - m.rank_of(full.difference(s)) as i64,
            }
        })
        .collect()
}

/// Möbius inversion over the boolean lattice of nonempty sets (`z_∅` is
/// read as 0). The input length must be a power of two.
pub fn mobius_invert(z: &[Rational64]) -> Vec<Rational64> {
    let mut y = z.to_vec();
    if let Some(first) = y.first_mut() {
        *first = Rational64::zero();
    }
    let len = y.len();
    let mut bit = 1;
    while bit < len {
        for mask in 0..len {
            if mask & bit != 0 {
                let lower = y[mask ^ bit];
                y[mask] -= lower;
            }
        }
        bit <<= 1;
    }
    y
}

/// Inverse of [`mobius_invert`]: `z_I = Σ_{J ⊆ I} y_J`.
pub fn cumulative_sum(y: &[Rational64]) -> Vec<Rational64> {
    let mut z = y.to_vec();
    let len = z.len();
    let mut bit = 1;
    while bit < len {
        for mask in 0..len {
            if mask & bit != 0 {
                let lower = z[mask ^ bit];
                z[mask] += lower;
            }
        }
        bit <<= 1;
    }
    z
}

/// Coefficients `y_I` of a signed Minkowski sum of simplices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinkDecomp {
    n: usize,
    y: Vec<Rational64>,
    convention: Convention,
}

impl MinkDecomp {
    /// `y` indexed by subset bits; `y_∅` must be zero.
    pub fn new(n: usize, y: Vec<Rational64>, convention: Convention) -> Result<Self> {
        if y.len() != 1 << n {
            return Err(Error::InvalidInput(format!(
                "expected {} coefficients, got {}",
                1 << n,
                y.len()
            )));
        }
        if !y[0].is_zero() {
            return Err(Error::InvalidInput("the empty set carries no simplex".into()));
        }
        Ok(MinkDecomp { n, y, convention })
    }

    /// The candidate decomposition of `P_M` under `convention`.
    pub fn candidate(m: &Matroid, convention: Convention) -> Self {
        let z: Vec<Rational64> = z_values(m, convention)
            .into_iter()
            .map(Rational64::from_integer)
            .collect();
        MinkDecomp {
            n: m.n(),
            y: mobius_invert(&z),
            convention,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn convention(&self) -> Convention {
        self.convention
    }

    pub fn coefficient(&self, s: Subset) -> Rational64 {
        self.y[s.bits() as usize]
    }

    pub fn coefficients(&self) -> &[Rational64] {
        &self.y
    }

    /// Nonzero coefficients, sets ordered by size then lexicographically.
    pub fn nonzero(&self) -> Vec<(Subset, Rational64)> {
        let mut v: Vec<(Subset, Rational64)> = self
            .y
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (Subset::from_bits(i as u32), c))
            .collect();
        v.sort_by(|a, b| a.0.graded_cmp(b.0));
        v
    }

    /// `{I : y_I > 0}`.
    pub fn support(&self) -> SetFamily {
        let members = self
            .nonzero()
            .into_iter()
            .filter(|(_, c)| c.is_positive())
            .map(|(s, _)| s)
            .collect();
        SetFamily::new(self.n, members).expect("support lies in the ground set")
    }

    /// No negative coefficient.
    pub fn is_generic(&self) -> bool {
        self.y.iter().all(|c| !c.is_negative())
    }

    /// `Σ y_I min_{i ∈ I} w_i`.
    pub fn min_support(&self, w: &[i64]) -> Rational64 {
        debug_assert_eq!(w.len(), self.n);
        // min over each subset, built from the subset minus its top element
        let mut mins = vec![i64::MAX; self.y.len()];
        let mut acc = Rational64::zero();
        for bits in 1..self.y.len() {
            let top = 31 - (bits as u32).leading_zeros() as usize;
            mins[bits] = mins[bits & !(1 << top)].min(w[top]);
            let c = self.y[bits];
            if !c.is_zero() {
                acc += c * mins[bits];
            }
        }
        acc
    }

    /// The point minimizing every `w` that orders the elements as `order`
    /// (first = smallest weight): each simplex contributes its first vertex.
    pub fn vertex_for_order(&self, order: &[usize]) -> Vec<Rational64> {
        let mut rank_of = vec![0usize; self.n];
        for (pos, &e) in order.iter().enumerate() {
            rank_of[e] = pos;
        }
        let mut x = vec![Rational64::zero(); self.n];
        for (bits, c) in self.y.iter().enumerate().skip(1) {
            if c.is_zero() {
                continue;
            }
            let first = Subset::from_bits(bits as u32)
                .iter()
                .min_by_key(|&e| rank_of[e])
                .expect("nonempty");
            x[first] += c;
        }
        x
    }

    /// Distinct vertices over all orderings, sorted.
    pub fn vertices(&self) -> Result<Vec<Vec<Rational64>>> {
        if self.n > VERTEX_MAX_N {
            return Err(Error::Scope(format!(
                "vertex enumeration limited to n <= {VERTEX_MAX_N} (got {})",
                self.n
            )));
        }
        let mut out = Vec::new();
        let mut order: Vec<usize> = (0..self.n).collect();
        permutations(&mut order, 0, &mut |p| out.push(self.vertex_for_order(p)));
        out.sort();
        out.dedup();
        Ok(out)
    }

    /// Nonzero coefficients as `(labels, "p/q")` pairs.
    pub fn describe(&self) -> Vec<(Vec<usize>, String)> {
        self.nonzero()
            .into_iter()
            .map(|(s, c)| (s.labels(), c.to_string()))
            .collect()
    }
}

impl Serialize for MinkDecomp {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let y: Vec<Coefficient> = self
            .nonzero()
            .into_iter()
            .map(|(subset, c)| Coefficient {
                subset,
                numerator: *c.numer(),
                denominator: *c.denom(),
            })
            .collect();
        let mut st = s.serialize_struct("MinkDecomp", 3)?;
        st.serialize_field("n", &self.n)?;
        st.serialize_field("convention", &self.convention)?;
        st.serialize_field("y", &y)?;
        st.end()
    }
}

#[derive(Serialize)]
struct Coefficient {
    subset: Subset,
    numerator: i64,
    denominator: i64,
}

/// Serializes a rational as `{numerator, denominator}`.
pub fn serialize_ratio<S: Serializer>(r: &Rational64, s: S) -> std::result::Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Ratio", 2)?;
    st.serialize_field("numerator", r.numer())?;
    st.serialize_field("denominator", r.denom())?;
    st.end()
}

fn permutations<F: FnMut(&[usize])>(v: &mut Vec<usize>, k: usize, f: &mut F) {
    if k == v.len() {
        f(v);
        return;
    }
    for i in k..v.len() {
        v.swap(k, i);
        permutations(v, k + 1, f);
        v.swap(k, i);
    }
}

/// `min_{B basis} Σ_{i ∈ B} w_i`.
pub fn matroid_min_support(m: &Matroid, w: &[i64]) -> i64 {
    m.bases()
        .iter()
        .map(|b| b.iter().map(|i| w[i]).sum::<i64>())
        .min()
        .expect("a matroid has a basis")
}

/// All directions in `{-1, 0, 1}^n`, in base-3 counting order.
pub fn ternary_directions(n: usize) -> impl Iterator<Item = Vec<i64>> {
    (0..3u64.pow(n as u32)).map(move |mut code| {
        (0..n)
            .map(|_| {
                let d = (code % 3) as i64 - 1;
                code /= 3;
                d
            })
            .collect()
    })
}

/// First direction in `{-1,0,1}^n` where the support functions of `P_M`
/// and the decomposition differ.
pub fn oracle_mismatch(m: &Matroid, d: &MinkDecomp) -> Option<Vec<i64>> {
    if d.n != m.n() {
        return Some(Vec::new());
    }
    ternary_directions(m.n()).find(|w| Rational64::from_integer(matroid_min_support(m, w)) != d.min_support(w))
}

/// The first convention whose decomposition reproduces `P_M` on every
/// direction of `{-1,0,1}^n`.
pub fn decompose(m: &Matroid) -> Result<MinkDecomp> {
    if m.n() > DECOMPOSE_MAX_N {
        return Err(Error::Scope(format!(
            "decomposition oracle limited to n <= {DECOMPOSE_MAX_N} (got {})",
            m.n()
        )));
    }
    let candidates: Vec<MinkDecomp> = Convention::ALL.iter().map(|&c| MinkDecomp::candidate(m, c)).collect();
    if let Some(ok) = candidates.iter().find(|d| oracle_mismatch(m, d).is_none()) {
        return Ok(ok.clone());
    }
    Err(Error::ConventionMismatch {
        span_as_stated: candidates[0].describe(),
        complement_span: candidates[1].describe(),
    })
}

/// `Σ_{i ∈ G} x_i >= bound`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FacetInequality {
    pub g: Subset,
    /// `|{I ∈ B : I ⊆ G}|` for the support `B`.
    pub bound: usize,
    /// `Σ_{I ⊆ G} y_I`, the bound that is valid on the polytope.
    #[serde(serialize_with = "serialize_ratio")]
    pub weighted_bound: Rational64,
}

/// One inequality per member `G` of the building closure of the support.
pub fn facet_inequalities(d: &MinkDecomp) -> Result<Vec<FacetInequality>> {
    if !d.is_generic() {
        return Err(Error::NotGeneric);
    }
    let support = d.support();
    let closure = building_closure(&support)?;
    Ok(closure
        .members()
        .iter()
        .map(|g| {
            let bound = support.iter().filter(|i| i.is_subset_of(g)).count();
            let weighted_bound = g.subsets().map(|i| d.coefficient(i)).sum();
            FacetInequality {
                g,
                bound,
                weighted_bound,
            }
        })
        .collect())
}

/// Dimension of the affine hull of `points`; 0 for an empty list.
pub fn affine_dimension(points: &[Vec<Rational64>]) -> usize {
    let Some(p0) = points.first() else {
        return 0;
    };
    let mut rows: Vec<Vec<Rational64>> = points[1..]
        .iter()
        .map(|p| p.iter().zip(p0).map(|(a, b)| a - b).collect())
        .collect();
    matrix_rank(&mut rows)
}

fn matrix_rank(rows: &mut [Vec<Rational64>]) -> usize {
    let cols = rows.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = Rational64::one() / rows[rank][c];
        let pivot_row = rows[rank].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != rank && !row[c].is_zero() {
                let f = row[c] * inv;
                for (x, v) in row[c..].iter_mut().zip(&pivot_row[c..]) {
                    *x -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// How an inequality `Σ_{i∈G} x_i >= bound` sits on a vertex set.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InequalityCheck {
    pub g: Subset,
    pub valid: bool,
    pub tight_vertices: usize,
    pub face_dimension: usize,
    pub polytope_dimension: usize,
    pub is_facet: bool,
}

pub fn check_inequality(vertices: &[Vec<Rational64>], g: Subset, bound: Rational64) -> InequalityCheck {
    let value = |v: &Vec<Rational64>| g.iter().map(|i| v[i]).sum::<Rational64>();
    let valid = vertices.iter().all(|v| value(v) >= bound);
    let tight: Vec<Vec<Rational64>> = vertices.iter().filter(|v| value(v) == bound).cloned().collect();
    let polytope_dimension = affine_dimension(vertices);
    let face_dimension = affine_dimension(&tight);
    InequalityCheck {
        g,
        valid,
        tight_vertices: tight.len(),
        face_dimension,
        polytope_dimension,
        is_facet: valid && !tight.is_empty() && face_dimension + 1 == polytope_dimension,
    }
}

/// Vertices of `P_M` as rational points.
pub fn rational_vertices(m: &Matroid) -> Vec<Vec<Rational64>> {
    polytope_vertices(m)
        .into_iter()
        .map(|v| v.into_iter().map(|x| Rational64::from_integer(x as i64)).collect())
        .collect()
}

/// Proper nonempty flats `F` with `M | F` and `M / F` both connected.
pub fn flacets(m: &Matroid) -> Result<SetFamily> {
    if !m.is_connected() {
        return Err(Error::Disconnected);
    }
    let full = m.ground();
    let members = m
        .flats()
        .iter()
        .filter(|&f| !f.is_empty() && f != full)
        .map(|f| -> Result<Option<Subset>> {
            let conn = m.restriction(f)?.matroid.is_connected() && m.contraction(f)?.matroid.is_connected();
            Ok(conn.then_some(f))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    SetFamily::new(m.n(), members)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    pub connected: bool,
    pub simple_rank1: bool,
    /// `M[F, G]` connected for all flats `F ⊊ G`.
    pub all_interval_minors_connected: bool,
    /// `M | F` and `M / F` connected for every proper nonempty flat `F`.
    pub all_flats_connected_coconnected: bool,
    pub generic: bool,
    /// `y_E > 0`.
    pub y_full_positive: bool,
    pub hold: bool,
}

pub fn hypotheses(m: &Matroid, d: &MinkDecomp) -> Result<Hypotheses> {
    let connected = m.is_connected();
    let simple_rank1 = m.is_simple_rank1();
    let flats = m.flats();
    let mut intervals = true;
    'outer: for f in flats.iter() {
        for g in flats.iter() {
            if f != g && f.is_subset_of(g) && !m.minor_interval(f, g)?.matroid.is_connected() {
                intervals = false;
                break 'outer;
            }
        }
    }
    let proper = flats.iter().filter(|&f| !f.is_empty() && f != m.ground()).count();
    let flats_cc = connected && flacets(m)?.len() == proper;
    let generic = d.is_generic();
    let y_full_positive = d.coefficient(m.ground()).is_positive();
    Ok(Hypotheses {
        connected,
        simple_rank1,
        all_interval_minors_connected: intervals,
        all_flats_connected_coconnected: flats_cc,
        generic,
        y_full_positive,
        hold: connected && simple_rank1 && generic && y_full_positive && (intervals || flats_cc),
    })
}

/// `MCB(a)` against `sMCB(a)` for the proper members of the building
/// closure of the positive support of the certified decomposition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EquivalenceReport {
    pub n: usize,
    pub a: usize,
    pub hypotheses: Hypotheses,
    pub decomposition: MinkDecomp,
    pub building_family: Vec<Subset>,
    pub mcb: McbVerdict,
    pub smcb: McbVerdict,
    pub agree: bool,
    /// Agreement is only claimed when the hypotheses hold.
    pub asserted: bool,
}

pub fn mcb_flacet_equivalence(m: &Matroid, a: usize) -> Result<EquivalenceReport> {
    let d = decompose(m)?;
    let hyp = hypotheses(m, &d)?;
    let full = m.ground();
    let closure = building_closure(&d.support())?;
    let family: Vec<Subset> = closure.members().iter().filter(|&s| s != full).collect();
    let fam = SetFamily::new(m.n(), family.clone())?;
    let mcb = check_mcb(m, a)?;
    let smcb = check_smcb(m.n(), &fam, a)?;
    let agree = mcb.holds == smcb.holds;
    Ok(EquivalenceReport {
        n: m.n(),
        a,
        asserted: hyp.hold,
        hypotheses: hyp,
        decomposition: d,
        building_family: family,
        mcb,
        smcb,
        agree,
    })
}

/// Whether `P_M` and `P_N` have the same normal fan.
///
/// Both fans coarsen the braid arrangement, whose relatively open cones
/// are indexed by ordered set partitions. The fans agree exactly when the
/// two polytopes group these cones into the same classes by minimizing
/// face.
pub fn normal_fan_equivalent(m: &Matroid, n: &Matroid) -> Result<bool> {
    if m.n() != n.n() {
        return Err(Error::InvalidInput(format!(
            "ground sets differ ({} vs {} elements)",
            m.n(),
            n.n()
        )));
    }
    if m.n() > FAN_MAX_N {
        return Err(Error::Scope(format!(
            "normal fan comparison limited to n <= {FAN_MAX_N} (got {})",
            m.n()
        )));
    }
    let mut forward: HashMap<u64, u64> = HashMap::new();
    let mut backward: HashMap<u64, u64> = HashMap::new();
    for w in ordered_partitions(m.n()) {
        let fm = minimizing_face(m, &w);
        let fnn = minimizing_face(n, &w);
        if *forward.entry(fm).or_insert(fnn) != fnn || *backward.entry(fnn).or_insert(fm) != fm {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Bitmask over basis indices of the bases minimizing `w`.
fn minimizing_face(m: &Matroid, w: &[i64]) -> u64 {
    let values: Vec<i64> = m.bases().iter().map(|b| b.iter().map(|i| w[i]).sum()).collect();
    let best = *values.iter().min().expect("a matroid has a basis");
    values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v == best)
        .fold(0u64, |acc, (i, _)| acc | 1 << i)
}

/// One weight vector per ordered set partition of `[n]`: block indices
/// `0..k` used surjectively.
pub fn ordered_partitions(n: usize) -> Vec<Vec<i64>> {
    let mut out = Vec::new();
    let total = (n as u64).pow(n as u32).max(1);
    for mut code in 0..total {
        let w: Vec<i64> = (0..n)
            .map(|_| {
                let d = (code % n as u64) as i64;
                code /= n as u64;
                d
            })
            .collect();
        let k = w.iter().copied().max().map_or(0, |x| x + 1);
        if (0..k).all(|b| w.contains(&b)) {
            out.push(w);
        }
    }
    out
}
