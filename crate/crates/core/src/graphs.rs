//! Graphs, graphic matroids, `k`-circuits, and the digraph of forced
//! implications between elements of a set family.

use petgraph::unionfind::UnionFind;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matroid::Matroid;
use crate::mcb::{check_mcb, SearchStats};
use crate::subset::{k_subsets, SetFamily, Subset, MAX_N};

/// Undirected multigraph; edge `i` is element `i + 1` of its cycle matroid.
/// Vertices are 0-based internally and 1-based in JSON.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Graph {
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Graph {
    /// Edges given as 0-based vertex pairs.
    pub fn new(vertices: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if let Some(&(u, v)) = edges.iter().find(|&&(u, v)| u >= vertices || v >= vertices) {
            return Err(Error::InvalidInput(format!(
                "edge ({}, {}) uses a vertex outside 1..={vertices}",
                u + 1,
                v + 1
            )));
        }
        if edges.len() > 32 {
            return Err(Error::Scope(format!("{} edges exceed the 32-edge limit", edges.len())));
        }
        Ok(Graph { vertices, edges })
    }

    /// Edges given as 1-based vertex pairs.
    pub fn from_labels(vertices: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut out = Vec::with_capacity(edges.len());
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > vertices || v > vertices {
                return Err(Error::InvalidInput(format!(
                    "edge ({u}, {v}) uses a vertex outside 1..={vertices}"
                )));
            }
            out.push((u - 1, v - 1));
        }
        Graph::new(vertices, out)
    }

    pub fn complete(k: usize) -> Self {
        let edges = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        Graph { vertices: k, edges }
    }

    pub fn cycle(k: usize) -> Self {
        let edges = (0..k).map(|i| (i, (i + 1) % k)).collect();
        Graph { vertices: k, edges }
    }

    pub fn path(edges: usize) -> Self {
        Graph {
            vertices: edges + 1,
            edges: (0..edges).map(|i| (i, i + 1)).collect(),
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn all_edges(&self) -> Subset {
        Subset::full(self.edges.len())
    }

    /// `copies` vertex-disjoint copies; copy `c` owns edges
    /// `c * |E| .. (c + 1) * |E|`.
    pub fn disjoint_copies(&self, copies: usize) -> Result<Graph> {
        let v = self.vertices;
        let edges = (0..copies)
            .flat_map(|c| self.edges.iter().map(move |&(a, b)| (a + c * v, b + c * v)))
            .collect();
        Graph::new(v * copies, edges)
    }

    fn forest_partition(&self, edges: Subset) -> UnionFind<usize> {
        let mut uf = UnionFind::new(self.vertices);
        for e in edges.iter() {
            let (a, b) = self.edges[e];
            uf.union(a, b);
        }
        uf
    }

    /// No cycle among the given edges (loops count as cycles).
    pub fn is_forest(&self, edges: Subset) -> bool {
        let mut uf = UnionFind::new(self.vertices);
        edges.iter().all(|e| {
            let (a, b) = self.edges[e];
            uf.union(a, b)
        })
    }

    pub fn component_count(&self, edges: Subset) -> usize {
        let uf = self.forest_partition(edges);
        let mut labels = uf.into_labeling();
        labels.sort_unstable();
        labels.dedup();
        labels.len()
    }
}

/// Cycle matroid: bases are the maximal spanning forests.
pub fn cycle_matroid(g: &Graph) -> Result<Matroid> {
    let n = g.edge_count();
    if n > MAX_N {
        return Err(Error::Scope(format!("{n} edges exceed the supported {MAX_N}")));
    }
    let r = g.vertices - g.component_count(g.all_edges());
    let bases: Vec<Subset> = k_subsets(n, r).filter(|&s| g.is_forest(s)).collect();
    Ok(Matroid::from_unsorted_bases(n, bases))
}

/// For every edge `p` of `a`, the endpoints of `p` stay connected through
/// the other edges of `a`.
pub fn induced_two_connected(g: &Graph, a: Subset) -> bool {
    a.iter().all(|p| {
        let (u, v) = g.edges[p];
        let uf = g.forest_partition(a.without(p));
        uf.equiv(u, v)
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum KCircuitReading {
    /// `|T| = k r(T)` for every proper subset `T`.
    Strict,
    /// `|T| <= k r(T)` for every proper subset `T`.
    Relaxed,
}

/// Sets `S` with `|S| = k r(S) + 1` whose proper subsets satisfy the
/// cardinality condition of `reading`.
pub fn k_circuits(m: &Matroid, k: usize, reading: KCircuitReading) -> Result<SetFamily> {
    if k == 0 {
        return Err(Error::InvalidInput("k must be at least 1".into()));
    }
    let members = (1..1u32 << m.n())
        .map(Subset::from_bits)
        .filter(|&s| is_k_circuit(m, s, k, reading))
        .collect();
    Ok(SetFamily::new(m.n(), members)?.canonical())
}

pub fn is_k_circuit(m: &Matroid, s: Subset, k: usize, reading: KCircuitReading) -> bool {
    if s.len() != k * m.rank_of(s) + 1 {
        return false;
    }
    s.subsets().filter(|&t| t != s).all(|t| {
        let bound = k * m.rank_of(t);
        match reading {
            KCircuitReading::Strict => t.len() == bound,
            KCircuitReading::Relaxed => t.len() <= bound,
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SumGraphicVerdict {
    pub reading: KCircuitReading,
    pub graphic: bool,
    pub k_circuits: Vec<Subset>,
    /// First pair of intersecting `k`-circuits, if any.
    pub overlapping: Option<(Subset, Subset)>,
}

/// Pairwise disjointness of the `k`-circuits, the criterion for `M^{⊕k}`
/// being graphic.
pub fn direct_sum_graphic(m: &Matroid, k: usize, reading: KCircuitReading) -> Result<SumGraphicVerdict> {
    let circuits = k_circuits(m, k, reading)?.into_members();
    let mut overlapping = None;
    'outer: for (i, &a) in circuits.iter().enumerate() {
        for &b in &circuits[i + 1..] {
            if a.intersects(b) {
                overlapping = Some((a, b));
                break 'outer;
            }
        }
    }
    Ok(SumGraphicVerdict {
        reading,
        graphic: overlapping.is_none(),
        k_circuits: circuits,
        overlapping,
    })
}

/// Report comparing `MCB(r)` for a graphic matroid with 2-connectivity of
/// the pieces of every distribution of its edges over `r` disjoint copies.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DirgraphReport {
    pub n: usize,
    pub r: usize,
    /// Any two `r`-circuits (strict reading) are disjoint.
    pub r_circuits_disjoint_strict: bool,
    /// Same under the relaxed reading.
    pub r_circuits_disjoint_relaxed: bool,
    /// Number of minimal `r`-tuples of flats covering some `E \ p`.
    pub minimal_tuples: usize,
    /// Reading A: inside each minimal tuple the flats are pairwise disjoint.
    pub minimal_tuples_disjoint_within: bool,
    /// Reading B: distinct minimal tuples share no flat.
    pub minimal_tuples_disjoint_across: bool,
    pub mcb_holds: bool,
    pub mcb_stats: SearchStats,
    /// Every distribution of `E` over the `r` copies induces a 2-connected
    /// subgraph of the `r`-fold disjoint union.
    pub distributions_two_connected: bool,
    /// A distribution (parts of 1-based edge labels) that is not.
    pub failing_distribution: Option<Vec<Subset>>,
    pub distributions_checked: u64,
    /// Hypotheses (strict `r`-circuits plus reading A) hold.
    pub hypotheses_within: bool,
    /// Hypotheses (strict `r`-circuits plus reading B) hold.
    pub hypotheses_across: bool,
    /// `mcb_holds == distributions_two_connected`, present when the reading's
    /// hypotheses hold.
    pub equivalent_within: Option<bool>,
    pub equivalent_across: Option<bool>,
}

/// Exhaustive desk-scale check for a graphic matroid (`|E| <= 8`, `r <= 3`).
pub fn check_dirgraph_equivalence(g: &Graph, r: usize) -> Result<DirgraphReport> {
    let n = g.edge_count();
    if n > 8 || r > 3 {
        return Err(Error::Scope(format!(
            "exhaustive distribution scan limited to 8 edges and r <= 3 (got {n} edges, r = {r})"
        )));
    }
    if r == 0 || n == 0 {
        return Err(Error::InvalidInput("need r >= 1 and at least one edge".into()));
    }
    let m = cycle_matroid(g)?;
    let strict = direct_sum_graphic(&m, r, KCircuitReading::Strict)?.graphic;
    let relaxed = direct_sum_graphic(&m, r, KCircuitReading::Relaxed)?.graphic;

    let tuples = minimal_covering_tuples(&m, r);
    let within = tuples.iter().all(|t| {
        t.iter()
            .enumerate()
            .all(|(i, a)| t[i + 1..].iter().all(|b| !a.intersects(*b)))
    });
    let across = tuples
        .iter()
        .enumerate()
        .all(|(i, t)| tuples[i + 1..].iter().all(|u| t.iter().all(|f| !u.contains(f))));

    let verdict = check_mcb(&m, r)?;

    let union_graph = g.disjoint_copies(r)?;
    let mut failing = None;
    let total = (r as u64).pow(n as u32);
    for code in 0..total {
        let parts = distribution(code, n, r);
        let lifted = parts
            .iter()
            .enumerate()
            .fold(0u32, |acc, (c, p)| acc | p.bits() << (c * n));
        if !induced_two_connected(&union_graph, Subset::from_bits(lifted)) {
            failing = Some(parts);
            break;
        }
    }
    let two_conn = failing.is_none();
    let hyp_within = strict && within;
    let hyp_across = strict && across;
    Ok(DirgraphReport {
        n,
        r,
        r_circuits_disjoint_strict: strict,
        r_circuits_disjoint_relaxed: relaxed,
        minimal_tuples: tuples.len(),
        minimal_tuples_disjoint_within: within,
        minimal_tuples_disjoint_across: across,
        mcb_holds: verdict.holds,
        mcb_stats: verdict.stats,
        distributions_two_connected: two_conn,
        failing_distribution: failing,
        distributions_checked: total,
        hypotheses_within: hyp_within,
        hypotheses_across: hyp_across,
        equivalent_within: hyp_within.then_some(verdict.holds == two_conn),
        equivalent_across: hyp_across.then_some(verdict.holds == two_conn),
    })
}

/// Base-`r` digits of `code`: element `e` goes to part `digit(e)`.
fn distribution(mut code: u64, n: usize, r: usize) -> Vec<Subset> {
    let mut parts = vec![Subset::EMPTY; r];
    for e in 0..n {
        let c = (code % r as u64) as usize;
        code /= r as u64;
        parts[c] = parts[c].with(e);
    }
    parts
}

/// Multisets of `r` flats whose union contains some `E \ p`, minimal under
/// shrinking any one member to a smaller flat.
pub fn minimal_covering_tuples(m: &Matroid, r: usize) -> Vec<Vec<Subset>> {
    let flats = m.flats().into_members();
    let full = m.ground();
    let covers_point_complement = |u: Subset| full.difference(u).len() <= 1;
    let mut out = Vec::new();
    let mut idx = vec![0usize; r];
    loop {
        let tuple: Vec<Subset> = idx.iter().map(|&i| flats[i]).collect();
        let union = tuple.iter().fold(Subset::EMPTY, |a, f| a.union(*f));
        if covers_point_complement(union) {
            let targets: Vec<usize> = if union == full {
                full.iter().collect()
            } else {
                full.difference(union).iter().collect()
            };
            // minimal for some p: no member can shrink while still covering E \ p
            let minimal = targets.iter().any(|&p| {
                let need = full.without(p);
                (0..r).all(|i| {
                    let others = tuple
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != i)
                        .fold(Subset::EMPTY, |a, (_, f)| a.union(*f));
                    !flats
                        .iter()
                        .any(|&g| g != tuple[i] && g.is_subset_of(tuple[i]) && need.is_subset_of(others.union(g)))
                })
            });
            if minimal {
                out.push(tuple);
            }
        }
        // next nondecreasing index tuple
        let mut i = r;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if idx[i] + 1 < flats.len() {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[i];
                }
                break;
            }
        }
    }
}

/// Directed graph on the elements of a set family; `out[i]` holds the
/// successors of `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Digraph {
    out: Vec<Subset>,
}

impl Digraph {
    pub fn new(out: Vec<Subset>) -> Result<Self> {
        let n = out.len();
        if n > 32 {
            return Err(Error::Scope(format!("{n} vertices exceed 32")));
        }
        let full = Subset::full(n);
        for (i, s) in out.iter().enumerate() {
            if !s.is_subset_of(full) {
                return Err(Error::InvalidInput(format!(
                    "successor of {} outside the vertex set",
                    i + 1
                )));
            }
            if s.contains(i) {
                return Err(Error::InvalidInput(format!("self-loop at {}", i + 1)));
            }
        }
        Ok(Digraph { out })
    }

    /// Edges as 1-based pairs.
    pub fn from_labels(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut out = vec![Subset::EMPTY; n];
        for &(u, v) in edges {
            if u == 0 || v == 0 || u > n || v > n {
                return Err(Error::InvalidInput(format!("edge ({u}, {v}) outside 1..={n}")));
            }
            out[u - 1] = out[u - 1].with(v - 1);
        }
        Digraph::new(out)
    }

    pub fn vertex_count(&self) -> usize {
        self.out.len()
    }

    pub fn successors(&self, v: usize) -> Subset {
        self.out[v]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.out[u].contains(v)
    }

    /// Edges as 0-based pairs in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.out
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |v| (u, v)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.out.iter().map(|s| s.len()).sum()
    }

    /// Every vertex has a predecessor.
    pub fn every_vertex_entered(&self) -> bool {
        let entered = self.out.iter().fold(Subset::EMPTY, |a, s| a.union(*s));
        entered == Subset::full(self.out.len())
    }
}

/// Edge `i -> j` (for `i != j`) exactly when every member containing `i`
/// also contains `j`, i.e. `i` can stand in for `j`: a member missing `j`
/// also misses `i`.
pub fn mcb_digraph(n: usize, family: &SetFamily) -> Result<Digraph> {
    let full = Subset::full(n);
    if let Some(bad) = family.iter().find(|f| !f.is_subset_of(full)) {
        return Err(Error::InvalidInput(format!("member {bad} outside 1..={n}")));
    }
    let out = (0..n)
        .map(|i| {
            let containing = family
                .iter()
                .filter(|f| f.contains(i))
                .fold(full, |a, f| a.intersection(f));
            containing.without(i)
        })
        .collect();
    Digraph::new(out)
}

/// Whether every `r`-multiset of members satisfies: for every `p` there is
/// an `x != p` with `p ∉ F_i => x ∉ F_i` for all `i`. Returns the first
/// failing tuple and point otherwise.
pub fn forced_partner_premise(n: usize, family: &SetFamily, r: usize) -> Option<(Vec<Subset>, usize)> {
    let members = family.members();
    if members.is_empty() || r == 0 {
        return None;
    }
    let full = Subset::full(n);
    let mut idx = vec![0usize; r];
    loop {
        let tuple: Vec<Subset> = idx.iter().map(|&i| members[i]).collect();
        for p in 0..n {
            // x must avoid every member that avoids p
            let avoiding = tuple
                .iter()
                .filter(|f| !f.contains(p))
                .fold(Subset::EMPTY, |a, f| a.union(*f));
            let partners = full.difference(avoiding).without(p);
            if partners.is_empty() {
                return Some((tuple, p));
            }
        }
        let mut i = r;
        loop {
            if i == 0 {
                return None;
            }
            i -= 1;
            if idx[i] + 1 < members.len() {
                idx[i] += 1;
                for j in i + 1..r {
                    idx[j] = idx[i];
                }
                break;
            }
        }
    }
}

/// A directed path as 0-based vertices.
pub type Path = Vec<usize>;

/// Simple paths from `start` that cannot be extended: every successor of
/// the last vertex is already on the path.
pub fn maximal_paths_from(d: &Digraph, start: usize) -> Vec<Path> {
    let mut out = Vec::new();
    let mut path = vec![start];
    extend_path(d, Subset::singleton(start), &mut path, &mut out);
    out
}

fn extend_path(d: &Digraph, seen: Subset, path: &mut Path, out: &mut Vec<Path>) {
    let last = *path.last().expect("paths are nonempty");
    let next = d.successors(last).difference(seen);
    if next.is_empty() {
        out.push(path.clone());
        return;
    }
    for v in next.iter() {
        path.push(v);
        extend_path(d, seen.with(v), path, out);
        path.pop();
    }
}

/// Cap on the number of maximal paths considered by [`maximal_path_covers`].
pub const MAX_PATHS: usize = 4096;

/// Inclusion-minimal families of at most `r` distinct maximal paths whose
/// vertices cover the whole digraph.
pub fn maximal_path_covers(d: &Digraph, r: usize) -> Result<Vec<Vec<Path>>> {
    let n = d.vertex_count();
    if n > 10 {
        return Err(Error::Scope(format!("path covers limited to 10 vertices (got {n})")));
    }
    let mut paths: Vec<Path> = (0..n).flat_map(|s| maximal_paths_from(d, s)).collect();
    if paths.len() > MAX_PATHS {
        return Err(Error::Scope(format!(
            "{} maximal paths exceed the cap {MAX_PATHS}",
            paths.len()
        )));
    }
    paths.sort();
    let sets: Vec<Subset> = paths
        .iter()
        .map(|p| p.iter().fold(Subset::EMPTY, |a, &v| a.with(v)))
        .collect();
    let full = Subset::full(n);
    let mut out = Vec::new();
    let mut chosen = Vec::new();
    cover_walk(&sets, full, r, 0, Subset::EMPTY, &mut chosen, &mut |idx: &[usize]| {
        out.push(idx.iter().map(|&i| paths[i].clone()).collect());
    });
    Ok(out)
}

fn cover_walk<F: FnMut(&[usize])>(
    sets: &[Subset],
    full: Subset,
    r: usize,
    start: usize,
    union: Subset,
    chosen: &mut Vec<usize>,
    emit: &mut F,
) {
    if union == full && !chosen.is_empty() {
        let members: Vec<Subset> = chosen.iter().map(|&i| sets[i]).collect();
        if crate::mcb::is_minimal_cover(&members) {
            emit(chosen);
        }
        return;
    }
    if chosen.len() == r {
        return;
    }
    for i in start..sets.len() {
        if sets[i].is_subset_of(union) {
            continue;
        }
        chosen.push(i);
        cover_walk(sets, full, r, i + 1, union.union(sets[i]), chosen, emit);
        chosen.pop();
    }
}
