#![allow(dead_code)]

use mcb_core::subset::k_subsets;
use mcb_core::{cycle_matroid, Graph, Matroid, SetFamily, Subset};
use proptest::prelude::*;

/// Paving matroid of rank `m + 1` from candidate blocks: each candidate is
/// kept when it meets every kept block in fewer than `m` points, then the
/// uncovered `m`-subsets become blocks.
pub fn paving_from_candidates(n: usize, m: usize, candidates: &[u32]) -> Matroid {
    let mut blocks: Vec<Subset> = Vec::new();
    for &c in candidates {
        let s = Subset::from_bits(c & Subset::full(n).bits());
        if s.len() > m && s.len() < n && blocks.iter().all(|b| b.intersection(s).len() < m) {
            blocks.push(s);
        }
    }
    for s in k_subsets(n, m) {
        if !blocks.iter().any(|b| s.is_subset_of(*b)) {
            blocks.push(s);
        }
    }
    Matroid::from_m_partition(n, &SetFamily::new(n, blocks).unwrap(), m).unwrap()
}

pub fn arb_paving(max_n: usize) -> impl Strategy<Value = Matroid> {
    (3..=max_n)
        .prop_flat_map(|n| (Just(n), 1..=(n - 2).min(3)))
        .prop_flat_map(|(n, m)| (Just(n), Just(m), prop::collection::vec(any::<u32>(), 0..6)))
        .prop_map(|(n, m, c)| paving_from_candidates(n, m, &c))
}

pub fn arb_graph(max_vertices: usize, max_edges: usize) -> impl Strategy<Value = Graph> {
    (2..=max_vertices)
        .prop_flat_map(move |v| (Just(v), prop::collection::vec((0..v, 0..v), 1..=max_edges)))
        .prop_map(|(v, edges)| Graph::new(v, edges).unwrap())
}

pub fn arb_uniform(max_n: usize) -> impl Strategy<Value = Matroid> {
    (1..=max_n)
        .prop_flat_map(|n| (0..=n, Just(n)))
        .prop_map(|(r, n)| Matroid::uniform(r, n).unwrap())
}

/// Uniform, graphic, paving and two-part direct sums on at most `max_n`
/// elements.
pub fn arb_matroid(max_n: usize) -> impl Strategy<Value = Matroid> {
    let half = (max_n / 2).max(1);
    prop_oneof![
        arb_uniform(max_n),
        arb_graph(5, max_n).prop_map(|g| cycle_matroid(&g).unwrap()),
        arb_paving(max_n),
        (arb_uniform(half), arb_uniform(half)).prop_map(|(a, b)| Matroid::direct_sum(&[a, b]).unwrap()),
    ]
}
