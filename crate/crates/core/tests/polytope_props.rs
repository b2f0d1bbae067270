mod common;

use common::arb_matroid;
use mcb_core::polytope::{
    building_closure, check_inequality, cumulative_sum, decompose, facet_inequalities, is_building_set, mobius_invert,
    oracle_mismatch, polytope_vertices, Convention, FamilyBits, MinkDecomp,
};
use mcb_core::{cycle_matroid, Graph, Matroid, SetFamily, Subset};
use num_rational::Rational64;
use proptest::prelude::*;

fn positive_decomp(n: usize, weights: &[u8]) -> MinkDecomp {
    let mut y = vec![Rational64::from_integer(0); 1 << n];
    for (i, w) in weights.iter().enumerate().take((1 << n) - 1) {
        // sparse support: about a third of the subsets
        if w % 3 == 0 {
            y[i + 1] = Rational64::new(i64::from(*w % 7 + 1), 2);
        }
    }
    MinkDecomp::new(n, y, Convention::ComplementSpan).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn mobius_round_trip(z in prop::collection::vec(-20i64..20, 32)) {
        let mut z: Vec<Rational64> = z.into_iter().map(Rational64::from_integer).collect();
        z[0] = Rational64::from_integer(0);
        prop_assert_eq!(cumulative_sum(&mobius_invert(&z)), z.clone());
        prop_assert_eq!(mobius_invert(&cumulative_sum(&z)), z);
    }

    #[test]
    fn decomposition_reproduces_the_polytope(m in arb_matroid(6)) {
        let d = decompose(&m).unwrap();
        prop_assert!(oracle_mismatch(&m, &d).is_none());
        // the same vertex set, read off the permutation orders
        let mut want: Vec<Vec<Rational64>> = polytope_vertices(&m)
            .into_iter()
            .map(|v| v.into_iter().map(|x| Rational64::from_integer(i64::from(x))).collect())
            .collect();
        want.sort();
        let mut got = d.vertices().unwrap();
        got.sort();
        got.dedup();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn facet_bounds_are_valid_and_tight(n in 2usize..=5, w in prop::collection::vec(any::<u8>(), 31)) {
        let d = positive_decomp(n, &w);
        prop_assume!(!d.support().is_empty());
        let vertices = d.vertices().unwrap();
        for f in facet_inequalities(&d).unwrap() {
            let c = check_inequality(&vertices, f.g, f.weighted_bound);
            prop_assert!(c.valid, "{:?}", f);
            prop_assert!(c.tight_vertices > 0, "{:?}", f);
        }
    }

    #[test]
    fn building_closure_is_least(n in 1usize..=4, bits in prop::collection::vec(1u32..16, 0..5)) {
        let members: Vec<Subset> = bits
            .into_iter()
            .map(|b| Subset::from_bits(b & Subset::full(n).bits()))
            .filter(|s| !s.is_empty())
            .collect();
        let c = building_closure(&SetFamily::new(n, members.clone()).unwrap()).unwrap();
        prop_assert!(is_building_set(c.bits()));
        prop_assert!(members.iter().all(|&s| c.contains(s)));
        prop_assert_eq!(building_closure(&c.members()).unwrap(), c.clone());
        // dropping anything that was added breaks closure
        for s in c.iter() {
            if !members.contains(&s) {
                let mut f = c.bits().clone();
                f.remove(s);
                prop_assert!(!is_building_set(&f));
            }
        }
    }
}

#[test]
fn uniform_and_graphic_decompositions() {
    for m in [
        Matroid::uniform(1, 2).unwrap(),
        Matroid::uniform(2, 4).unwrap(),
        cycle_matroid(&Graph::complete(4)).unwrap(),
    ] {
        let d = decompose(&m).unwrap();
        assert_eq!(d.convention(), Convention::ComplementSpan);
        assert!(oracle_mismatch(&m, &d).is_none());
    }
    // y_E = -2 for U_{2,4}
    let d = decompose(&Matroid::uniform(2, 4).unwrap()).unwrap();
    assert_eq!(d.coefficient(Subset::full(4)), Rational64::from_integer(-2));
    assert!(!d.is_generic());
}

#[test]
fn building_bits_agree_with_family() {
    let f = FamilyBits::from_members(3, [Subset::from_bits(1), Subset::from_bits(2), Subset::from_bits(4)]);
    assert!(is_building_set(&f));
    let mut g = f.clone();
    g.insert(Subset::from_bits(3));
    g.insert(Subset::from_bits(6));
    assert!(!is_building_set(&g));
}
