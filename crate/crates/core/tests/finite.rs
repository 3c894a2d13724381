use std::collections::{BTreeMap, BTreeSet};

use kll_core::counting;
use kll_core::finquot::{self, FiniteMatrixGroup, DEFAULT_ORDER_CAP};
use kll_core::fpgroups::Presentation;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every subgroup generated by at most three elements, with the least
/// number of generators found for it.
fn subgroups_by_subsets(g: &FiniteMatrixGroup) -> BTreeMap<BTreeSet<u32>, usize> {
    let n = g.order() as u32;
    let mut out = BTreeMap::new();
    out.insert(BTreeSet::from([g.identity()]), 0);
    let mut add = |gens: &[u32], k: usize| {
        let h: BTreeSet<u32> = g.closure(gens).into_iter().collect();
        out.entry(h).or_insert(k);
    };
    for a in 0..n {
        add(&[a], 1);
    }
    for a in 0..n {
        for b in a + 1..n {
            add(&[a, b], 2);
        }
    }
    for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                add(&[a, b, c], 3);
            }
        }
    }
    out
}

#[test]
fn census_matches_subset_search() {
    let groups = [
        ("SL(2,Z/2)", FiniteMatrixGroup::sl_mod(2).unwrap(), 6),
        ("SL(2,Z/3)", FiniteMatrixGroup::sl_mod(3).unwrap(), 15),
        ("PSL(2,5)", FiniteMatrixGroup::psl(5).unwrap(), 59),
    ];
    for (name, g, expected) in groups {
        let census = counting::subgroup_census(&g).unwrap();
        let oracle = subgroups_by_subsets(&g);
        assert_eq!(census.count(), oracle.len(), "{name}");
        assert_eq!(census.count(), expected, "{name}");
        for h in &census.subgroups {
            let key: BTreeSet<u32> = h.elements().into_iter().collect();
            let d = oracle.get(&key).unwrap_or_else(|| panic!("{name}: census subgroup missing from oracle"));
            assert_eq!(h.d, *d, "{name}: d(H) for |H| = {}", h.order);
        }
    }
}

#[test]
fn census_classes_are_conjugacy_classes() {
    let g = FiniteMatrixGroup::sl_mod(3).unwrap();
    let census = counting::subgroup_census(&g).unwrap();
    let sets: Vec<BTreeSet<u32>> = census.subgroups.iter().map(|h| h.elements().into_iter().collect()).collect();
    for (i, a) in sets.iter().enumerate() {
        for (j, b) in sets.iter().enumerate() {
            let conj = (0..g.order() as u32).any(|x| {
                let xi = g.inverse(x);
                a.iter().map(|&h| g.mul(g.mul(xi, h), x)).collect::<BTreeSet<_>>() == *b
            });
            assert_eq!(conj, census.subgroups[i].class == census.subgroups[j].class);
        }
    }
    assert_eq!(census.classes, census.subgroups.iter().map(|h| h.class).collect::<BTreeSet<_>>().len());
}

#[test]
fn index_two_and_abelianization() {
    for m in [2, 3, 4, 5, 6] {
        let g = FiniteMatrixGroup::sl_mod(m).unwrap();
        let census = counting::subgroup_census(&g).unwrap();
        let d2 = counting::d2_abelianization(&g);
        assert_eq!(census.count_of_index(2), (1 << d2) - 1, "m = {m}");
    }
}

fn random_pair(rng: &mut ChaCha8Rng, g: &FiniteMatrixGroup) -> [u32; 2] {
    let n = g.order() as u32;
    [rng.gen_range(0..n), rng.gen_range(0..n)]
}

/// For pairwise non-isomorphic simple factors, a subgroup is everything
/// iff it projects onto every factor.
#[test]
fn hall_property_on_random_tuples() {
    let fs: Vec<FiniteMatrixGroup> = [5, 7, 11].into_iter().map(|q| FiniteMatrixGroup::psl(q).unwrap()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(5711);
    let mut onto_seen = 0;
    for _ in 0..20 {
        let pairs: Vec<[u32; 2]> = fs.iter().map(|f| random_pair(&mut rng, f)).collect();
        let gens: Vec<Vec<u32>> = (0..2).map(|g| pairs.iter().map(|p| p[g]).collect()).collect();
        let r = finquot::product_surjectivity(&fs, &gens, DEFAULT_ORDER_CAP).unwrap();
        assert!(r.hall_hypothesis);
        let slotwise = fs.iter().zip(&pairs).all(|(f, p)| f.closure(p).len() == f.order());
        assert_eq!(r.per_factor_onto.iter().all(|&b| b), slotwise);
        assert_eq!(r.onto, slotwise);
        onto_seen += r.onto as usize;
    }
    assert!(onto_seen > 0);
}

#[test]
fn isomorphic_factors_break_hall() {
    let g = FiniteMatrixGroup::psl(7).unwrap();
    let [s, t] = g.standard_generators();
    let r = finquot::product_surjectivity(&[g.clone(), g.clone()], &[vec![s, s], vec![t, t]], DEFAULT_ORDER_CAP).unwrap();
    assert!(!r.hall_hypothesis);
    assert!(r.per_factor_onto.iter().all(|&b| b));
    assert_eq!(r.order, 168);
}

#[test]
fn normalizer_matches_enumeration() {
    for qs in [[5u64, 7], [5, 11], [7, 9]] {
        let fs: Vec<FiniteMatrixGroup> = qs.iter().map(|&q| FiniteMatrixGroup::psl(q).unwrap()).collect();
        let (a, b): (Vec<u32>, Vec<u32>) = fs.iter().map(|f| f.klein_four().unwrap()).unzip();
        let r = finquot::normalizer_quotient_order(&fs, &a, &b).unwrap();
        let e = finquot::normalizer_order_by_enumeration(&fs, &a, &b, DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(r.normalizer_order, e, "{qs:?}");
        assert_eq!(r.quotient_order * 4, e, "{qs:?}");
    }
}

fn word(rng: &mut ChaCha8Rng, len: usize) -> Vec<i32> {
    (0..len).map(|_| if rng.gen_bool(0.5) { 1 } else { 2 } * if rng.gen_bool(0.5) { 1 } else { -1 }).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    /// The pullback of H under F_2 -> PSL(2,7) has index [G : H], acts
    /// transitively, and contains exactly the words landing in H.
    #[test]
    fn pullback_cover(h_gen in 0u32..168, seed in any::<u64>()) {
        let g = FiniteMatrixGroup::psl(7).unwrap();
        let images = g.standard_generators();
        let h = g.closure(&[h_gen]);
        let t = finquot::pullback_cover_table(&Presentation::free(2), &g, &images, &h).unwrap();
        prop_assert_eq!(t.index() * h.len(), g.order());
        let mut reached = vec![false; t.index()];
        reached[0] = true;
        let mut stack = vec![0];
        while let Some(c) = stack.pop() {
            for l in [1, -1, 2, -2] {
                let d = t.step(c, l);
                if !reached[d] {
                    reached[d] = true;
                    stack.push(d);
                }
            }
        }
        prop_assert!(reached.iter().all(|&r| r));
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..20 {
            let len = rng.gen_range(0..12);
            let w = word(&mut rng, len);
            let img = finquot::evaluate_word(&g, &images, &w);
            prop_assert_eq!(t.contains(&w), h.contains(&img));
        }
    }
}
