use kll_core::fpgroups::{self, Presentation, SubgroupTable, Transversal};
use proptest::prelude::*;

fn presentations() -> Vec<(&'static str, Presentation)> {
    vec![
        ("free2", Presentation::free(2)),
        ("z2*z2*z2", Presentation::parse(&["a", "b", "c"], &["aa", "bb", "cc"]).unwrap()),
        ("trefoil", Presentation::parse(&["x", "y"], &["xyxYXY"]).unwrap()),
        ("z2xz3", Presentation::parse(&["a", "b"], &["aa", "bbb", "abAB"]).unwrap()),
        ("triangle237", Presentation::parse(&["a", "b"], &["aa", "bbb", "ababababababab"]).unwrap()),
    ]
}

fn apply(perm: &[usize], inv: &[usize], c: usize, letter: i32) -> usize {
    if letter > 0 {
        perm[c]
    } else {
        inv[c]
    }
}

fn invert(p: &[usize]) -> Vec<usize> {
    let mut q = vec![0; p.len()];
    for (i, &x) in p.iter().enumerate() {
        q[x] = i;
    }
    q
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for pos in 0..n {
            let mut q = p.clone();
            q.insert(pos, n - 1);
            out.push(q);
        }
    }
    out
}

/// Transitive homomorphisms to S_n, counted by brute force.
fn transitive_homs(pres: &Presentation, n: usize) -> usize {
    let perms = permutations(n);
    let k = pres.num_gens();
    let mut count = 0;
    for code in 0..perms.len().pow(k as u32) {
        let ps: Vec<&Vec<usize>> = (0..k).map(|g| &perms[code / perms.len().pow(g as u32) % perms.len()]).collect();
        let invs: Vec<Vec<usize>> = ps.iter().map(|p| invert(p)).collect();
        let relators_hold = pres.rels().iter().all(|r| {
            (0..n).all(|c| {
                let end = r.iter().fold(c, |x, &l| {
                    let g = l.unsigned_abs() as usize - 1;
                    apply(ps[g], &invs[g], x, l)
                });
                end == c
            })
        });
        if !relators_hold {
            continue;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for g in 0..k {
                for y in [ps[g][x], invs[g][x]] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        if seen.iter().all(|&s| s) {
            count += 1;
        }
    }
    count
}

#[test]
fn low_index_counts_match_permutation_oracle() {
    for (name, pres) in presentations() {
        let subs = fpgroups::low_index_subgroups(&pres, 4).unwrap();
        for n in 1..=4usize {
            let found = subs.iter().filter(|t| t.index() == n).count();
            let fact: usize = (1..n).product();
            assert_eq!(found * fact, transitive_homs(&pres, n), "{name}, index {n}");
        }
    }
}

#[test]
fn index_two_subgroups_count_mod_two_rank() {
    for (name, pres) in presentations() {
        let subs = fpgroups::low_index_subgroups(&pres, 2).unwrap();
        let index_two = subs.iter().filter(|t| t.index() == 2).count();
        let d2 = fpgroups::d_p(&pres, 2);
        assert_eq!(index_two, (1 << d2) - 1, "{name}");
    }
}

#[test]
fn d_p_does_not_depend_on_transversal() {
    for (name, pres) in presentations() {
        for t in fpgroups::low_index_subgroups(&pres, 5).unwrap() {
            let bfs = fpgroups::reidemeister_schreier_with(&t, Transversal::BreadthFirst);
            let dfs = fpgroups::reidemeister_schreier_with(&t, Transversal::DepthFirst);
            for p in [2, 3, 5] {
                assert_eq!(fpgroups::d_p(&bfs, p), fpgroups::d_p(&dfs, p), "{name}, index {}, p = {p}", t.index());
                assert_eq!(fpgroups::d_p(&bfs, p), fpgroups::d_p_smith(&bfs, p), "{name}, index {}, p = {p}", t.index());
            }
        }
    }
}

fn transitive_action(k: usize, n: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    let perm = Just((0..n).collect::<Vec<usize>>()).prop_shuffle();
    proptest::collection::vec(perm, k).prop_filter("transitive", move |ps| {
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(x) = stack.pop() {
            for p in ps {
                let inv = invert(p);
                for y in [p[x], inv[x]] {
                    if !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.iter().all(|&s| s)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    /// A subgroup of index n in a free group of rank k is free of rank n(k-1)+1.
    #[test]
    fn schreier_index_formula((k, n, action) in (1usize..=3, 1usize..=6).prop_flat_map(|(k, n)| (Just(k), Just(n), transitive_action(k, n)))) {
        let t = SubgroupTable::new(Presentation::free(k), action).unwrap();
        let sub = fpgroups::reidemeister_schreier(&t);
        prop_assert_eq!(fpgroups::free_rank(&sub), Some(n * (k - 1) + 1));
    }

    /// Both transversals give the same number of Schreier generators and
    /// the same d_2.
    #[test]
    fn rs_transversals_agree(action in transitive_action(3, 4)) {
        let pres = Presentation::free(3);
        let t = SubgroupTable::new(pres, action).unwrap();
        let a = fpgroups::reidemeister_schreier_with(&t, Transversal::BreadthFirst);
        let b = fpgroups::reidemeister_schreier_with(&t, Transversal::DepthFirst);
        prop_assert_eq!(a.num_gens(), b.num_gens());
        prop_assert_eq!(fpgroups::d_p(&a, 2), fpgroups::d_p(&b, 2));
    }
}
