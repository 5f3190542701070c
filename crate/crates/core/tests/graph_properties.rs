#[path = "support/oracle.rs"]
mod oracle;

use pathex_core::graph6::{from_graph6, to_graph6};
use pathex_core::{enumerate_anchored_pair_copies, enumerate_path_copies, is_planar, SimpleGraph};
use proptest::prelude::*;

fn graph_strategy(max_n: usize) -> impl Strategy<Value = SimpleGraph> {
    (1..=max_n).prop_flat_map(|n| {
        prop::collection::vec(any::<bool>(), n * (n - 1) / 2).prop_map(move |bits| {
            let mut g = SimpleGraph::new(n).unwrap();
            let mut k = 0;
            for i in 1..=n {
                for j in i + 1..=n {
                    if bits[k] {
                        g.add_edge(i, j).unwrap();
                    }
                    k += 1;
                }
            }
            g
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
}

fn factorial(n: usize) -> usize {
    (1..=n).product()
}

#[test]
fn complete_graph_path_counts() {
    for n in 2..=7 {
        let kn = SimpleGraph::complete(n).unwrap();
        for k in 2..=n {
            let expected = factorial(n) / (2 * factorial(n - k));
            assert_eq!(enumerate_path_copies(&kn, k).unwrap().count(), expected, "K_{n}, k={k}");
        }
    }
}

#[test]
fn labeled_planar_graph_counts() {
    // Counts of labeled planar graphs on 5 and 6 vertices, cross-checked
    // against networkx's planarity test over all 2^C(n,2) edge sets.
    for (n, expected) in [(5usize, 1023usize), (6, 32071)] {
        let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
        let planar = (0u32..1 << pairs.len())
            .filter(|mask| {
                let edges = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e);
                is_planar(&SimpleGraph::from_edges(n, edges).unwrap())
            })
            .count();
        assert_eq!(planar, expected, "n = {n}");
    }
}

proptest! {
    #[test]
    fn path_counts_match_brute_force(g in graph_strategy(7), k in 2..=5usize) {
        let fast = enumerate_path_copies(&g, k).unwrap().count();
        prop_assert_eq!(fast, oracle::path_count(g.n(), &g.edges(), k));
    }

    #[test]
    fn path_counts_are_isomorphism_invariant(
        (g, perm) in graph_strategy(8).prop_flat_map(|g| { let n = g.n(); (Just(g), permutation(n)) }),
        k in 2..=5usize,
    ) {
        let relabeled = g.relabel(&perm).unwrap();
        prop_assert_eq!(
            enumerate_path_copies(&g, k).unwrap().count(),
            enumerate_path_copies(&relabeled, k).unwrap().count()
        );
    }

    #[test]
    fn path_copies_are_distinct_and_canonical(g in graph_strategy(7), k in 2..=5usize) {
        let copies: Vec<_> = enumerate_path_copies(&g, k).unwrap().collect();
        let mut sorted = copies.clone();
        sorted.sort();
        sorted.dedup();
        prop_assert_eq!(sorted.len(), copies.len());
        for c in &copies {
            prop_assert!(c.is_canonical());
            for (i, j) in c.edges() {
                prop_assert!(g.has_edge(i, j).unwrap());
            }
        }
    }

    #[test]
    fn anchored_pairs_swap_bijectively(g in graph_strategy(7), s in 0..=3usize, t in 0..=3usize) {
        let n = g.n();
        prop_assume!(n >= 2);
        let forward: Vec<_> = enumerate_anchored_pair_copies(&g, s, t, 1, n).unwrap().collect();
        let mut swapped: Vec<_> = enumerate_anchored_pair_copies(&g, t, s, n, 1)
            .unwrap()
            .map(|c| (c.second, c.first))
            .collect();
        let mut forward: Vec<_> = forward.into_iter().map(|c| (c.first, c.second)).collect();
        forward.sort();
        swapped.sort();
        prop_assert_eq!(forward, swapped);
    }

    #[test]
    fn tiny_graphs_are_planar(g in graph_strategy(4)) {
        prop_assert!(is_planar(&g));
    }

    #[test]
    fn kuratowski_supergraphs_are_not_planar(
        extra in prop::collection::vec((1..=9usize, 1..=9usize), 0..12),
        use_k33 in any::<bool>(),
        perm in permutation(9),
    ) {
        let mut g = if use_k33 {
            let mut g = SimpleGraph::new(9).unwrap();
            for a in 1..=3 { for b in 4..=6 { g.add_edge(a, b).unwrap(); } }
            g
        } else {
            let mut g = SimpleGraph::new(9).unwrap();
            for a in 1..=5 { for b in a + 1..=5 { g.add_edge(a, b).unwrap(); } }
            g
        };
        for (i, j) in extra {
            if i != j { g.add_edge(i, j).unwrap(); }
        }
        prop_assert!(!is_planar(&g.relabel(&perm).unwrap()));
    }

    #[test]
    fn stacked_triangulations_are_planar(choices in prop::collection::vec(any::<prop::sample::Index>(), 0..10), drop in any::<prop::sample::Index>()) {
        // grow a triangulation by inserting vertices into random faces
        let mut faces = vec![(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)];
        let mut edges = vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
        let mut n = 4;
        for c in choices {
            let (a, b, d) = faces.swap_remove(c.index(faces.len()));
            n += 1;
            edges.extend([(a, n), (b, n), (d, n)]);
            faces.extend([(a, b, n), (a, d, n), (b, d, n)]);
        }
        let g = SimpleGraph::from_edges(n, edges.clone()).unwrap();
        prop_assert_eq!(g.edge_count(), 3 * n - 6);
        prop_assert!(is_planar(&g));
        edges.swap_remove(drop.index(edges.len()));
        prop_assert!(is_planar(&SimpleGraph::from_edges(n, edges).unwrap()));
    }

    #[test]
    fn graph6_round_trip(g in graph_strategy(20)) {
        let s = to_graph6(&g);
        prop_assert_eq!(from_graph6(&s).unwrap(), g);
    }
}
