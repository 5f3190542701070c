//! Canonical labeling for small graphs: colour refinement, then the least
//! adjacency string over all orderings inside each colour class.

use std::collections::BTreeMap;

use crate::graph::{bits, SimpleGraph};

/// Vertex limit for canonical forms (the upper triangle must fit a `u128`).
pub const MAX_CANON_N: usize = 16;

/// Upper-triangle adjacency bits under `order` (position → vertex),
/// most significant bit first in row-major order.
fn code(masks: &[u64], order: &[usize]) -> u128 {
    let n = order.len();
    let mut out = 0u128;
    for i in 0..n {
        for j in i + 1..n {
            out = out << 1 | u128::from(masks[order[i]] >> order[j] & 1 == 1);
        }
    }
    out
}

/// Stable colouring: start from degrees, repeatedly split by the multiset
/// of neighbour colours. Colours are ranks of isomorphism-invariant
/// signatures, so equal graphs get equal colourings up to relabeling.
fn refine(masks: &[u64]) -> Vec<usize> {
    let n = masks.len();
    let mut colour: Vec<usize> = masks.iter().map(|m| m.count_ones() as usize).collect();
    loop {
        let signatures: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut around: Vec<usize> = bits(masks[v]).map(|u| colour[u]).collect();
                around.sort_unstable();
                (colour[v], around)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>), usize> = {
            let mut sorted: Vec<&(usize, Vec<usize>)> = signatures.iter().collect();
            sorted.sort();
            sorted.dedup();
            sorted.into_iter().enumerate().map(|(k, s)| (s, k)).collect()
        };
        let next: Vec<usize> = signatures.iter().map(|s| ranks[s]).collect();
        let classes = |c: &[usize]| {
            let mut c = c.to_vec();
            c.sort_unstable();
            c.dedup();
            c.len()
        };
        if classes(&next) == classes(&colour) {
            return next;
        }
        colour = next;
    }
}

/// Calls `f` with every ordering of the vertices that lists colour classes
/// in increasing colour and permutes freely inside each class.
fn for_each_ordering(classes: &mut [Vec<usize>], f: &mut impl FnMut(&[usize])) {
    fn rec(classes: &mut [Vec<usize>], k: usize, prefix: &mut Vec<usize>, f: &mut impl FnMut(&[usize])) {
        if k == classes.len() {
            f(prefix);
            return;
        }
        let len = classes[k].len();
        permute(classes, k, 0, len, prefix, f);
    }
    fn permute(
        classes: &mut [Vec<usize>],
        k: usize,
        i: usize,
        len: usize,
        prefix: &mut Vec<usize>,
        f: &mut impl FnMut(&[usize]),
    ) {
        if i == len {
            let base = prefix.len();
            prefix.extend_from_slice(&classes[k]);
            rec(classes, k + 1, prefix, f);
            prefix.truncate(base);
            return;
        }
        for j in i..len {
            classes[k].swap(i, j);
            permute(classes, k, i + 1, len, prefix, f);
            classes[k].swap(i, j);
        }
    }
    rec(classes, 0, &mut Vec::new(), f);
}

/// Canonical code and the ordering realizing it. Two graphs on the same
/// vertex count are isomorphic iff their codes are equal.
pub fn canonical_form(g: &SimpleGraph) -> (u128, Vec<usize>) {
    let n = g.n();
    assert!(n <= MAX_CANON_N, "canonical forms are limited to {MAX_CANON_N} vertices");
    let masks = g.masks();
    let colour = refine(masks);
    let top = colour.iter().copied().max().map_or(0, |c| c + 1);
    let mut classes: Vec<Vec<usize>> = vec![Vec::new(); top];
    for (v, &c) in colour.iter().enumerate() {
        classes[c].push(v);
    }
    let mut best: Option<(u128, Vec<usize>)> = None;
    for_each_ordering(&mut classes, &mut |order| {
        let c = code(masks, order);
        if best.as_ref().is_none_or(|(b, _)| c < *b) {
            best = Some((c, order.to_vec()));
        }
    });
    best.unwrap_or((0, Vec::new()))
}

/// The graph relabeled so that its canonical ordering becomes `1..=n`.
pub fn canonical_graph(g: &SimpleGraph) -> SimpleGraph {
    let (_, order) = canonical_form(g);
    let mut perm = vec![0; g.n()];
    for (pos, &v) in order.iter().enumerate() {
        perm[v] = pos + 1;
    }
    g.relabel(&perm).expect("ordering is a permutation")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn isomorphic_graphs_share_a_code() {
        let p = SimpleGraph::from_edges(4, [(1, 2), (2, 3), (3, 4)]).unwrap();
        let q = SimpleGraph::from_edges(4, [(3, 1), (1, 4), (4, 2)]).unwrap();
        let star = SimpleGraph::from_edges(4, [(1, 2), (1, 3), (1, 4)]).unwrap();
        assert_eq!(canonical_form(&p).0, canonical_form(&q).0);
        assert_ne!(canonical_form(&p).0, canonical_form(&star).0);
        assert_eq!(canonical_graph(&p), canonical_graph(&q));
    }

    #[test]
    fn regular_graphs_split_correctly() {
        // C6 and two disjoint triangles are both 2-regular
        let c6 = SimpleGraph::cycle(6).unwrap();
        let two = SimpleGraph::from_edges(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)]).unwrap();
        assert_ne!(canonical_form(&c6).0, canonical_form(&two).0);
        let shifted = c6.relabel(&[3, 5, 1, 6, 2, 4]).unwrap();
        assert_eq!(canonical_form(&c6).0, canonical_form(&shifted).0);
    }
}
