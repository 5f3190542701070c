//! Planarity testing for small graphs.
//!
//! A graph is planar iff each of its biconnected blocks is. Blocks are split
//! with Tarjan's edge-stack algorithm and each non-trivial block is tested
//! with the Demoucron–Malgrange–Pertuiset path-addition algorithm: keep a
//! partial embedding as a list of facial cycles, and repeatedly route a path
//! of some not-yet-embedded fragment through a face containing all of that
//! fragment's contact vertices. A fragment with no admissible face proves
//! non-planarity; fragments with exactly one admissible face are embedded
//! first, which is what makes the greedy choice safe.

use crate::graph::{bit, bits, SimpleGraph};

pub fn is_planar(g: &SimpleGraph) -> bool {
    let n = g.n();
    let m = g.edge_count();
    if n <= 4 {
        return true;
    }
    if m > 3 * n - 6 {
        return false;
    }
    blocks(g.masks()).iter().all(|block| block_is_planar(block))
}

/// Edge sets of the biconnected components, as 0-based pairs.
fn blocks(adj: &[u64]) -> Vec<Vec<(usize, usize)>> {
    struct State<'a> {
        adj: &'a [u64],
        disc: Vec<usize>,
        low: Vec<usize>,
        time: usize,
        stack: Vec<(usize, usize)>,
        out: Vec<Vec<(usize, usize)>>,
    }

    fn dfs(st: &mut State<'_>, u: usize, parent: Option<usize>) {
        st.time += 1;
        st.disc[u] = st.time;
        st.low[u] = st.time;
        for v in bits(st.adj[u]) {
            if Some(v) == parent {
                continue;
            }
            if st.disc[v] == 0 {
                st.stack.push((u, v));
                dfs(st, v, Some(u));
                st.low[u] = st.low[u].min(st.low[v]);
                if st.low[v] >= st.disc[u] {
                    let mut block = Vec::new();
                    while let Some(e) = st.stack.pop() {
                        block.push(e);
                        if e == (u, v) {
                            break;
                        }
                    }
                    st.out.push(block);
                }
            } else if st.disc[v] < st.disc[u] {
                st.stack.push((u, v));
                st.low[u] = st.low[u].min(st.disc[v]);
            }
        }
    }

    let n = adj.len();
    let mut st = State {
        adj,
        disc: vec![0; n],
        low: vec![0; n],
        time: 0,
        stack: Vec::new(),
        out: Vec::new(),
    };
    for v in 0..n {
        if st.disc[v] == 0 {
            dfs(&mut st, v, None);
        }
    }
    st.out
}

struct Fragment {
    contacts: u64,
    /// Non-embedded vertices of the fragment; empty for a single chord.
    interior: u64,
    chord: Option<(usize, usize)>,
}

fn block_is_planar(edges: &[(usize, usize)]) -> bool {
    let mut verts = 0u64;
    for &(u, v) in edges {
        verts |= bit(u) | bit(v);
    }
    let nv = verts.count_ones() as usize;
    if nv <= 4 || edges.len() <= 3 {
        return true;
    }
    if edges.len() > 3 * nv - 6 {
        return false;
    }
    let size = 64 - verts.leading_zeros() as usize;
    let mut adj = vec![0u64; size];
    for &(u, v) in edges {
        adj[u] |= bit(v);
        adj[v] |= bit(u);
    }

    let cycle = find_cycle(&adj, edges[0]);
    let mut emb_v = 0u64;
    let mut emb_adj = vec![0u64; size];
    let mut embedded_edges = 0usize;
    for (k, &v) in cycle.iter().enumerate() {
        let w = cycle[(k + 1) % cycle.len()];
        emb_v |= bit(v);
        emb_adj[v] |= bit(w);
        emb_adj[w] |= bit(v);
        embedded_edges += 1;
    }
    let mut faces: Vec<Vec<usize>> = vec![cycle.clone(), cycle.into_iter().rev().collect()];

    while embedded_edges < edges.len() {
        let frags = fragments(&adj, &emb_adj, emb_v);
        let face_masks: Vec<u64> = faces.iter().map(|f| f.iter().fold(0, |m, &v| m | bit(v))).collect();
        let mut chosen: Option<(usize, usize)> = None;
        for (fi, frag) in frags.iter().enumerate() {
            let admissible: Vec<usize> = face_masks
                .iter()
                .enumerate()
                .filter(|(_, &fm)| frag.contacts & !fm == 0)
                .map(|(k, _)| k)
                .collect();
            match admissible.len() {
                0 => return false,
                1 => {
                    chosen = Some((fi, admissible[0]));
                    break;
                }
                _ => {
                    if chosen.is_none() {
                        chosen = Some((fi, admissible[0]));
                    }
                }
            }
        }
        let (fi, face_idx) = chosen.expect("an unembedded edge implies a fragment");
        let path = fragment_path(&adj, &frags[fi]);
        for w in path.windows(2) {
            emb_adj[w[0]] |= bit(w[1]);
            emb_adj[w[1]] |= bit(w[0]);
            embedded_edges += 1;
        }
        for &v in &path {
            emb_v |= bit(v);
        }
        let face = faces.swap_remove(face_idx);
        let (f1, f2) = split_face(&face, &path);
        faces.push(f1);
        faces.push(f2);
    }
    true
}

/// A cycle through the edge `{u, v}`, listed from `u`.
fn find_cycle(adj: &[u64], (u, v): (usize, usize)) -> Vec<usize> {
    // BFS from v to u without using the edge {u, v}.
    let mut prev = vec![usize::MAX; adj.len()];
    let mut seen = bit(v);
    let mut queue = std::collections::VecDeque::from([v]);
    while let Some(x) = queue.pop_front() {
        for y in bits(adj[x] & !seen) {
            if x == v && y == u {
                continue;
            }
            seen |= bit(y);
            prev[y] = x;
            if y == u {
                let mut cycle = vec![u];
                let mut cur = u;
                while cur != v {
                    cur = prev[cur];
                    cycle.push(cur);
                }
                return cycle;
            }
            queue.push_back(y);
        }
    }
    unreachable!("edge of a 2-connected block lies on a cycle")
}

fn fragments(adj: &[u64], emb_adj: &[u64], emb_v: u64) -> Vec<Fragment> {
    let mut out = Vec::new();
    for u in bits(emb_v) {
        for v in bits(adj[u] & emb_v & !emb_adj[u]) {
            if u < v {
                out.push(Fragment { contacts: bit(u) | bit(v), interior: 0, chord: Some((u, v)) });
            }
        }
    }
    let all: u64 = adj.iter().enumerate().filter(|(_, &m)| m != 0).fold(0, |acc, (v, _)| acc | bit(v));
    let mut rest = all & !emb_v;
    while rest != 0 {
        let seed = rest.trailing_zeros() as usize;
        let mut comp = bit(seed);
        let mut frontier = bit(seed);
        while frontier != 0 {
            let mut next = 0;
            for x in bits(frontier) {
                next |= adj[x] & !emb_v & !comp;
            }
            comp |= next;
            frontier = next;
        }
        rest &= !comp;
        let contacts = bits(comp).fold(0, |acc, x| acc | (adj[x] & emb_v));
        out.push(Fragment { contacts, interior: comp, chord: None });
    }
    out
}

/// A path through the fragment between two distinct contact vertices.
fn fragment_path(adj: &[u64], frag: &Fragment) -> Vec<usize> {
    if let Some((u, v)) = frag.chord {
        return vec![u, v];
    }
    let start = frag.contacts.trailing_zeros() as usize;
    let targets = frag.contacts & !bit(start);
    let mut prev = vec![usize::MAX; adj.len()];
    let mut seen = bit(start);
    let mut queue = std::collections::VecDeque::from([start]);
    while let Some(x) = queue.pop_front() {
        if x != start {
            if let Some(t) = bits(adj[x] & targets).next() {
                let mut path = vec![t, x];
                let mut cur = x;
                while prev[cur] != start {
                    cur = prev[cur];
                    path.push(cur);
                }
                path.push(start);
                path.reverse();
                return path;
            }
        }
        for y in bits(adj[x] & frag.interior & !seen) {
            seen |= bit(y);
            prev[y] = x;
            queue.push_back(y);
        }
    }
    unreachable!("fragment of a 2-connected block has two contacts joined through its interior")
}

/// Splits a facial cycle along a path whose endpoints lie on it.
fn split_face(face: &[usize], path: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let (a, b) = (path[0], path[path.len() - 1]);
    let len = face.len();
    let ia = face.iter().position(|&v| v == a).expect("path endpoint on face");
    let ib = face.iter().position(|&v| v == b).expect("path endpoint on face");
    let interior = &path[1..path.len() - 1];

    // a -> ... -> b along the face, then back to a along the reversed path.
    let mut f1 = Vec::new();
    let mut k = ia;
    loop {
        f1.push(face[k]);
        if k == ib {
            break;
        }
        k = (k + 1) % len;
    }
    f1.extend(interior.iter().rev());

    // b -> ... -> a along the face, then forward along the path.
    let mut f2 = Vec::new();
    let mut k = ib;
    loop {
        f2.push(face[k]);
        if k == ia {
            break;
        }
        k = (k + 1) % len;
    }
    f2.extend(interior.iter());
    (f1, f2)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kuratowski_graphs() {
        assert!(is_planar(&SimpleGraph::complete(4).unwrap()));
        assert!(!is_planar(&SimpleGraph::complete(5).unwrap()));
        assert!(!is_planar(&SimpleGraph::complete_bipartite(3, 3).unwrap()));
        assert!(is_planar(&SimpleGraph::complete_bipartite(2, 7).unwrap()));
    }

    #[test]
    fn petersen_is_not_planar() {
        // outer 5-cycle, spokes, inner pentagram
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i + 1, (i + 1) % 5 + 1));
            edges.push((i + 1, i + 6));
            edges.push((i + 6, (i + 2) % 5 + 6));
        }
        let g = SimpleGraph::from_edges(10, edges).unwrap();
        assert_eq!(g.edge_count(), 15);
        assert!(!is_planar(&g));
    }

    #[test]
    fn subdivided_k33_is_not_planar() {
        // K_{3,3} with every edge subdivided once: 15 vertices, 18 edges,
        // sparse enough to pass the edge-count filter.
        let mut edges = Vec::new();
        let mut next = 7;
        for a in 1..=3 {
            for b in 4..=6 {
                edges.push((a, next));
                edges.push((next, b));
                next += 1;
            }
        }
        let g = SimpleGraph::from_edges(15, edges).unwrap();
        assert!(!is_planar(&g));
    }

    #[test]
    fn octahedron_and_icosahedron_like() {
        // Octahedron: K6 minus a perfect matching is a triangulation.
        let mut oct = SimpleGraph::complete(6).unwrap();
        for (a, b) in [(1, 2), (3, 4), (5, 6)] {
            oct.remove_edge(a, b).unwrap();
        }
        assert!(is_planar(&oct));
        // Adding any missing edge breaks planarity (already maximal).
        let mut extra = oct.clone();
        extra.add_edge(1, 2).unwrap();
        assert!(!is_planar(&extra));
    }

    #[test]
    fn disconnected_pieces() {
        // K4 plus a disjoint K5: not planar; K4 plus disjoint K4: planar.
        let mut edges = Vec::new();
        for i in 1..=4 {
            for j in i + 1..=4 {
                edges.push((i, j));
                edges.push((i + 4, j + 4));
            }
        }
        let g = SimpleGraph::from_edges(9, edges.clone()).unwrap();
        assert!(is_planar(&g));
        for i in 5..=8 {
            edges.push((i, 9));
        }
        assert!(!is_planar(&SimpleGraph::from_edges(9, edges).unwrap()));
    }
}
