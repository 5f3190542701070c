//! Small undirected graphs on the vertex set `[n] = {1, ..., n}` and
//! enumeration of path copies inside them.
//!
//! Adjacency is stored as one `u64` bitmask per vertex, which caps graphs at
//! [`MAX_VERTICES`] vertices. Every public method speaks 1-based labels;
//! the bitmasks are 0-based internally.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

#[inline]
pub(crate) fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Iterates the set bits of a mask in increasing order.
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    n: usize,
    adj: Vec<u64>,
}

impl std::fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimpleGraph")
            .field("n", &self.n)
            .field("edges", &self.edges())
            .finish()
    }
}

impl SimpleGraph {
    /// The edgeless graph on `n` vertices.
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::ResourceLimit(format!(
                "graphs are limited to {MAX_VERTICES} vertices, got {n}"
            )));
        }
        Ok(SimpleGraph { n, adj: vec![0; n] })
    }

    /// Builds a graph from 1-based edges. Duplicate edges and self-loops are
    /// rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut g = SimpleGraph::new(n)?;
        for (i, j) in edges {
            if g.has_edge(i, j)? {
                return Err(Error::InvalidEdge(format!("duplicate edge {{{i},{j}}}")));
            }
            g.add_edge(i, j)?;
        }
        Ok(g)
    }

    pub(crate) fn from_masks(adj: Vec<u64>) -> Self {
        SimpleGraph { n: adj.len(), adj }
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = SimpleGraph::new(n)?;
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        for v in 0..n {
            g.adj[v] = all & !bit(v);
        }
        Ok(g)
    }

    /// The cycle 1-2-...-n-1.
    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::InvalidSpec(format!("a cycle needs at least 3 vertices, got {n}")));
        }
        SimpleGraph::from_edges(n, (1..=n).map(|i| (i, i % n + 1)))
    }

    /// The path 1-2-...-n.
    pub fn path(n: usize) -> Result<Self> {
        SimpleGraph::from_edges(n, (1..n).map(|i| (i, i + 1)))
    }

    /// `K_{p,q}` with parts `{1..p}` and `{p+1..p+q}`.
    pub fn complete_bipartite(p: usize, q: usize) -> Result<Self> {
        let edges = (1..=p).flat_map(|i| (p + 1..=p + q).map(move |j| (i, j)));
        SimpleGraph::from_edges(p + q, edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn check_vertex(&self, v: usize) -> Result<usize> {
        if v == 0 || v > self.n {
            Err(Error::InvalidVertex { vertex: v, n: self.n })
        } else {
            Ok(v - 1)
        }
    }

    /// Adds the edge `{i, j}`; adding an existing edge is a no-op.
    pub fn add_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let (a, b) = (self.check_vertex(i)?, self.check_vertex(j)?);
        if a == b {
            return Err(Error::InvalidEdge(format!("self-loop at {i}")));
        }
        self.adj[a] |= bit(b);
        self.adj[b] |= bit(a);
        Ok(())
    }

    pub fn remove_edge(&mut self, i: usize, j: usize) -> Result<()> {
        let (a, b) = (self.check_vertex(i)?, self.check_vertex(j)?);
        self.adj[a] &= !bit(b);
        self.adj[b] &= !bit(a);
        Ok(())
    }

    pub fn has_edge(&self, i: usize, j: usize) -> Result<bool> {
        let (a, b) = (self.check_vertex(i)?, self.check_vertex(j)?);
        Ok(self.adj[a] & bit(b) != 0)
    }

    pub fn degree(&self, v: usize) -> Result<usize> {
        Ok(self.adj[self.check_vertex(v)?].count_ones() as usize)
    }

    /// Neighbours of `v` in increasing order.
    pub fn neighbors(&self, v: usize) -> Result<Vec<usize>> {
        Ok(bits(self.adj[self.check_vertex(v)?]).map(|u| u + 1).collect())
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// All edges `(i, j)` with `i < j`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..self.n {
            for b in bits(self.adj[a] >> a >> 1) {
                out.push((a + 1, a + b + 2));
            }
        }
        out
    }

    pub(crate) fn masks(&self) -> &[u64] {
        &self.adj
    }

    /// Relabels vertex `v` as `perm[v - 1]`. `perm` must be a permutation of
    /// `1..=n`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        check_permutation(perm, self.n)?;
        SimpleGraph::from_edges(self.n, self.edges().into_iter().map(|(i, j)| (perm[i - 1], perm[j - 1])))
    }

    pub fn to_edge_list(&self) -> EdgeListJson {
        EdgeListJson {
            n: self.n,
            edges: self.edges().into_iter().map(|(i, j)| [i, j]).collect(),
        }
    }

    pub fn from_edge_list(doc: &EdgeListJson) -> Result<Self> {
        SimpleGraph::from_edges(doc.n, doc.edges.iter().map(|e| (e[0], e[1])))
    }
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    let mut seen = vec![false; n];
    if perm.len() != n {
        return Err(Error::InvalidSpec(format!("permutation has length {}, expected {n}", perm.len())));
    }
    for &p in perm {
        if p == 0 || p > n || seen[p - 1] {
            return Err(Error::InvalidSpec(format!("{perm:?} is not a permutation of 1..={n}")));
        }
        seen[p - 1] = true;
    }
    Ok(())
}

/// JSON edge-list form `{"n": 4, "edges": [[1, 2], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeListJson {
    pub n: usize,
    pub edges: Vec<[usize; 2]>,
}

/// One unlabeled copy of a path, stored in the orientation whose first
/// vertex is smaller than its last.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PathCopy {
    vertices: Vec<usize>,
}

impl PathCopy {
    /// Normalizes the orientation of a sequence of pairwise distinct vertices.
    pub fn new(mut vertices: Vec<usize>) -> Result<Self> {
        let mut sorted = vertices.clone();
        sorted.sort_unstable();
        if sorted.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidPattern(format!("path vertices {vertices:?} repeat")));
        }
        if vertices.len() >= 2 && vertices[0] > vertices[vertices.len() - 1] {
            vertices.reverse();
        }
        Ok(PathCopy { vertices })
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn is_canonical(&self) -> bool {
        self.vertices.len() < 2 || self.vertices[0] < self.vertices[self.vertices.len() - 1]
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

/// Lazy depth-first enumeration of unlabeled `P_k` copies.
pub struct PathCopies<'g> {
    adj: &'g [u64],
    k: usize,
    path: Vec<usize>,
    cands: Vec<u64>,
    used: u64,
    next_start: usize,
}

impl Iterator for PathCopies<'_> {
    type Item = PathCopy;

    fn next(&mut self) -> Option<PathCopy> {
        loop {
            if self.path.is_empty() {
                if self.next_start >= self.adj.len() {
                    return None;
                }
                let s = self.next_start;
                self.next_start += 1;
                self.path.push(s);
                self.used = bit(s);
                self.cands.push(self.adj[s]);
                continue;
            }
            if self.path.len() == self.k {
                let emit = self.path[0] < self.path[self.k - 1];
                let out = emit.then(|| PathCopy {
                    vertices: self.path.iter().map(|v| v + 1).collect(),
                });
                self.pop();
                if out.is_some() {
                    return out;
                }
                continue;
            }
            let top = self.cands.last_mut().expect("candidate stack tracks path");
            if *top == 0 {
                self.pop();
                continue;
            }
            let v = top.trailing_zeros() as usize;
            *top &= *top - 1;
            self.path.push(v);
            self.used |= bit(v);
            self.cands.push(self.adj[v] & !self.used);
        }
    }
}

impl PathCopies<'_> {
    fn pop(&mut self) {
        if let Some(v) = self.path.pop() {
            self.used &= !bit(v);
            self.cands.pop();
        }
    }
}

/// Streams every unlabeled copy of the path on `k` vertices in `g`, each
/// exactly once, in lexicographic order of the DFS.
pub fn enumerate_path_copies(g: &SimpleGraph, k: usize) -> Result<PathCopies<'_>> {
    if k < 2 {
        return Err(Error::InvalidPattern(format!("a path needs at least 2 vertices, got k = {k}")));
    }
    Ok(PathCopies {
        adj: g.masks(),
        k,
        path: Vec::with_capacity(k),
        cands: Vec::with_capacity(k),
        used: 0,
        next_start: 0,
    })
}

/// A copy of `P_(s,t)`: an `s`-edge path starting at the first anchor and a
/// vertex-disjoint `t`-edge path starting at the second anchor.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AnchoredPairCopy {
    pub first: Vec<usize>,
    pub second: Vec<usize>,
}

impl AnchoredPairCopy {
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.first
            .windows(2)
            .chain(self.second.windows(2))
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }
}

/// Depth-first visit of labeled simple paths with `k` vertices starting at
/// `start`, never touching `forbidden`. The callback sees 0-based vertices.
pub(crate) fn visit_paths_from(
    adj: &[u64],
    start: usize,
    k: usize,
    forbidden: u64,
    f: &mut dyn FnMut(&[usize], u64),
) {
    fn go(adj: &[u64], path: &mut Vec<usize>, used: u64, k: usize, forbidden: u64, f: &mut dyn FnMut(&[usize], u64)) {
        if path.len() == k {
            f(path, used);
            return;
        }
        let last = *path.last().expect("non-empty path");
        for v in bits(adj[last] & !used & !forbidden) {
            path.push(v);
            go(adj, path, used | bit(v), k, forbidden, f);
            path.pop();
        }
    }
    if forbidden & bit(start) != 0 || k == 0 {
        return;
    }
    let mut path = Vec::with_capacity(k);
    path.push(start);
    go(adj, &mut path, bit(start), k, forbidden, f);
}

/// Every copy of `P_(s,t)` in `g` whose `s`-edge path starts at `a` and whose
/// `t`-edge path starts at `b`. For `s = t = 0` this is the single copy
/// `{a, b}`.
pub fn enumerate_anchored_pair_copies(
    g: &SimpleGraph,
    s: usize,
    t: usize,
    a: usize,
    b: usize,
) -> Result<std::vec::IntoIter<AnchoredPairCopy>> {
    let (ia, ib) = (g.check_vertex(a)?, g.check_vertex(b)?);
    if ia == ib {
        return Err(Error::InvalidAnchor(a));
    }
    let adj = g.masks();
    let mut out = Vec::new();
    visit_paths_from(adj, ia, s + 1, bit(ib), &mut |first, used| {
        let first: Vec<usize> = first.iter().map(|v| v + 1).collect();
        visit_paths_from(adj, ib, t + 1, used, &mut |second, _| {
            out.push(AnchoredPairCopy {
                first: first.clone(),
                second: second.iter().map(|v| v + 1).collect(),
            });
        });
    });
    Ok(out.into_iter())
}
