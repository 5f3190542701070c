//! Exhaustive maxima of path and cycle copy counts over planar graphs on a
//! handful of vertices.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, canonical_graph, MAX_CANON_N};
use crate::error::{Error, Result};
use crate::graph::{bit, bits, enumerate_path_copies, SimpleGraph};
use crate::graph6::{from_graph6, to_graph6};
use crate::planarity::is_planar;

pub const DEFAULT_ORACLE_CAP: usize = 8;
/// Largest `n` for which every labeled graph is filtered directly.
pub const MAX_ALL_GRAPHS_N: usize = 6;
pub const MAX_WITNESSES: usize = 10;

/// A connected pattern counted in host graphs; `k` is its vertex count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum CopyPattern {
    Path(usize),
    Cycle(usize),
}

impl CopyPattern {
    pub fn vertices(&self) -> usize {
        match *self {
            CopyPattern::Path(k) | CopyPattern::Cycle(k) => k,
        }
    }

    pub fn validate_for(&self, n: usize) -> Result<()> {
        match *self {
            CopyPattern::Path(k) if k < 2 => Err(Error::InvalidPattern(format!("path needs k >= 2, got {k}"))),
            CopyPattern::Cycle(k) if k < 3 => Err(Error::InvalidPattern(format!("cycle needs k >= 3, got {k}"))),
            _ if self.vertices() > n => Err(Error::InvalidPattern(format!("{self} does not fit on {n} vertices"))),
            _ => Ok(()),
        }
    }
}

impl fmt::Display for CopyPattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CopyPattern::Path(k) => write!(f, "path({k})"),
            CopyPattern::Cycle(k) => write!(f, "cycle({k})"),
        }
    }
}

impl FromStr for CopyPattern {
    type Err = Error;

    /// Accepts `path(4)`, `path4`, `P4`, `cycle(5)`, `cycle5`, `C5`.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        let (kind, rest) = if let Some(r) = t.strip_prefix("path") {
            ("path", r)
        } else if let Some(r) = t.strip_prefix("cycle") {
            ("cycle", r)
        } else if let Some(r) = t.strip_prefix('p') {
            ("path", r)
        } else if let Some(r) = t.strip_prefix('c') {
            ("cycle", r)
        } else {
            return Err(Error::InvalidPattern(format!("unknown pattern {s:?}")));
        };
        let digits = rest.trim().trim_start_matches('(').trim_end_matches(')').trim();
        let k: usize = digits.parse().map_err(|_| Error::InvalidPattern(format!("bad size in pattern {s:?}")))?;
        Ok(if kind == "path" { CopyPattern::Path(k) } else { CopyPattern::Cycle(k) })
    }
}

impl TryFrom<String> for CopyPattern {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<CopyPattern> for String {
    fn from(p: CopyPattern) -> String {
        p.to_string()
    }
}

/// Number of `k`-cycles in `g`, each counted once.
fn count_cycles(g: &SimpleGraph, k: usize) -> u64 {
    fn extend(adj: &[u64], start: usize, v: usize, used: u64, len: usize, k: usize, second: usize, total: &mut u64) {
        if len == k {
            // close the cycle; `second < last` fixes the orientation
            if adj[v] & bit(start) != 0 && second < v {
                *total += 1;
            }
            return;
        }
        for u in bits(adj[v] & !used) {
            if u > start {
                let second = if len == 1 { u } else { second };
                extend(adj, start, u, used | bit(u), len + 1, k, second, total);
            }
        }
    }
    let adj = g.masks();
    let mut total = 0;
    for start in 0..g.n() {
        extend(adj, start, start, bit(start), 1, k, usize::MAX, &mut total);
    }
    total
}

/// Exact unlabeled copy count of `pattern` in `g`.
pub fn count_copies(g: &SimpleGraph, pattern: CopyPattern) -> Result<u64> {
    pattern.validate_for(g.n().max(pattern.vertices()))?;
    if pattern.vertices() > g.n() {
        return Ok(0);
    }
    Ok(match pattern {
        CopyPattern::Path(k) => enumerate_path_copies(g, k)?.count() as u64,
        CopyPattern::Cycle(k) => count_cycles(g, k),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    /// Every labeled graph on `n` vertices, filtered by planarity.
    AllGraphs,
    /// Edge-maximal planar graphs only, one per isomorphism class.
    MaximalPlanarOnly,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleQuery {
    pub n: usize,
    pub pattern: CopyPattern,
    #[serde(default = "default_mode")]
    pub mode: OracleMode,
    #[serde(default = "default_cap")]
    pub cap: usize,
}

fn default_mode() -> OracleMode {
    OracleMode::MaximalPlanarOnly
}

fn default_cap() -> usize {
    DEFAULT_ORACLE_CAP
}

impl OracleQuery {
    pub fn new(n: usize, pattern: CopyPattern, mode: OracleMode) -> Self {
        OracleQuery { n, pattern, mode, cap: DEFAULT_ORACLE_CAP }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::InvalidSpec("the oracle needs n >= 1".into()));
        }
        if self.n > self.cap {
            return Err(Error::ResourceLimit(format!("n = {} exceeds the oracle cap {}", self.n, self.cap)));
        }
        if self.n > MAX_CANON_N {
            return Err(Error::ResourceLimit(format!("n = {} exceeds the canonical-form limit {MAX_CANON_N}", self.n)));
        }
        if self.mode == OracleMode::AllGraphs && self.n > MAX_ALL_GRAPHS_N {
            return Err(Error::ResourceLimit(format!(
                "all-graphs mode enumerates 2^C(n,2) graphs and is limited to n <= {MAX_ALL_GRAPHS_N}"
            )));
        }
        self.pattern.validate_for(self.n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleResult {
    pub n: usize,
    pub pattern: CopyPattern,
    pub max_count: u64,
    /// Canonically labeled maximizers in graph6, sorted, at most
    /// [`MAX_WITNESSES`].
    pub witnesses: Vec<String>,
    /// Labeled graphs in all-graphs mode; isomorphism classes of
    /// triangulations in maximal mode.
    pub graphs_examined: u64,
}

/// `1–2–3` stacked: each new vertex joins the three before it.
fn stacked_triangulation(n: usize) -> SimpleGraph {
    let mut g = SimpleGraph::new(n).expect("n within limits");
    for v in 2..=n {
        for u in v.saturating_sub(3).max(1)..v {
            g.add_edge(u, v).expect("fresh edge");
        }
    }
    g
}

/// Triangulations one flip away: drop `uv`, add `wx` for common neighbours
/// `w, x` of `u, v` when the result stays planar.
fn flips(g: &SimpleGraph) -> Vec<SimpleGraph> {
    let adj = g.masks();
    let mut out = Vec::new();
    for (u, v) in g.edges() {
        let common = adj[u - 1] & adj[v - 1];
        for w in bits(common) {
            for x in bits(common >> (w + 1) << (w + 1)) {
                if adj[w] & bit(x) != 0 {
                    continue;
                }
                let mut h = g.clone();
                h.remove_edge(u, v).expect("edge present");
                h.add_edge(w + 1, x + 1).expect("edge absent");
                if is_planar(&h) {
                    out.push(h);
                }
            }
        }
    }
    out
}

/// One representative per isomorphism class of triangulations on `n`
/// vertices, in canonical form and sorted by canonical code. Diagonal flips
/// connect all triangulations with the same vertex count, so a search from
/// any one of them reaches every class.
pub fn triangulations(n: usize) -> Result<Vec<SimpleGraph>> {
    if n > MAX_CANON_N {
        return Err(Error::ResourceLimit(format!("triangulations are enumerated up to n = {MAX_CANON_N}")));
    }
    if n < 4 {
        return Ok(vec![SimpleGraph::complete(n)?]);
    }
    let start = canonical_graph(&stacked_triangulation(n));
    let mut seen: BTreeSet<u128> = BTreeSet::from([canonical_form(&start).0]);
    let mut found = vec![(canonical_form(&start).0, start.clone())];
    let mut frontier = vec![start];
    while !frontier.is_empty() {
        let mut next: Vec<(u128, SimpleGraph)> = frontier
            .par_iter()
            .flat_map_iter(|g| flips(g).into_iter().map(|h| (canonical_form(&h).0, canonical_graph(&h))))
            .collect();
        next.sort_by_key(|(c, _)| *c);
        next.dedup_by_key(|(c, _)| *c);
        frontier = Vec::new();
        for (c, h) in next {
            if seen.insert(c) {
                found.push((c, h.clone()));
                frontier.push(h);
            }
        }
    }
    found.sort_by_key(|(c, _)| *c);
    Ok(found.into_iter().map(|(_, g)| g).collect())
}

fn graph_from_mask(n: usize, pairs: &[(usize, usize)], mask: u32) -> SimpleGraph {
    let edges = pairs.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &e)| e);
    SimpleGraph::from_edges(n, edges).expect("pairs are distinct")
}

fn collect_witnesses(graphs: impl IntoIterator<Item = SimpleGraph>) -> Vec<String> {
    let unique: BTreeSet<String> = graphs.into_iter().map(|g| to_graph6(&canonical_graph(&g))).collect();
    unique.into_iter().take(MAX_WITNESSES).collect()
}

/// Maximum copy count of the pattern over planar graphs on `n` vertices.
pub fn max_copies_planar(q: &OracleQuery) -> Result<OracleResult> {
    q.validate()?;
    let n = q.n;
    let (max_count, witnesses, graphs_examined) = match q.mode {
        OracleMode::AllGraphs => {
            let pairs: Vec<(usize, usize)> = (1..=n).flat_map(|i| (i + 1..=n).map(move |j| (i, j))).collect();
            let total = 1u32 << pairs.len();
            let counts: Vec<(u32, u64)> = (0..total)
                .into_par_iter()
                .filter_map(|mask| {
                    let g = graph_from_mask(n, &pairs, mask);
                    is_planar(&g).then(|| (mask, count_copies(&g, q.pattern).expect("pattern validated")))
                })
                .collect();
            let best = counts.iter().map(|&(_, c)| c).max().unwrap_or(0);
            let witnesses =
                collect_witnesses(counts.iter().filter(|&&(_, c)| c == best).map(|&(mask, _)| graph_from_mask(n, &pairs, mask)));
            (best, witnesses, u64::from(total))
        }
        OracleMode::MaximalPlanarOnly => {
            let all = triangulations(n)?;
            let counts: Vec<u64> =
                all.par_iter().map(|g| count_copies(g, q.pattern).expect("pattern validated")).collect();
            let best = counts.iter().copied().max().unwrap_or(0);
            let witnesses = collect_witnesses(all.iter().zip(&counts).filter(|(_, &c)| c == best).map(|(g, _)| g.clone()));
            (best, witnesses, all.len() as u64)
        }
    };
    for w in &witnesses {
        let g = from_graph6(w)?;
        if !is_planar(&g) || count_copies(&g, q.pattern)? != max_count {
            return Err(Error::Verification(format!("witness {w} does not reproduce {max_count} copies")));
        }
    }
    Ok(OracleResult { n, pattern: q.pattern, max_count, witnesses, graphs_examined })
}
