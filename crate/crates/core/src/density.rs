//! Path, cycle, anchored-pair and walk densities of an edge measure, and
//! their exact gradients.
//!
//! All four objectives are polynomials in the edge weights with nonnegative
//! coefficients. Values are computed by enumerating copies inside the support
//! of the measure. Gradients enumerate copies of `K_n` that use at most one
//! zero-weight edge, since any copy with two or more zero edges contributes
//! nothing to any partial derivative.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, bits};
use crate::measure::{pair_index, EdgeMeasure, Scalar};

/// A density objective.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum PatternSpec {
    /// The path with `m` vertices.
    Path { m: usize },
    /// An `s`-edge path from `a` and a vertex-disjoint `t`-edge path from `b`.
    AnchoredPair { s: usize, t: usize, a: usize, b: usize },
    /// The cycle with `m` vertices.
    Cycle { m: usize },
    /// The walk functional over ordered `m`-tuples of distinct vertices.
    Rho { m: usize },
}

impl PatternSpec {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PatternSpec::Path { m } if m < 2 => Err(Error::InvalidPattern(format!("path needs m >= 2, got {m}"))),
            PatternSpec::Cycle { m } if m < 3 => Err(Error::InvalidPattern(format!("cycle needs m >= 3, got {m}"))),
            PatternSpec::Rho { m } if m < 2 => Err(Error::InvalidPattern(format!("rho needs m >= 2, got {m}"))),
            PatternSpec::AnchoredPair { a, b, .. } if a == b => Err(Error::InvalidAnchor(a)),
            PatternSpec::AnchoredPair { a, b, .. } if a == 0 || b == 0 => {
                Err(Error::InvalidPattern("anchors are 1-based vertex labels".into()))
            }
            _ => Ok(()),
        }
    }

    /// Validates the pattern and checks that its anchors exist in `K_n`.
    pub fn validate_for(&self, n: usize) -> Result<()> {
        self.validate()?;
        if let PatternSpec::AnchoredPair { a, b, .. } = *self {
            for v in [a, b] {
                if v > n {
                    return Err(Error::InvalidVertex { vertex: v, n });
                }
            }
        }
        Ok(())
    }

    /// Total degree of the objective polynomial.
    pub fn degree(&self) -> usize {
        match *self {
            PatternSpec::Path { m } => m - 1,
            PatternSpec::Cycle { m } => m,
            PatternSpec::AnchoredPair { s, t, .. } => s + t,
            PatternSpec::Rho { m } => m + 1,
        }
    }

    /// Paths, cycles and anchored pairs use each edge at most once per copy.
    pub fn is_multilinear(&self) -> bool {
        !matches!(self, PatternSpec::Rho { .. })
    }
}

impl std::fmt::Display for PatternSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match *self {
            PatternSpec::Path { m } => write!(f, "path({m})"),
            PatternSpec::Cycle { m } => write!(f, "cycle({m})"),
            PatternSpec::Rho { m } => write!(f, "rho({m})"),
            PatternSpec::AnchoredPair { s, t, a, b } => write!(f, "anchored-pair({s},{t};{a},{b})"),
        }
    }
}

/// Partial derivatives of a density with respect to every edge weight of
/// `K_n`, in lexicographic edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientVector<T> {
    n: usize,
    partial: Vec<T>,
}

impl<T: Scalar> GradientVector<T> {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn partials(&self) -> &[T] {
        &self.partial
    }

    pub fn into_partials(self) -> Vec<T> {
        self.partial
    }

    pub fn get(&self, i: usize, j: usize) -> Result<&T> {
        if i == 0 || j == 0 || i > self.n || j > self.n || i == j {
            return Err(Error::InvalidEdge(format!("{{{i},{j}}} is not an edge of K_{}", self.n)));
        }
        let (a, b) = (i.min(j) - 1, i.max(j) - 1);
        Ok(&self.partial[pair_index(self.n, a, b)])
    }
}

/// Depth-first copy enumeration over `K_n` where stepping along an edge
/// outside the support spends one unit of `budget`.
struct Walker {
    n: usize,
    positive: Vec<u64>,
    all: u64,
    budget: usize,
}

impl Walker {
    fn new<T: Scalar>(mu: &EdgeMeasure<T>, budget: usize) -> Self {
        let n = mu.n();
        let all = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
        Walker { n, positive: mu.support_masks(), all, budget }
    }

    #[inline]
    fn cost(&self, u: usize, v: usize) -> usize {
        usize::from(self.positive[u] & bit(v) == 0)
    }

    /// Labeled simple paths with `k` vertices from `start` avoiding
    /// `forbidden`. The callback receives the path, its vertex mask, and the
    /// number of zero edges spent so far (including `spent`).
    fn paths_from(&self, start: usize, k: usize, forbidden: u64, spent: usize, f: &mut dyn FnMut(&[usize], u64, usize)) {
        if k == 0 || forbidden & bit(start) != 0 {
            return;
        }
        let mut path = Vec::with_capacity(k);
        path.push(start);
        self.extend(&mut path, bit(start), k, forbidden, spent, f);
    }

    fn extend(&self, path: &mut Vec<usize>, used: u64, k: usize, forbidden: u64, spent: usize, f: &mut dyn FnMut(&[usize], u64, usize)) {
        if path.len() == k {
            f(path, used, spent);
            return;
        }
        let last = path[path.len() - 1];
        let cands = if spent < self.budget {
            self.all & !used & !forbidden & !bit(last)
        } else {
            self.positive[last] & !used & !forbidden
        };
        for v in bits(cands) {
            let spent = spent + self.cost(last, v);
            path.push(v);
            self.extend(path, used | bit(v), k, forbidden, spent, f);
            path.pop();
        }
    }

    #[inline]
    fn edge(&self, u: usize, v: usize) -> usize {
        pair_index(self.n, u.min(v), u.max(v))
    }

    /// Every copy of a multilinear pattern, reported as its edge indices.
    fn copies(&self, pattern: &PatternSpec, avoid: u64, f: &mut dyn FnMut(&[usize])) {
        let mut edges = Vec::new();
        match *pattern {
            PatternSpec::Path { m } => {
                for start in bits(self.all & !avoid) {
                    self.paths_from(start, m, avoid, 0, &mut |p, _, _| {
                        if p[0] < p[m - 1] {
                            edges.clear();
                            edges.extend(p.windows(2).map(|w| self.edge(w[0], w[1])));
                            f(&edges);
                        }
                    });
                }
            }
            PatternSpec::Cycle { m } => {
                for s in bits(self.all & !avoid) {
                    let below = bit(s) - 1;
                    self.paths_from(s, m, avoid | below, 0, &mut |p, _, spent| {
                        let last = p[m - 1];
                        if p[1] < last && spent + self.cost(last, s) <= self.budget {
                            edges.clear();
                            edges.extend(p.windows(2).map(|w| self.edge(w[0], w[1])));
                            edges.push(self.edge(last, s));
                            f(&edges);
                        }
                    });
                }
            }
            PatternSpec::AnchoredPair { s, t, a, b } => {
                let (a, b) = (a - 1, b - 1);
                self.paths_from(a, s + 1, avoid | bit(b), 0, &mut |first, used, spent| {
                    self.paths_from(b, t + 1, avoid | used, spent, &mut |second, _, _| {
                        edges.clear();
                        edges.extend(first.windows(2).map(|w| self.edge(w[0], w[1])));
                        edges.extend(second.windows(2).map(|w| self.edge(w[0], w[1])));
                        f(&edges);
                    });
                });
            }
            PatternSpec::Rho { .. } => unreachable!("rho is handled separately"),
        }
    }
}

fn product<T: Scalar>(w: &[T], edges: &[usize]) -> T {
    edges.iter().fold(T::one(), |acc, &e| acc * w[e].clone())
}

fn multilinear_value<T: Scalar>(mu: &EdgeMeasure<T>, pattern: &PatternSpec, avoid: u64) -> T {
    let walker = Walker::new(mu, 0);
    let w = mu.weights();
    let mut total = T::zero();
    walker.copies(pattern, avoid, &mut |edges| total += product(w, edges));
    total
}

/// Adds `∂(∏_{e ∈ edges} w_e)/∂w_e` for every edge of one copy.
fn add_copy_partials<T: Scalar>(w: &[T], edges: &[usize], scale: &T, grad: &mut [T]) {
    let zeros: Vec<usize> = edges.iter().copied().filter(|&e| w[e] == T::zero()).collect();
    match zeros.len() {
        0 => {
            // prefix/suffix products avoid dividing by the weight
            let k = edges.len();
            let mut suffix = vec![T::one(); k + 1];
            for i in (0..k).rev() {
                suffix[i] = suffix[i + 1].clone() * w[edges[i]].clone();
            }
            let mut prefix = scale.clone();
            for i in 0..k {
                grad[edges[i]] += prefix.clone() * suffix[i + 1].clone();
                prefix = prefix * w[edges[i]].clone();
            }
        }
        1 => {
            let z = zeros[0];
            let rest = edges.iter().filter(|&&e| e != z).fold(scale.clone(), |acc, &e| acc * w[e].clone());
            grad[z] += rest;
        }
        _ => {}
    }
}

fn multilinear_gradient<T: Scalar>(mu: &EdgeMeasure<T>, pattern: &PatternSpec) -> Vec<T> {
    let walker = Walker::new(mu, 1);
    let w = mu.weights();
    let mut grad = vec![T::zero(); w.len()];
    let one = T::one();
    walker.copies(pattern, 0, &mut |edges| add_copy_partials(w, edges, &one, &mut grad));
    grad
}

/// `Σ_{x ∈ (n)_m} μ̄(x_1) (∏ μ(x_i, x_{i+1})) μ̄(x_m)` without checking the
/// mass, i.e. the polynomial whose restriction to the simplex is ρ.
fn rho_value<T: Scalar>(mu: &EdgeMeasure<T>, m: usize) -> T {
    let walker = Walker::new(mu, 0);
    let w = mu.weights();
    let deg = mu.weighted_degrees();
    let mut total = T::zero();
    let mut edges = Vec::with_capacity(m);
    for start in 0..mu.n() {
        walker.paths_from(start, m, 0, 0, &mut |p, _, _| {
            edges.clear();
            edges.extend(p.windows(2).map(|x| walker.edge(x[0], x[1])));
            total += deg[p[0]].clone() * product(w, &edges) * deg[p[m - 1]].clone();
        });
    }
    total
}

fn rho_gradient<T: Scalar>(mu: &EdgeMeasure<T>, m: usize) -> Vec<T> {
    let n = mu.n();
    let walker = Walker::new(mu, 1);
    let w = mu.weights();
    let deg = mu.weighted_degrees();
    let mut grad = vec![T::zero(); w.len()];
    // endpoint[v]: derivative mass routed through μ̄(v) by walks ending at v
    let mut endpoint = vec![T::zero(); n];
    let mut edges = Vec::with_capacity(m);
    for start in 0..n {
        walker.paths_from(start, m, 0, 0, &mut |p, _, spent| {
            let (first, last) = (p[0], p[m - 1]);
            edges.clear();
            edges.extend(p.windows(2).map(|x| walker.edge(x[0], x[1])));
            let ends = deg[first].clone() * deg[last].clone();
            add_copy_partials(w, &edges, &ends, &mut grad);
            if spent == 0 {
                let inner = product(w, &edges);
                endpoint[first] += inner.clone() * deg[last].clone();
                endpoint[last] += inner * deg[first].clone();
            }
        });
    }
    for (k, (a, b)) in crate::measure::pairs(n).into_iter().enumerate() {
        grad[k] += endpoint[a].clone() + endpoint[b].clone();
    }
    grad
}

fn check_probability<T: Scalar>(mu: &EdgeMeasure<T>) -> Result<()> {
    if mu.is_probability() {
        Ok(())
    } else {
        Err(Error::NonProbabilityMeasure { mass: mu.mass().to_f64() })
    }
}

pub fn weighted_degree<T: Scalar>(mu: &EdgeMeasure<T>, x: usize) -> Result<T> {
    mu.weighted_degree(x)
}

/// Sum over unlabeled copies of a path or cycle in `K_n` of the product of
/// their edge weights.
pub fn beta_density<T: Scalar>(mu: &EdgeMeasure<T>, pattern: &PatternSpec) -> Result<T> {
    pattern.validate()?;
    match pattern {
        PatternSpec::Path { .. } | PatternSpec::Cycle { .. } => Ok(multilinear_value(mu, pattern, 0)),
        other => Err(Error::InvalidPattern(format!("beta is defined for paths and cycles, not {other}"))),
    }
}

/// Anchored disjoint path-pair density; the mass of `mu` is unrestricted.
pub fn beta_star_density<T: Scalar>(mu: &EdgeMeasure<T>, s: usize, t: usize, a: usize, b: usize) -> Result<T> {
    let pattern = PatternSpec::AnchoredPair { s, t, a, b };
    pattern.validate_for(mu.n())?;
    Ok(multilinear_value(mu, &pattern, 0))
}

/// Anchored pair density counting only copies that avoid the 1-based
/// vertices in `avoid`.
pub(crate) fn beta_star_avoiding<T: Scalar>(mu: &EdgeMeasure<T>, s: usize, t: usize, a: usize, b: usize, avoid: &[usize]) -> T {
    let mask = avoid.iter().fold(0u64, |m, &v| m | bit(v - 1));
    if mask & (bit(a - 1) | bit(b - 1)) != 0 {
        return T::zero();
    }
    multilinear_value(mu, &PatternSpec::AnchoredPair { s, t, a, b }, mask)
}

/// The walk density over ordered `m`-tuples; `mu` must be a probability
/// measure.
pub fn rho_density<T: Scalar>(mu: &EdgeMeasure<T>, m: usize) -> Result<T> {
    PatternSpec::Rho { m }.validate()?;
    check_probability(mu)?;
    Ok(rho_value(mu, m))
}

/// Evaluates any pattern, enforcing the probability constraint for ρ.
pub fn density<T: Scalar>(mu: &EdgeMeasure<T>, pattern: &PatternSpec) -> Result<T> {
    match *pattern {
        PatternSpec::Rho { m } => rho_density(mu, m),
        PatternSpec::AnchoredPair { s, t, a, b } => beta_star_density(mu, s, t, a, b),
        _ => beta_density(mu, pattern),
    }
}

/// The objective polynomial at an arbitrary nonnegative weight vector (no
/// mass check, so ρ can be probed off the simplex).
pub fn polynomial_value<T: Scalar>(mu: &EdgeMeasure<T>, pattern: &PatternSpec) -> Result<T> {
    pattern.validate_for(mu.n())?;
    Ok(match *pattern {
        PatternSpec::Rho { m } => rho_value(mu, m),
        _ => multilinear_value(mu, pattern, 0),
    })
}

/// Exact partial derivatives of the objective polynomial at `mu`.
pub fn gradient<T: Scalar>(mu: &EdgeMeasure<T>, pattern: &PatternSpec) -> Result<GradientVector<T>> {
    pattern.validate_for(mu.n())?;
    let partial = match *pattern {
        PatternSpec::Rho { m } => rho_gradient(mu, m),
        _ => multilinear_gradient(mu, pattern),
    };
    Ok(GradientVector { n: mu.n(), partial })
}

/// For each 0-based vertex `x`, `Σ_{P ∋ x} deg_P(x) μ(P)` over unlabeled
/// copies `P` of the path with `m` vertices.
pub(crate) fn path_vertex_load<T: Scalar>(mu: &EdgeMeasure<T>, m: usize) -> Vec<T> {
    let walker = Walker::new(mu, 0);
    let w = mu.weights();
    let mut load = vec![T::zero(); mu.n()];
    let mut edges = Vec::with_capacity(m);
    for start in 0..mu.n() {
        walker.paths_from(start, m, 0, 0, &mut |p, _, _| {
            if p[0] < p[m - 1] {
                edges.clear();
                edges.extend(p.windows(2).map(|x| walker.edge(x[0], x[1])));
                let weight = product(w, &edges);
                for (k, &v) in p.iter().enumerate() {
                    let d = if k == 0 || k == m - 1 { 1 } else { 2 };
                    load[v] += weight.clone() * T::from_usize(d);
                }
            }
        });
    }
    load
}
