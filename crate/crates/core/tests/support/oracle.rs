//! Brute-force reference implementations straight from the definitions:
//! ordered tuples of distinct vertices, filtered and multiplied out over a
//! plain weight matrix. Deliberately shares nothing with the crate's
//! enumeration code beyond reading the weights.

#![allow(dead_code)]

use itertools::Itertools;
use pathex_core::{EdgeMeasure, PatternSpec, Scalar};

pub type Matrix<T> = Vec<Vec<T>>;

pub fn matrix<T: Scalar>(mu: &EdgeMeasure<T>) -> Matrix<T> {
    let n = mu.n();
    let mut w = vec![vec![T::zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            if i != j {
                w[i][j] = mu.weight(i + 1, j + 1).unwrap().clone();
            }
        }
    }
    w
}

fn walk_product<T: Scalar>(w: &Matrix<T>, seq: &[usize]) -> T {
    seq.windows(2).fold(T::one(), |acc, e| acc * w[e[0]][e[1]].clone())
}

fn degree<T: Scalar>(w: &Matrix<T>, v: usize) -> T {
    (0..w.len()).filter(|&u| u != v).fold(T::zero(), |acc, u| acc + w[v][u].clone())
}

pub fn path<T: Scalar>(w: &Matrix<T>, m: usize) -> T {
    let n = w.len();
    let mut total = T::zero();
    for p in (0..n).permutations(m) {
        if p[0] < p[m - 1] {
            total += walk_product(w, &p);
        }
    }
    total
}

pub fn cycle<T: Scalar>(w: &Matrix<T>, m: usize) -> T {
    let n = w.len();
    let mut total = T::zero();
    for p in (0..n).permutations(m) {
        if p[0] == *p.iter().min().unwrap() && p[1] < p[m - 1] {
            total += walk_product(w, &p) * w[p[m - 1]][p[0]].clone();
        }
    }
    total
}

/// Anchors are 1-based like the public API.
pub fn anchored<T: Scalar>(w: &Matrix<T>, s: usize, t: usize, a: usize, b: usize) -> T {
    let n = w.len();
    let (a, b) = (a - 1, b - 1);
    let mut total = T::zero();
    if s + t + 2 > n {
        return total;
    }
    for p in (0..n).permutations(s + t + 2) {
        if p[0] == a && p[s + 1] == b {
            total += walk_product(w, &p[..=s]) * walk_product(w, &p[s + 1..]);
        }
    }
    total
}

/// Sum over ordered m-tuples of distinct vertices; no mass check.
pub fn rho<T: Scalar>(w: &Matrix<T>, m: usize) -> T {
    let n = w.len();
    let mut total = T::zero();
    for p in (0..n).permutations(m) {
        total += degree(w, p[0]) * walk_product(w, &p) * degree(w, p[m - 1]);
    }
    total
}

pub fn value<T: Scalar>(w: &Matrix<T>, pattern: &PatternSpec) -> T {
    match *pattern {
        PatternSpec::Path { m } => path(w, m),
        PatternSpec::Cycle { m } => cycle(w, m),
        PatternSpec::AnchoredPair { s, t, a, b } => anchored(w, s, t, a, b),
        PatternSpec::Rho { m } => rho(w, m),
    }
}

/// Central differences of the brute-force value, one entry per edge in
/// lexicographic order.
pub fn finite_difference(w: &Matrix<f64>, pattern: &PatternSpec, h: f64) -> Vec<f64> {
    let n = w.len();
    let mut out = Vec::new();
    let mut probe = w.clone();
    for i in 0..n {
        for j in i + 1..n {
            let base = w[i][j];
            probe[i][j] = base + h;
            probe[j][i] = base + h;
            let up = value(&probe, pattern);
            probe[i][j] = base - h;
            probe[j][i] = base - h;
            let down = value(&probe, pattern);
            probe[i][j] = base;
            probe[j][i] = base;
            out.push((up - down) / (2.0 * h));
        }
    }
    out
}

/// Relative error with an absolute floor for entries that vanish.
pub fn relative_error(analytic: f64, reference: f64) -> f64 {
    let scale = analytic.abs().max(reference.abs());
    if scale <= 1e-12 {
        0.0
    } else {
        (analytic - reference).abs() / scale
    }
}

/// Simple-path count from the definition: distinct ordered tuples, halved
/// by orientation.
pub fn path_count(n: usize, edges: &[(usize, usize)], k: usize) -> usize {
    let mut adj = vec![vec![false; n]; n];
    for &(i, j) in edges {
        adj[i - 1][j - 1] = true;
        adj[j - 1][i - 1] = true;
    }
    (0..n)
        .permutations(k)
        .filter(|p| p[0] < p[k - 1] && p.windows(2).all(|e| adj[e[0]][e[1]]))
        .count()
}
