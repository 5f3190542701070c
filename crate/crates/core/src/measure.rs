//! Edge measures on `K_n` and the scalar types they are evaluated in.

use std::fmt::Debug;
use std::ops::{Add, AddAssign, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{bit, SimpleGraph, MAX_VERTICES};

pub type Rational = BigRational;

/// Absolute tolerance for "mass = 1" in floating point.
pub const FLOAT_MASS_TOLERANCE: f64 = 1e-9;

/// Arithmetic backend for densities: `f64` for optimization, [`Rational`]
/// for exact fixtures.
pub trait Scalar:
    Clone
    + Debug
    + PartialOrd
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + AddAssign
    + Send
    + Sync
    + 'static
{
    /// `"float"` or `"exact"`, as recorded in reports.
    const MODE: &'static str;

    fn from_usize(v: usize) -> Self;
    fn to_f64(&self) -> f64;
    /// Equality up to the backend's mass tolerance.
    fn approx_eq(&self, other: &Self) -> bool;
    fn to_json(&self) -> Value;
    fn from_json(v: &Value) -> Result<Self>;
}

impl Scalar for f64 {
    const MODE: &'static str = "float";

    fn from_usize(v: usize) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn approx_eq(&self, other: &Self) -> bool {
        (self - other).abs() <= FLOAT_MASS_TOLERANCE
    }

    fn to_json(&self) -> Value {
        Value::from(*self)
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::Number(x) => x.as_f64().ok_or_else(|| Error::InvalidMeasure(format!("{x} is not a float"))),
            Value::String(s) => Ok(Scalar::to_f64(&parse_rational(s)?)),
            other => Err(Error::InvalidMeasure(format!("weight {other} is neither a number nor a string"))),
        }
    }
}

impl Scalar for Rational {
    const MODE: &'static str = "exact";

    fn from_usize(v: usize) -> Self {
        Rational::from_integer(BigInt::from(v))
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn approx_eq(&self, other: &Self) -> bool {
        self == other
    }

    fn to_json(&self) -> Value {
        Value::String(self.to_string())
    }

    fn from_json(v: &Value) -> Result<Self> {
        match v {
            Value::String(s) => parse_rational(s),
            Value::Number(x) => parse_rational(&x.to_string()),
            other => Err(Error::InvalidMeasure(format!("weight {other} is neither a number nor a string"))),
        }
    }
}

/// Parses `"p/q"`, an integer, or a terminating decimal such as `"0.125"`
/// into an exact rational.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let bad = || Error::InvalidMeasure(format!("cannot parse {s:?} as an exact rational"));
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| bad())?;
        let q: BigInt = q.trim().parse().map_err(|_| bad())?;
        if q.is_zero() {
            return Err(bad());
        }
        return Ok(Rational::new(p, q));
    }
    let (neg, body) = match s.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, s),
    };
    let (int, frac) = body.split_once('.').unwrap_or((body, ""));
    if int.is_empty() && frac.is_empty() {
        return Err(bad());
    }
    if !int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let digits: BigInt = format!("{int}{frac}").parse().map_err(|_| bad())?;
    let denom = num_traits::pow(BigInt::from(10u32), frac.len());
    let r = Rational::new(digits, denom);
    Ok(if neg { -r } else { r })
}

/// Position of the 0-based pair `a < b` in the lexicographic edge order of
/// `K_n`.
#[inline]
pub(crate) fn pair_index(n: usize, a: usize, b: usize) -> usize {
    debug_assert!(a < b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// 0-based edges of `K_n` in index order.
pub(crate) fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|a| (a + 1..n).map(move |b| (a, b))).collect()
}

/// Nonnegative weights on the edges of `K_n`, stored densely in
/// lexicographic edge order.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeMeasure<T> {
    n: usize,
    weights: Vec<T>,
}

impl<T: Scalar> EdgeMeasure<T> {
    pub fn zero(n: usize) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::ResourceLimit(format!(
                "measures are limited to {MAX_VERTICES} vertices, got {n}"
            )));
        }
        Ok(EdgeMeasure { n, weights: vec![T::zero(); n * n.saturating_sub(1) / 2] })
    }

    /// Takes weights in lexicographic edge order (`{1,2}, {1,3}, ..., {n-1,n}`).
    pub fn from_weights(n: usize, weights: Vec<T>) -> Result<Self> {
        let mut mu = EdgeMeasure::zero(n)?;
        if weights.len() != mu.weights.len() {
            return Err(Error::InvalidMeasure(format!(
                "K_{n} has {} edges, got {} weights",
                mu.weights.len(),
                weights.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| **w < T::zero()) {
            return Err(Error::InvalidMeasure(format!("negative weight {w:?}")));
        }
        mu.weights = weights;
        Ok(mu)
    }

    /// Builds a measure from 1-based `(i, j, weight)` entries; unlisted edges
    /// get weight zero and repeated edges are rejected.
    pub fn from_entries<I>(n: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, T)>,
    {
        let mut mu = EdgeMeasure::zero(n)?;
        let mut seen = vec![false; mu.weights.len()];
        for (i, j, w) in entries {
            let idx = mu.index(i, j)?;
            if std::mem::replace(&mut seen[idx], true) {
                return Err(Error::InvalidMeasure(format!("edge {{{i},{j}}} listed twice")));
            }
            if w < T::zero() {
                return Err(Error::InvalidMeasure(format!("negative weight {w:?} on {{{i},{j}}}")));
            }
            mu.weights[idx] = w;
        }
        Ok(mu)
    }

    /// Puts `weight` on every edge of `g`.
    pub fn uniform_on(g: &SimpleGraph, weight: T) -> Result<Self> {
        EdgeMeasure::from_entries(g.n(), g.edges().into_iter().map(|(i, j)| (i, j, weight.clone())))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Weights in lexicographic edge order.
    pub fn weights(&self) -> &[T] {
        &self.weights
    }


    fn vertex(&self, v: usize) -> Result<usize> {
        if v == 0 || v > self.n {
            Err(Error::InvalidVertex { vertex: v, n: self.n })
        } else {
            Ok(v - 1)
        }
    }

    fn index(&self, i: usize, j: usize) -> Result<usize> {
        let (a, b) = (self.vertex(i)?, self.vertex(j)?);
        if a == b {
            return Err(Error::InvalidEdge(format!("self-loop at {i}")));
        }
        Ok(pair_index(self.n, a.min(b), a.max(b)))
    }

    pub fn weight(&self, i: usize, j: usize) -> Result<&T> {
        Ok(&self.weights[self.index(i, j)?])
    }

    pub fn set_weight(&mut self, i: usize, j: usize, w: T) -> Result<()> {
        if w < T::zero() {
            return Err(Error::InvalidMeasure(format!("negative weight {w:?}")));
        }
        let idx = self.index(i, j)?;
        self.weights[idx] = w;
        Ok(())
    }

    pub fn mass(&self) -> T {
        self.weights.iter().cloned().fold(T::zero(), |acc, w| acc + w)
    }

    pub fn is_probability(&self) -> bool {
        self.mass().approx_eq(&T::one())
    }

    /// `Σ_{y ≠ x} μ(x, y)`.
    pub fn weighted_degree(&self, x: usize) -> Result<T> {
        let a = self.vertex(x)?;
        Ok((0..self.n)
            .filter(|&b| b != a)
            .fold(T::zero(), |acc, b| acc + self.weights[pair_index(self.n, a.min(b), a.max(b))].clone()))
    }

    /// All weighted degrees, indexed by 0-based vertex.
    pub fn weighted_degrees(&self) -> Vec<T> {
        let mut deg = vec![T::zero(); self.n];
        for ((a, b), w) in pairs(self.n).into_iter().zip(&self.weights) {
            deg[a] += w.clone();
            deg[b] += w.clone();
        }
        deg
    }

    /// The graph of edges carrying positive weight.
    pub fn support(&self) -> SimpleGraph {
        SimpleGraph::from_masks(self.support_masks())
    }

    pub(crate) fn support_masks(&self) -> Vec<u64> {
        let mut adj = vec![0u64; self.n];
        for ((a, b), w) in pairs(self.n).into_iter().zip(&self.weights) {
            if *w > T::zero() {
                adj[a] |= bit(b);
                adj[b] |= bit(a);
            }
        }
        adj
    }

    pub fn support_size(&self) -> usize {
        self.weights.iter().filter(|w| **w > T::zero()).count()
    }

    pub fn scaled(&self, c: &T) -> Self {
        EdgeMeasure {
            n: self.n,
            weights: self.weights.iter().map(|w| w.clone() * c.clone()).collect(),
        }
    }

    /// Moves the weight of `{i, j}` to `{perm[i-1], perm[j-1]}`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self> {
        crate::graph::check_permutation(perm, self.n)?;
        let mut out = EdgeMeasure::zero(self.n)?;
        for ((a, b), w) in pairs(self.n).into_iter().zip(&self.weights) {
            let (pa, pb) = (perm[a] - 1, perm[b] - 1);
            out.weights[pair_index(self.n, pa.min(pb), pa.max(pb))] = w.clone();
        }
        Ok(out)
    }

    /// 1-based `(i, j, weight)` for every positive edge.
    pub fn positive_entries(&self) -> Vec<(usize, usize, T)> {
        pairs(self.n)
            .into_iter()
            .zip(&self.weights)
            .filter(|(_, w)| **w > T::zero())
            .map(|((a, b), w)| (a + 1, b + 1, w.clone()))
            .collect()
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> EdgeMeasure<U> {
        EdgeMeasure { n: self.n, weights: self.weights.iter().map(f).collect() }
    }

    /// `{"n": .., "entries": [[i, j, w], ...]}` listing positive edges only.
    /// Exact weights are written as `"p/q"` strings.
    pub fn to_json(&self) -> Value {
        let entries: Vec<Value> = self
            .positive_entries()
            .into_iter()
            .map(|(i, j, w)| Value::Array(vec![i.into(), j.into(), w.to_json()]))
            .collect();
        serde_json::json!({ "n": self.n, "entries": entries })
    }

    pub fn from_json(doc: &Value) -> Result<Self> {
        let bad = |msg: &str| Error::InvalidMeasure(msg.to_string());
        let n = doc.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing integer field \"n\""))? as usize;
        let entries = doc
            .get("entries")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing array field \"entries\""))?;
        let parsed = entries
            .iter()
            .map(|e| {
                let arr = e.as_array().filter(|a| a.len() == 3).ok_or_else(|| bad("entries must be [i, j, weight]"))?;
                let i = arr[0].as_u64().ok_or_else(|| bad("vertex labels must be integers"))? as usize;
                let j = arr[1].as_u64().ok_or_else(|| bad("vertex labels must be integers"))? as usize;
                Ok((i, j, T::from_json(&arr[2])?))
            })
            .collect::<Result<Vec<_>>>()?;
        EdgeMeasure::from_entries(n, parsed)
    }
}

impl EdgeMeasure<Rational> {
    pub fn to_f64(&self) -> EdgeMeasure<f64> {
        self.map(Scalar::to_f64)
    }
}

pub fn rational(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_is_lexicographic() {
        let n = 5;
        for (k, (a, b)) in pairs(n).into_iter().enumerate() {
            assert_eq!(pair_index(n, a, b), k);
        }
    }

    #[test]
    fn triangle_weighted_degree() {
        let tri = SimpleGraph::cycle(3).unwrap();
        let mu = EdgeMeasure::uniform_on(&tri, rational(1, 3)).unwrap();
        assert_eq!(mu.weighted_degree(1).unwrap(), rational(2, 3));
        assert_eq!(mu.mass(), rational(1, 1));
        assert!(mu.is_probability());
    }

    #[test]
    fn isolated_vertex_has_zero_degree() {
        let mu = EdgeMeasure::from_entries(3, [(1, 2, 1.0)]).unwrap();
        assert_eq!(mu.weighted_degree(3).unwrap(), 0.0);
        assert_eq!(mu.weighted_degree(4).unwrap_err(), Error::InvalidVertex { vertex: 4, n: 3 });
    }

    #[test]
    fn cycle_degree_in_larger_host() {
        for m in 3..=6 {
            let mut edges: Vec<_> = (1..m).map(|i| (i, i + 1, rational(1, m as i64))).collect();
            edges.push((1, m, rational(1, m as i64)));
            let mu = EdgeMeasure::from_entries(m + 2, edges).unwrap();
            for x in 1..=m {
                assert_eq!(mu.weighted_degree(x).unwrap(), rational(2, m as i64));
            }
            let total = mu.weighted_degrees().into_iter().fold(Rational::zero(), |a, b| a + b);
            assert_eq!(total, mu.mass() * rational(2, 1));
        }
    }

    #[test]
    fn rejects_invalid_entries() {
        assert!(EdgeMeasure::from_entries(3, [(1, 2, -0.5)]).is_err());
        assert!(EdgeMeasure::from_entries(3, [(1, 2, 0.5), (2, 1, 0.5)]).is_err());
        assert!(EdgeMeasure::from_entries(3, [(1, 1, 0.5)]).is_err());
        assert!(EdgeMeasure::<f64>::from_weights(3, vec![0.5, 0.5]).is_err());
    }

    #[test]
    fn float_mass_tolerance() {
        let mu = EdgeMeasure::from_entries(3, [(1, 2, 0.5), (2, 3, 0.5 + 5e-10)]).unwrap();
        assert!(mu.is_probability());
        let mu = EdgeMeasure::from_entries(3, [(1, 2, 0.5), (2, 3, 0.5 + 5e-9)]).unwrap();
        assert!(!mu.is_probability());
    }

    #[test]
    fn parses_exact_weights() {
        assert_eq!(parse_rational("1/3").unwrap(), rational(1, 3));
        assert_eq!(parse_rational("0.125").unwrap(), rational(1, 8));
        assert_eq!(parse_rational("2").unwrap(), rational(2, 1));
        assert_eq!(parse_rational(".5").unwrap(), rational(1, 2));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("abc").is_err());
        assert!(parse_rational(".").is_err());
    }

    #[test]
    fn json_shape_exact_and_float() {
        let mu = EdgeMeasure::from_entries(3, [(1, 2, rational(1, 3)), (2, 3, rational(2, 3))]).unwrap();
        let doc = mu.to_json();
        assert_eq!(doc.to_string(), r#"{"n":3,"entries":[[1,2,"1/3"],[2,3,"2/3"]]}"#);
        assert_eq!(EdgeMeasure::<Rational>::from_json(&doc).unwrap(), mu);

        let f = mu.to_f64();
        let back = EdgeMeasure::<f64>::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
    }

    #[test]
    fn relabel_moves_weights() {
        let mu = EdgeMeasure::from_entries(3, [(1, 2, 1.0)]).unwrap();
        let r = mu.relabel(&[3, 1, 2]).unwrap();
        assert_eq!(*r.weight(1, 3).unwrap(), 1.0);
        assert_eq!(*r.weight(1, 2).unwrap(), 0.0);
    }
}
