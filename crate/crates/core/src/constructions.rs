//! Blown-up even cycles and uniform cycle measures, with exact path counts
//! on the blow-ups.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{enumerate_path_copies, SimpleGraph};
use crate::measure::{EdgeMeasure, Scalar};

/// `C_{2m}` with every second vertex replaced by an independent class.
/// Hubs are vertices `1..=m`; class `i` follows, joined to hubs `i` and
/// `i + 1 (mod m)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupSpec {
    m: usize,
    n: usize,
    class_sizes: Vec<usize>,
}

impl BlowupSpec {
    /// Splits the `n − m` class vertices as evenly as possible; the first
    /// `(n − m) mod m` classes take the extra vertex.
    pub fn new(m: usize, n: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidSpec(format!("blow-up needs m >= 2, got {m}")));
        }
        if n < 2 * m {
            return Err(Error::InvalidSpec(format!("blow-up of C_{} needs n >= {}, got {n}", 2 * m, 2 * m)));
        }
        let (base, extra) = ((n - m) / m, (n - m) % m);
        let class_sizes = (0..m).map(|i| base + usize::from(i < extra)).collect();
        Ok(BlowupSpec { m, n, class_sizes })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn class_sizes(&self) -> &[usize] {
        &self.class_sizes
    }

    pub fn graph(&self) -> Result<SimpleGraph> {
        let mut g = SimpleGraph::new(self.n)?;
        let mut next = self.m + 1;
        for (i, &size) in self.class_sizes.iter().enumerate() {
            let (left, right) = (i + 1, (i + 1) % self.m + 1);
            for v in next..next + size {
                g.add_edge(left, v)?;
                if right != left {
                    g.add_edge(right, v)?;
                }
            }
            next += size;
        }
        Ok(g)
    }
}

pub fn blowup_cycle(m: usize, n: usize) -> Result<SimpleGraph> {
    BlowupSpec::new(m, n)?.graph()
}

/// Weight `1/m` on each edge of the cycle `1–2–…–m–1` inside `K_n`.
pub fn uniform_cycle_measure<T: Scalar>(m: usize, n: usize) -> Result<EdgeMeasure<T>> {
    if m < 3 {
        return Err(Error::InvalidSpec(format!("a cycle needs m >= 3, got {m}")));
    }
    if m > n {
        return Err(Error::InvalidSpec(format!("C_{m} does not fit in K_{n}")));
    }
    let w = T::one() / T::from_usize(m);
    EdgeMeasure::from_entries(n, (1..=m).map(|i| (i.min(i % m + 1), i.max(i % m + 1), w.clone())))
}

/// One line of the comparison between blow-up path counts and the
/// conjectured leading term `4·m^{−m}·n^{m+1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapRow {
    pub m: usize,
    pub n: usize,
    /// Copies of `P_{2m+1}` in the blow-up.
    pub count: u64,
    pub target: f64,
    pub ratio: f64,
}

impl GapRow {
    /// `C·m^{−m}·n^{m+1}` for a given constant `C`.
    pub fn scaled_target(&self, constant: f64) -> f64 {
        constant * self.target / 4.0
    }
}

pub fn gap_target(m: usize, n: usize) -> f64 {
    4.0 * (m as f64).powi(-(m as i32)) * (n as f64).powi(m as i32 + 1)
}

/// Exact `P_{2m+1}` counts on the blow-ups for each `n`, counted in parallel
/// and returned in input order.
pub fn conjecture_gap_report(m: usize, ns: &[usize]) -> Result<Vec<GapRow>> {
    let graphs = ns.iter().map(|&n| blowup_cycle(m, n)).collect::<Result<Vec<_>>>()?;
    graphs
        .par_iter()
        .zip(ns.par_iter())
        .map(|(g, &n)| {
            let count = enumerate_path_copies(g, 2 * m + 1)?.count() as u64;
            let target = gap_target(m, n);
            Ok(GapRow { m, n, count, target, ratio: count as f64 / target })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density::{density, PatternSpec};
    use crate::measure::{rational, Rational};
    use crate::planarity::is_planar;

    #[test]
    fn m2_is_complete_bipartite() {
        let g = blowup_cycle(2, 6).unwrap();
        assert_eq!(g, SimpleGraph::complete_bipartite(2, 4).unwrap());
        assert_eq!(enumerate_path_copies(&g, 5).unwrap().count(), 24);
    }

    #[test]
    fn m3_n9_shape() {
        let spec = BlowupSpec::new(3, 9).unwrap();
        assert_eq!(spec.class_sizes(), &[2, 2, 2]);
        let g = spec.graph().unwrap();
        assert_eq!(g.edge_count(), 12);
        assert!(is_planar(&g));
        for hub in 1..=3 {
            assert_eq!(g.degree(hub).unwrap(), 4);
        }
        assert_eq!(enumerate_path_copies(&g, 7).unwrap().count(), 84);
    }

    #[test]
    fn unbalanced_split() {
        assert_eq!(BlowupSpec::new(3, 11).unwrap().class_sizes(), &[3, 3, 2]);
        assert_eq!(BlowupSpec::new(4, 9).unwrap().class_sizes(), &[2, 1, 1, 1]);
    }

    #[test]
    fn rejects_small_hosts() {
        assert!(matches!(blowup_cycle(3, 5), Err(Error::InvalidSpec(_))));
        assert!(matches!(blowup_cycle(1, 5), Err(Error::InvalidSpec(_))));
        assert!(matches!(uniform_cycle_measure::<f64>(5, 4), Err(Error::InvalidSpec(_))));
    }

    #[test]
    fn uniform_cycle_values() {
        let mu: EdgeMeasure<Rational> = uniform_cycle_measure(3, 3).unwrap();
        assert_eq!(density(&mu, &PatternSpec::Path { m: 3 }).unwrap(), rational(1, 3));
        let mu: EdgeMeasure<Rational> = uniform_cycle_measure(4, 6).unwrap();
        assert_eq!(mu.mass(), rational(1, 1));
        assert_eq!(density(&mu, &PatternSpec::Rho { m: 4 }).unwrap(), rational(1, 32));
        let mu: EdgeMeasure<Rational> = uniform_cycle_measure(3, 5).unwrap();
        assert_eq!(density(&mu, &PatternSpec::Cycle { m: 3 }).unwrap(), rational(1, 27));
    }

    #[test]
    fn gap_rows_for_m2() {
        let rows = conjecture_gap_report(2, &[6, 10]).unwrap();
        assert_eq!(rows.iter().map(|r| r.count).collect::<Vec<_>>(), vec![24, 336]);
        assert!((rows[0].target - 216.0).abs() < 1e-9);
        assert!((rows[0].ratio - 24.0 / 216.0).abs() < 1e-12);
        assert!(conjecture_gap_report(2, &[6, 3]).is_err());
    }
}
