#[path = "support/oracle.rs"]
mod oracle;

use pathex_core::measure::rational;
use pathex_core::{
    blowup_cycle, conjecture_gap_report, density, enumerate_path_copies, is_planar, uniform_cycle_measure, BlowupSpec,
    EdgeMeasure, PatternSpec, Rational,
};
use proptest::prelude::*;

fn spec_strategy() -> impl Strategy<Value = (usize, usize)> {
    (2..=6usize).prop_flat_map(|m| (Just(m), 2 * m..=24usize))
}

proptest! {
    #[test]
    fn blowups_are_planar_with_expected_edges((m, n) in spec_strategy()) {
        let spec = BlowupSpec::new(m, n).unwrap();
        let sizes = spec.class_sizes();
        prop_assert_eq!(sizes.iter().sum::<usize>(), n - m);
        prop_assert!(sizes.iter().max().unwrap() - sizes.iter().min().unwrap() <= 1);
        let g = spec.graph().unwrap();
        prop_assert_eq!(g.n(), n);
        prop_assert!(is_planar(&g));
        prop_assert_eq!(g.edge_count(), 2 * (n - m));
        // hubs are pairwise non-adjacent, class vertices have degree 2
        for v in m + 1..=n {
            prop_assert_eq!(g.degree(v).unwrap(), 2);
        }
    }
}

#[test]
fn blowup_counts_match_brute_force() {
    for (m, n) in [(2, 6), (2, 7), (2, 8), (3, 6), (3, 7), (3, 9)] {
        let g = blowup_cycle(m, n).unwrap();
        let fast = enumerate_path_copies(&g, 2 * m + 1).unwrap().count();
        assert_eq!(fast, oracle::path_count(n, &g.edges(), 2 * m + 1), "m = {m}, n = {n}");
    }
}

#[test]
fn gap_counts_stay_under_the_constant() {
    for (m, ns) in [(2, vec![6, 10, 14, 18]), (3, vec![9, 12, 15]), (4, vec![12, 16])] {
        let rows = conjecture_gap_report(m, &ns).unwrap();
        for (row, &n) in rows.iter().zip(&ns) {
            assert_eq!(row.n, n);
            assert!(row.count > 0);
            assert!((row.count as f64) <= row.scaled_target(1e4));
            assert!(row.ratio < 1.0, "{row:?}");
        }
        for pair in rows.windows(2) {
            assert!(pair[1].count > pair[0].count);
            assert!(pair[1].ratio > pair[0].ratio, "{pair:?}");
        }
    }
}

#[test]
fn uniform_cycle_exact_values() {
    for m in 3..=6usize {
        for n in m..=m + 2 {
            let mu: EdgeMeasure<Rational> = uniform_cycle_measure(m, n).unwrap();
            assert_eq!(mu.mass(), rational(1, 1));
            let mm = (m as i64).pow(m as u32);
            assert_eq!(density(&mu, &PatternSpec::Path { m }).unwrap(), rational(m as i64 * m as i64, mm));
            assert_eq!(density(&mu, &PatternSpec::Cycle { m }).unwrap(), rational(1, mm));
            assert_eq!(density(&mu, &PatternSpec::Rho { m }).unwrap(), rational(8, mm));
            // independent check against the definition
            assert_eq!(oracle::rho(&oracle::matrix(&mu), m), rational(8, mm));
        }
    }
}
