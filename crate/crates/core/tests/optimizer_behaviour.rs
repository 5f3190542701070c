#[path = "support/oracle.rs"]
mod oracle;

use pathex_core::measure::rational;
use pathex_core::optimizer::{continuation_loads, project_to_simplex, weight_shift_descent};
use pathex_core::{
    beta_star_density, kkt_check, maximize, vertex_balance_residual, weight_shift_step, EdgeMeasure, Method,
    PatternSpec, Rational, ShiftOutcome, SolverConfig, StepRule,
};
use proptest::prelude::*;

fn solve(pattern: PatternSpec, n: usize, restarts: usize) -> pathex_core::OptimizeResult {
    maximize(&pattern, &SolverConfig { n, restarts, ..Default::default() }).unwrap()
}

#[test]
fn rho3_reaches_eight_twentysevenths() {
    let r = solve(PatternSpec::Rho { m: 3 }, 6, 20);
    assert!(r.converged);
    assert!((r.value - 8.0 / 27.0).abs() < 1e-9, "{}", r.value);
    assert_eq!(r.measure.support_size(), 3);
}

#[test]
fn path_optimum_dominates_uniform_cycle() {
    for m in 3..=5usize {
        let r = solve(PatternSpec::Path { m }, m + 1, 12);
        let floor = 1.0 / (m as f64).powi(m as i32 - 2);
        assert!(r.value >= floor - 1e-4, "m = {m}: {}", r.value);
        assert!(r.kkt.unwrap().max_violation < 1e-5);
    }
}

#[test]
fn balance_residual_small_at_converged_path_optima() {
    for (m, n) in [(3, 5), (3, 7), (4, 6), (5, 6)] {
        let r = solve(PatternSpec::Path { m }, n, 12);
        assert!(r.converged);
        let worst = vertex_balance_residual(&r.measure, m).unwrap().into_iter().fold(0.0f64, |a, x| a.max(x.abs()));
        assert!(worst < 1e-5, "m = {m}, n = {n}: {worst}");
    }
}

#[test]
fn anchored_optima_match_envelope() {
    for (s, t, n) in [(1, 1, 5), (2, 1, 6), (0, 3, 6), (2, 2, 7)] {
        let m = s + t;
        let r = solve(PatternSpec::AnchoredPair { s, t, a: 1, b: n }, n, 12);
        let envelope = 1.0 / (m as f64).powi(m as i32);
        assert!(r.value <= envelope + 1e-9 && r.value >= envelope - 1e-6, "({s},{t}) n = {n}: {}", r.value);
    }
}

#[test]
fn same_seed_same_result_across_pools() {
    let cfg = SolverConfig { n: 6, restarts: 8, seed: 11, ..Default::default() };
    let p = PatternSpec::Path { m: 4 };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| maximize(&p, &cfg).unwrap())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one, four);
    assert_eq!(one.to_json().to_string(), four.to_json().to_string());
    let other = maximize(&p, &SolverConfig { seed: 12, ..cfg.clone() }).unwrap();
    assert_ne!(other.restarts, one.restarts);
}

#[test]
fn alternative_methods_run() {
    let p = PatternSpec::Rho { m: 3 };
    let fw = maximize(&p, &SolverConfig { n: 5, restarts: 6, method: Method::FrankWolfe, max_iterations: 2000, ..Default::default() })
        .unwrap();
    assert!(fw.value > 0.29 && fw.value <= 8.0 / 27.0 + 1e-9, "{}", fw.value);
    let fixed = maximize(
        &PatternSpec::Path { m: 3 },
        &SolverConfig { n: 4, restarts: 4, step_rule: StepRule::Fixed, step_size: 0.05, ..Default::default() },
    )
    .unwrap();
    assert!((fixed.measure.mass() - 1.0).abs() < 1e-12);
    assert!(fixed.value >= 1.0 / 3.0 - 1e-6);
}

#[test]
fn mass_scales_the_optimum() {
    // β(P_3) is homogeneous of degree 2
    let unit = solve(PatternSpec::Path { m: 3 }, 5, 8);
    let double = maximize(&PatternSpec::Path { m: 3 }, &SolverConfig { n: 5, mass: 2.0, restarts: 8, ..Default::default() }).unwrap();
    assert!((double.value - 4.0 * unit.value).abs() < 1e-9);
}

fn rational_measure(max_n: usize) -> impl Strategy<Value = EdgeMeasure<Rational>> {
    (3..=max_n).prop_flat_map(|n| {
        prop::collection::vec(prop_oneof![1 => Just(0i64), 2 => 1i64..9], n * (n - 1) / 2).prop_filter_map(
            "positive mass",
            move |w| {
                let total: i64 = w.iter().sum();
                (total > 0).then(|| EdgeMeasure::from_weights(n, w.iter().map(|&x| rational(x, total)).collect()).unwrap())
            },
        )
    })
}

/// Continuation load through partner `q`, from the brute-force oracle with
/// every pivot edge deleted.
fn brute_load(mu: &EdgeMeasure<Rational>, s: usize, t: usize, pivot: usize, q: usize, anchor: usize) -> Rational {
    let mut w = oracle::matrix(mu);
    for v in 0..w.len() {
        w[pivot - 1][v] = rational(0, 1);
        w[v][pivot - 1] = rational(0, 1);
    }
    if q == anchor {
        return rational(0, 1);
    }
    oracle::anchored(&w, s - 1, t, q, anchor)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn projection_is_feasible_and_idempotent(v in prop::collection::vec(-2.0f64..2.0, 1..30), mass in 0.1f64..3.0) {
        let p = project_to_simplex(&v, mass);
        prop_assert!(p.iter().all(|&x| x >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - mass).abs() < 1e-12);
        let again = project_to_simplex(&p, mass);
        for (a, b) in p.iter().zip(&again) {
            prop_assert!((a - b).abs() < 1e-12);
        }
        // optimality of the projection: v − p is constant on the support and no larger off it
        let shift: Vec<f64> = v.iter().zip(&p).filter(|(_, &x)| x > 0.0).map(|(a, b)| a - b).collect();
        let theta = shift[0];
        prop_assert!(shift.iter().all(|d| (d - theta).abs() < 1e-9));
        prop_assert!(v.iter().zip(&p).filter(|(_, &x)| x == 0.0).all(|(a, _)| *a <= theta + 1e-9));
    }

    #[test]
    fn shift_step_matches_brute_force(mu in rational_measure(6), s in 1..=3usize, t in 0..=2usize, pivot in 1..=2usize) {
        let n = mu.n();
        let anchor = n;
        prop_assume!(s + t + 2 <= n + 1);
        let before = beta_star_density(&mu, s, t, pivot, anchor).unwrap();
        for (q, _, load) in continuation_loads(&mu, s, t, pivot, anchor).unwrap() {
            prop_assert_eq!(load, brute_load(&mu, s, t, pivot, q, anchor));
        }
        let step = weight_shift_step(&mu, s, t, pivot, anchor).unwrap();
        let after = beta_star_density(&step.measure, s, t, pivot, anchor).unwrap();
        prop_assert_eq!(step.measure.mass(), mu.mass());
        match step.outcome {
            ShiftOutcome::Moved { amount, donor_load, winner_load, donor, winner } => {
                prop_assert!(donor != winner);
                prop_assert!(winner_load >= donor_load);
                prop_assert_eq!(after.clone() - before.clone(), amount * (winner_load - donor_load));
            }
            _ => prop_assert_eq!(after.clone(), before.clone()),
        }
        prop_assert!(after >= before);
        let (end, _) = weight_shift_descent(&mu, s, t, pivot, anchor).unwrap();
        prop_assert!(beta_star_density(&end, s, t, pivot, anchor).unwrap() >= before);
        prop_assert!(continuation_loads(&end, s, t, pivot, anchor).unwrap().len() <= 1);
    }

    #[test]
    fn kkt_lambda_is_weighted_gradient_average(mu in rational_measure(5), m in 2..=4usize) {
        let p = PatternSpec::Path { m };
        let report = kkt_check(&mu, &p, 1e-9).unwrap();
        let value = pathex_core::polynomial_value(&mu, &p).unwrap();
        // Euler: Σ μ_e ∂_e β = (m − 1) β on a probability measure
        let expected = value * rational(m as i64 - 1, 1);
        prop_assert!((report.lambda - pathex_core::Scalar::to_f64(&expected)).abs() < 1e-12);
        prop_assert!(report.max_inactive_excess >= 0.0);
    }
}
