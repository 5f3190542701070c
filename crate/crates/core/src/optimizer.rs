//! Maximization of density polynomials over `{μ ≥ 0, Σ μ = w}`, first-order
//! certificates, and the pivot weight-shifting move for anchored pairs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::density::{self, beta_star_avoiding, path_vertex_load, PatternSpec};
use crate::error::{Error, Result};
use crate::measure::{pair_index, EdgeMeasure, Scalar, FLOAT_MASS_TOLERANCE};

/// Largest host the optimizer accepts; gradient enumeration grows like `n^m`.
pub const MAX_OPTIMIZER_N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StepRule {
    Fixed,
    LineSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    ProjectedGradient,
    FrankWolfe,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, rename_all = "kebab-case")]
pub struct SolverConfig {
    pub n: usize,
    pub mass: f64,
    pub restarts: usize,
    pub max_iterations: usize,
    pub step_rule: StepRule,
    pub method: Method,
    /// Step length for [`StepRule::Fixed`].
    pub step_size: f64,
    pub convergence_tol: f64,
    pub seed: u64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            n: 6,
            mass: 1.0,
            restarts: 16,
            max_iterations: 20_000,
            step_rule: StepRule::LineSearch,
            method: Method::ProjectedGradient,
            step_size: 0.1,
            convergence_tol: 1e-9,
            seed: 0,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self, pattern: &PatternSpec) -> Result<()> {
        if self.restarts < 1 {
            return Err(Error::InvalidConfig("restarts must be at least 1".into()));
        }
        if !(self.mass >= 0.0 && self.mass.is_finite()) {
            return Err(Error::InvalidConfig(format!("mass must be a finite nonnegative number, got {}", self.mass)));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidConfig("convergence-tol must be positive".into()));
        }
        if self.step_rule == StepRule::Fixed && !(self.step_size > 0.0) {
            return Err(Error::InvalidConfig("a fixed step rule needs a positive step-size".into()));
        }
        if self.n < 2 {
            return Err(Error::InvalidConfig(format!("K_n needs n >= 2 to carry a measure, got {}", self.n)));
        }
        if self.n > MAX_OPTIMIZER_N {
            return Err(Error::ResourceLimit(format!("optimizer host size is capped at {MAX_OPTIMIZER_N}, got {}", self.n)));
        }
        pattern.validate_for(self.n)?;
        if matches!(pattern, PatternSpec::Rho { .. }) && (self.mass - 1.0).abs() > FLOAT_MASS_TOLERANCE {
            return Err(Error::InvalidConfig(format!("rho is defined on probability measures, got mass {}", self.mass)));
        }
        Ok(())
    }
}

/// First-order optimality data at a measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KktReport {
    /// Weight-averaged gradient over the support, `Σ μ_e ∂_e f / Σ μ_e`.
    pub lambda: f64,
    /// `max |∂_e f − λ|` over edges with positive weight.
    pub max_violation: f64,
    /// `max (∂_e f − λ)⁺` over zero-weight edges.
    pub max_inactive_excess: f64,
    pub support_size: usize,
    pub tolerance: f64,
    pub certified: bool,
}

/// Checks the simplex KKT conditions: every positive edge has partial
/// derivative `λ`, and no zero edge has a larger one.
pub fn kkt_check<T: Scalar>(mu: &EdgeMeasure<T>, pattern: &PatternSpec, tol: f64) -> Result<KktReport> {
    let grad = density::gradient(mu, pattern)?;
    let w = mu.weights();
    let support_size = mu.support_size();
    if support_size == 0 {
        return Err(Error::DegenerateMeasure("the measure has empty support".into()));
    }
    let mass = mu.mass();
    let weighted = w
        .iter()
        .zip(grad.partials())
        .fold(T::zero(), |acc, (x, g)| acc + x.clone() * g.clone());
    let lambda = weighted / mass;
    let mut max_violation = 0.0f64;
    let mut max_inactive_excess = 0.0f64;
    for (x, g) in w.iter().zip(grad.partials()) {
        let diff = (g.clone() - lambda.clone()).to_f64();
        if *x > T::zero() {
            max_violation = max_violation.max(diff.abs());
        } else {
            max_inactive_excess = max_inactive_excess.max(diff);
        }
    }
    Ok(KktReport {
        lambda: lambda.to_f64(),
        max_violation,
        max_inactive_excess,
        support_size,
        tolerance: tol,
        certified: max_violation <= tol && max_inactive_excess <= tol,
    })
}

/// Per-vertex residual of the balance identity satisfied by stationary
/// points of the path density:
/// `μ̄(x)·(m−1)·β(μ;P_m) − Σ_{P ∋ x} deg_P(x)·μ(P)`, indexed by 0-based
/// vertex. Meaningful for probability measures.
pub fn vertex_balance_residual<T: Scalar>(mu: &EdgeMeasure<T>, m: usize) -> Result<Vec<T>> {
    let beta = density::beta_density(mu, &PatternSpec::Path { m })?;
    let load = path_vertex_load(mu, m);
    let scale = beta * T::from_usize(m - 1);
    Ok(mu
        .weighted_degrees()
        .into_iter()
        .zip(load)
        .map(|(deg, l)| deg * scale.clone() - l)
        .collect())
}

/// What [`weight_shift_step`] did at the pivot.
#[derive(Debug, Clone, PartialEq)]
pub enum ShiftOutcome<T> {
    /// All of `μ(pivot, donor)` moved onto `{pivot, winner}`; the loads are
    /// the weights of the continuations through each partner.
    Moved { donor: usize, winner: usize, amount: T, donor_load: T, winner_load: T },
    /// At most one positive edge at the pivot; nothing to do.
    Concentrated,
    /// No positive edge at the pivot.
    Isolated,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightShift<T> {
    pub measure: EdgeMeasure<T>,
    pub outcome: ShiftOutcome<T>,
}

/// Weight of the continuations of an anchored pair through each positive
/// pivot edge: for partner `q`, the `P_(s−1,t)` copies avoiding the pivot
/// whose first path starts at `q` and second at `anchor`. Returned as
/// `(q, μ(pivot, q), load)` in increasing `q`.
pub fn continuation_loads<T: Scalar>(
    mu: &EdgeMeasure<T>,
    s: usize,
    t: usize,
    pivot: usize,
    anchor: usize,
) -> Result<Vec<(usize, T, T)>> {
    PatternSpec::AnchoredPair { s, t, a: pivot, b: anchor }.validate_for(mu.n())?;
    if s == 0 {
        return Err(Error::InvalidPattern("weight shifting needs s >= 1".into()));
    }
    let mut out = Vec::new();
    for q in 1..=mu.n() {
        if q == pivot {
            continue;
        }
        let w = mu.weight(pivot, q)?.clone();
        if w > T::zero() {
            let load = if q == anchor {
                T::zero()
            } else {
                beta_star_avoiding(mu, s - 1, t, q, anchor, &[pivot])
            };
            out.push((q, w, load));
        }
    }
    Ok(out)
}

/// One mass transfer at the pivot: the positive pivot edge whose
/// continuation load is smallest gives all of its weight to the one whose
/// load is largest. Ties go to the smaller partner label. Every anchored
/// copy uses exactly one pivot edge, so the density changes by exactly
/// `μ(donor)·(W_winner − W_donor) ≥ 0` and the mass is unchanged.
pub fn weight_shift_step<T: Scalar>(
    mu: &EdgeMeasure<T>,
    s: usize,
    t: usize,
    pivot: usize,
    anchor: usize,
) -> Result<WeightShift<T>> {
    let loads = continuation_loads(mu, s, t, pivot, anchor)?;
    let outcome_only = |outcome| Ok(WeightShift { measure: mu.clone(), outcome });
    match loads.len() {
        0 => return outcome_only(ShiftOutcome::Isolated),
        1 => return outcome_only(ShiftOutcome::Concentrated),
        _ => {}
    }
    let mut winner = 0;
    for k in 1..loads.len() {
        if loads[k].2 > loads[winner].2 {
            winner = k;
        }
    }
    let mut donor = usize::from(winner == 0);
    for k in 0..loads.len() {
        if k != winner && loads[k].2 < loads[donor].2 {
            donor = k;
        }
    }
    let (win_partner, donor_partner) = (loads[winner].0, loads[donor].0);
    let amount = loads[donor].1.clone();
    let mut next = mu.clone();
    next.set_weight(pivot, win_partner, loads[winner].1.clone() + amount.clone())?;
    next.set_weight(pivot, donor_partner, T::zero())?;
    Ok(WeightShift {
        measure: next,
        outcome: ShiftOutcome::Moved {
            donor: donor_partner,
            winner: win_partner,
            amount,
            donor_load: loads[donor].2.clone(),
            winner_load: loads[winner].2.clone(),
        },
    })
}

/// Applies [`weight_shift_step`] until the pivot carries at most one
/// positive edge. Returns the final measure and the number of moves.
pub fn weight_shift_descent<T: Scalar>(
    mu: &EdgeMeasure<T>,
    s: usize,
    t: usize,
    pivot: usize,
    anchor: usize,
) -> Result<(EdgeMeasure<T>, usize)> {
    let mut current = mu.clone();
    let mut moves = 0;
    loop {
        let step = weight_shift_step(&current, s, t, pivot, anchor)?;
        match step.outcome {
            ShiftOutcome::Moved { .. } => {
                current = step.measure;
                moves += 1;
            }
            _ => return Ok((current, moves)),
        }
    }
}

const SNAP_RELATIVE: f64 = 8.0 * f64::EPSILON;

/// Relative width of the value band inside which restarts count as tied.
const TIE_RELATIVE: f64 = 1e-12;

/// Euclidean projection onto `{x ≥ 0, Σ x = mass}` (sort-and-threshold).
pub fn project_to_simplex(v: &[f64], mass: f64) -> Vec<f64> {
    if v.is_empty() {
        return Vec::new();
    }
    let mut sorted = v.to_vec();
    sorted.sort_unstable_by(|a, b| b.total_cmp(a));
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, &u) in sorted.iter().enumerate() {
        cumulative += u;
        let candidate = (cumulative - mass) / (k + 1) as f64;
        if u - candidate > 0.0 {
            theta = candidate;
        }
    }
    // coordinates within rounding distance of the boundary are snapped to it
    let floor = SNAP_RELATIVE * mass;
    let mut out: Vec<f64> = v.iter().map(|&x| if x - theta > floor { x - theta } else { 0.0 }).collect();
    // fold the rounding residue into the largest coordinate
    let total: f64 = out.iter().sum();
    if total > 0.0 {
        let (imax, _) = out.iter().enumerate().fold((0, f64::MIN), |best, (i, &x)| if x > best.1 { (i, x) } else { best });
        out[imax] = (out[imax] + (mass - total)).max(0.0);
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum StartKind {
    UniformAll,
    UniformCycle { length: usize },
    Dirichlet,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RestartSummary {
    pub index: usize,
    pub start: StartKind,
    pub start_value: f64,
    pub value: f64,
    /// Iterates accepted by the step rule.
    pub accepted_steps: usize,
    pub iterations: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    pub pattern: PatternSpec,
    pub measure: EdgeMeasure<f64>,
    pub value: f64,
    pub kkt: Option<KktReport>,
    pub converged: bool,
    pub iterations: usize,
    pub restart_index: usize,
    pub restarts: Vec<RestartSummary>,
}

impl OptimizeResult {
    pub fn to_json(&self) -> Value {
        json!({
            "pattern": self.pattern,
            "value": self.value,
            "converged": self.converged,
            "measure": self.measure.to_json(),
            "kkt": self.kkt,
            "trace": {
                "iterations": self.iterations,
                "restart_index": self.restart_index,
                "restarts": self.restarts,
            },
        })
    }
}

struct Problem<'a> {
    pattern: &'a PatternSpec,
    n: usize,
}

impl Problem<'_> {
    fn measure(&self, x: &[f64]) -> EdgeMeasure<f64> {
        EdgeMeasure::from_weights(self.n, x.to_vec()).expect("iterates are nonnegative")
    }

    fn value(&self, x: &[f64]) -> f64 {
        density::polynomial_value(&self.measure(x), self.pattern).expect("pattern validated")
    }

    fn gradient(&self, x: &[f64]) -> Vec<f64> {
        density::gradient(&self.measure(x), self.pattern).expect("pattern validated").into_partials()
    }

    fn stationary(&self, x: &[f64], g: &[f64], tol: f64) -> bool {
        let mass: f64 = x.iter().sum();
        if mass <= 0.0 {
            return true;
        }
        let lambda = x.iter().zip(g).map(|(a, b)| a * b).sum::<f64>() / mass;
        x.iter().zip(g).all(|(&xi, &gi)| if xi > 0.0 { (gi - lambda).abs() <= tol } else { gi - lambda <= tol })
    }
}

struct Trajectory {
    x: Vec<f64>,
    value: f64,
    iterations: usize,
    converged: bool,
    /// Objective after each accepted iterate, starting point first.
    history: Vec<f64>,
}

fn start_point(problem: &Problem<'_>, mass: f64, index: usize, rng: &mut ChaCha8Rng) -> (Vec<f64>, StartKind) {
    let n = problem.n;
    let len = n * (n - 1) / 2;
    if index == 0 {
        return (vec![mass / len as f64; len], StartKind::UniformAll);
    }
    if index % 2 == 1 && n >= 3 {
        let natural = match *problem.pattern {
            PatternSpec::Path { m } | PatternSpec::Cycle { m } | PatternSpec::Rho { m } => m,
            PatternSpec::AnchoredPair { s, t, .. } => s + t + 2,
        };
        let natural = natural.clamp(3, n);
        let lengths = n - 2;
        let length = 3 + (natural - 3 + index / 2) % lengths;
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        let mut x = vec![0.0; len];
        for k in 0..length {
            let (a, b) = (order[k], order[(k + 1) % length]);
            x[pair_index(n, a.min(b), a.max(b))] = mass / length as f64;
        }
        return (x, StartKind::UniformCycle { length });
    }
    let mut x: Vec<f64> = (0..len).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total: f64 = x.iter().sum();
    for xi in &mut x {
        *xi *= mass / total;
    }
    (x, StartKind::Dirichlet)
}

fn projected_gradient(problem: &Problem<'_>, cfg: &SolverConfig, mut x: Vec<f64>) -> Trajectory {
    let mut f = problem.value(&x);
    let mut g = problem.gradient(&x);
    let gmax = g.iter().fold(0.0f64, |a, &b| a.max(b.abs()));
    let mut step = if gmax > 0.0 { cfg.mass / gmax } else { 1.0 };
    let mut iterations = 0;
    let mut history = vec![f];
    while iterations < cfg.max_iterations {
        if problem.stationary(&x, &g, cfg.convergence_tol) {
            return Trajectory { x, value: f, iterations, converged: true, history };
        }
        iterations += 1;
        match cfg.step_rule {
            StepRule::Fixed => {
                let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + cfg.step_size * b).collect();
                x = project_to_simplex(&trial, cfg.mass);
                f = problem.value(&x);
                g = problem.gradient(&x);
                history.push(f);
            }
            StepRule::LineSearch => {
                let mut accepted = false;
                while step > f64::MIN_POSITIVE {
                    let trial: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b).collect();
                    let y = project_to_simplex(&trial, cfg.mass);
                    let ascent: f64 = y.iter().zip(&x).zip(&g).map(|((yi, xi), gi)| (yi - xi) * gi).sum();
                    if y == x {
                        break;
                    }
                    let fy = problem.value(&y);
                    if fy >= f + 1e-4 * ascent && fy >= f {
                        x = y;
                        f = fy;
                        g = problem.gradient(&x);
                        history.push(f);
                        step *= 2.0;
                        accepted = true;
                        break;
                    }
                    step *= 0.5;
                }
                if !accepted {
                    break;
                }
            }
        }
    }
    let converged = problem.stationary(&x, &g, cfg.convergence_tol);
    Trajectory { x, value: f, iterations, converged, history }
}

fn frank_wolfe(problem: &Problem<'_>, cfg: &SolverConfig, mut x: Vec<f64>) -> Trajectory {
    let mut f = problem.value(&x);
    let mut g = problem.gradient(&x);
    let mut iterations = 0;
    let mut history = vec![f];
    while iterations < cfg.max_iterations {
        if problem.stationary(&x, &g, cfg.convergence_tol) {
            return Trajectory { x, value: f, iterations, converged: true, history };
        }
        iterations += 1;
        let best = g.iter().enumerate().fold(0, |b, (i, &gi)| if gi > g[b] { i } else { b });
        let direction: Vec<f64> =
            x.iter().enumerate().map(|(i, &xi)| if i == best { cfg.mass - xi } else { -xi }).collect();
        let along = |gamma: f64| -> Vec<f64> {
            x.iter().zip(&direction).map(|(xi, di)| (xi + gamma * di).max(0.0)).collect()
        };
        let gamma = match cfg.step_rule {
            StepRule::Fixed => 2.0 / (iterations as f64 + 2.0),
            StepRule::LineSearch => {
                // golden-section search on [0, 1]
                let phi = (5f64.sqrt() - 1.0) / 2.0;
                let (mut lo, mut hi) = (0.0f64, 1.0f64);
                for _ in 0..80 {
                    let a = hi - phi * (hi - lo);
                    let b = lo + phi * (hi - lo);
                    if problem.value(&along(a)) < problem.value(&along(b)) {
                        lo = a;
                    } else {
                        hi = b;
                    }
                }
                let mid = (lo + hi) / 2.0;
                if problem.value(&along(1.0)) >= problem.value(&along(mid)) {
                    1.0
                } else {
                    mid
                }
            }
        };
        let y = along(gamma);
        let fy = problem.value(&y);
        if cfg.step_rule == StepRule::LineSearch && fy <= f {
            break;
        }
        x = y;
        f = fy;
        g = problem.gradient(&x);
        history.push(f);
    }
    let converged = problem.stationary(&x, &g, cfg.convergence_tol);
    Trajectory { x, value: f, iterations, converged, history }
}

/// Multi-restart maximization of a density over measures of the configured
/// mass on `K_n`. Restarts are independent and seeded from `(seed, index)`,
/// so the result does not depend on how they are scheduled.
pub fn maximize(pattern: &PatternSpec, cfg: &SolverConfig) -> Result<OptimizeResult> {
    cfg.validate(pattern)?;
    let n = cfg.n;
    if cfg.mass == 0.0 {
        let measure = EdgeMeasure::zero(n)?;
        let value = density::polynomial_value(&measure, pattern)?;
        return Ok(OptimizeResult {
            pattern: *pattern,
            measure,
            value,
            kkt: None,
            converged: true,
            iterations: 0,
            restart_index: 0,
            restarts: Vec::new(),
        });
    }
    let problem = Problem { pattern, n };
    let runs: Vec<(Trajectory, StartKind)> = (0..cfg.restarts)
        .into_par_iter()
        .map(|index| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(index as u64);
            let (x0, start) = start_point(&problem, cfg.mass, index, &mut rng);
            let run = match cfg.method {
                Method::ProjectedGradient => projected_gradient(&problem, cfg, x0),
                Method::FrankWolfe => frank_wolfe(&problem, cfg, x0),
            };
            (run, start)
        })
        .collect();

    // best value wins; inside the rounding band a converged run is preferred
    let top = runs.iter().map(|(run, _)| run.value).fold(f64::NEG_INFINITY, f64::max);
    let band = top - TIE_RELATIVE * top.abs().max(1.0);
    let tied: Vec<usize> = (0..runs.len()).filter(|&k| runs[k].0.value >= band).collect();
    let best = tied.iter().copied().find(|&k| runs[k].0.converged).unwrap_or(tied[0]);
    let restarts = runs
        .iter()
        .enumerate()
        .map(|(index, (run, start))| RestartSummary {
            index,
            start: start.clone(),
            start_value: run.history[0],
            value: run.value,
            accepted_steps: run.history.len() - 1,
            iterations: run.iterations,
            converged: run.converged,
        })
        .collect();
    let (run, _) = &runs[best];
    let measure = problem.measure(&run.x);
    let value = density::density(&measure, pattern)?;
    let kkt = kkt_check(&measure, pattern, cfg.convergence_tol)?;
    Ok(OptimizeResult {
        pattern: *pattern,
        measure,
        value,
        converged: run.converged,
        kkt: Some(kkt),
        iterations: run.iterations,
        restart_index: best,
        restarts,
    })
}
