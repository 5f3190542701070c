//! The bound-envelope suite: optimizer values, exact fixtures and
//! construction counts checked against known bounds.

use pathex_core::constructions::gap_target;
use pathex_core::measure::rational;
use pathex_core::{
    conjecture_gap_report, density, maximize, uniform_cycle_measure, vertex_balance_residual, EdgeMeasure,
    OptimizeResult, PatternSpec, Rational, SolverConfig,
};
use serde::Serialize;
use serde_json::{json, Value};

use crate::commands::CONSTRUCTION_CONSTANT;
use crate::error::CliError;
use crate::manifest::ExperimentManifest;
use crate::report::Table;

pub const ENVELOPE_SLACK: f64 = 1e-6;
pub const PATH_LOWER_SLACK: f64 = 1e-4;
pub const RHO3_LOWER_SLACK: f64 = 1e-3;
pub const STATIONARITY_TOL: f64 = 1e-5;

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteConfig {
    /// Largest host size swept.
    pub max_n: usize,
    pub restarts: usize,
    pub seed: u64,
    pub construction_ns: Vec<usize>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { max_n: 8, restarts: 16, seed: 0, construction_ns: vec![6, 10, 14, 18] }
    }
}

impl SuiteConfig {
    pub fn from_manifest(manifest: &ExperimentManifest) -> Result<Self, CliError> {
        let d = SuiteConfig::default();
        let cfg = SuiteConfig {
            max_n: manifest.n.unwrap_or(d.max_n),
            restarts: manifest.restarts.unwrap_or(d.restarts),
            seed: manifest.seed.unwrap_or(d.seed),
            construction_ns: manifest.ns.clone().unwrap_or(d.construction_ns),
        };
        if !(6..=pathex_core::optimizer::MAX_OPTIMIZER_N).contains(&cfg.max_n) {
            return Err(CliError::Usage(format!(
                "certify sweeps hosts up to --n, which must lie in 6..={}",
                pathex_core::optimizer::MAX_OPTIMIZER_N
            )));
        }
        if cfg.restarts == 0 {
            return Err(CliError::Usage("--restarts must be at least 1".into()));
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skip => "skip",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub check: &'static str,
    pub parameters: String,
    pub value: String,
    pub bound: String,
    pub status: Status,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Suite {
    pub checks: Vec<Check>,
}

impl Suite {
    fn push(&mut self, check: &'static str, parameters: String, value: String, bound: String, status: Status) {
        self.checks.push(Check { check, parameters, value, bound, status });
    }

    fn count(&self, status: Status) -> usize {
        self.checks.iter().filter(|c| c.status == status).count()
    }

    pub fn failures(&self) -> usize {
        self.count(Status::Fail)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "summary": {
                "checks": self.checks.len(),
                "passed": self.count(Status::Pass),
                "failed": self.count(Status::Fail),
                "skipped": self.count(Status::Skip),
            },
            "checks": self.checks,
        })
    }

    pub fn table(&self) -> Table {
        Table {
            headers: vec!["check", "parameters", "value", "bound", "status"],
            rows: self
                .checks
                .iter()
                .map(|c| vec![c.check.to_string(), c.parameters.clone(), c.value.clone(), c.bound.clone(), c.status.name().to_string()])
                .collect(),
        }
    }

    /// Stationarity data for a converged optimizer result; skipped when
    /// the run did not converge.
    fn stationarity(&mut self, label: String, result: &OptimizeResult) -> Result<(), CliError> {
        let kkt = match (&result.kkt, result.converged) {
            (Some(k), true) => k,
            _ => {
                self.push("stationarity-certificate", label, "unconverged".into(), format!("< {STATIONARITY_TOL:e}"), Status::Skip);
                return Ok(());
            }
        };
        let mut worst = kkt.max_violation.max(kkt.max_inactive_excess);
        if let PatternSpec::Path { m } = result.pattern {
            let residual = vertex_balance_residual(&result.measure, m)?;
            worst = worst.max(residual.iter().fold(0.0f64, |a, r| a.max(r.abs())));
        }
        self.push(
            "stationarity-certificate",
            label,
            format!("{worst:e}"),
            format!("< {STATIONARITY_TOL:e}"),
            Status::from_bool(worst < STATIONARITY_TOL),
        );
        Ok(())
    }
}

fn solve(pattern: PatternSpec, n: usize, cfg: &SuiteConfig, restarts: usize) -> Result<OptimizeResult, CliError> {
    let config = SolverConfig { n, restarts, seed: cfg.seed, ..SolverConfig::default() };
    Ok(maximize(&pattern, &config)?)
}

fn powf(m: usize, e: i32) -> f64 {
    (m as f64).powi(e)
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<Suite, CliError> {
    let mut suite = Suite::default();

    // exact fixtures on the uniform cycle measure
    for m in 3..=5usize {
        for n in [m, cfg.max_n] {
            let mu: EdgeMeasure<Rational> = uniform_cycle_measure(m, n)?;
            let mm = (m as i64).pow(m as u32);
            let expected = [
                (PatternSpec::Path { m }, rational((m * m) as i64, mm)),
                (PatternSpec::Cycle { m }, rational(1, mm)),
                (PatternSpec::Rho { m }, rational(8, mm)),
            ];
            for (pattern, want) in expected {
                let got = density(&mu, &pattern)?;
                suite.push(
                    "uniform-cycle-fixture",
                    format!("{pattern} n={n}"),
                    got.to_string(),
                    format!("= {want}"),
                    Status::from_bool(got == want),
                );
            }
        }
    }

    // rho(3) optimum
    let rho3 = solve(PatternSpec::Rho { m: 3 }, 6, cfg, cfg.restarts.max(20))?;
    let target = 8.0 / 27.0;
    suite.push(
        "rho3-optimum",
        "rho(3) n=6".into(),
        format!("{}", rho3.value),
        format!("[8/27 - {RHO3_LOWER_SLACK:e}, 8/27 + {ENVELOPE_SLACK:e}]"),
        Status::from_bool(rho3.value >= target - RHO3_LOWER_SLACK && rho3.value <= target + ENVELOPE_SLACK),
    );
    suite.stationarity("rho(3) n=6".into(), &rho3)?;

    // path densities
    let mut best_path = std::collections::BTreeMap::new();
    for m in 3..=5usize {
        for n in m..=cfg.max_n {
            let r = solve(PatternSpec::Path { m }, n, cfg, cfg.restarts)?;
            let lower = 1.0 / powf(m, m as i32 - 2) - PATH_LOWER_SLACK;
            let upper = 2.0 * std::f64::consts::E.powi(2) / powf(m, m as i32 - 2);
            let label = format!("path({m}) n={n}");
            suite.push(
                "path-density-envelope",
                label.clone(),
                format!("{}", r.value),
                format!("[{lower}, {upper}]"),
                Status::from_bool(r.value >= lower && r.value <= upper),
            );
            suite.stationarity(label, &r)?;
            if n == cfg.max_n {
                best_path.insert(m, r.value);
            }
        }
    }

    // anchored pairs with unit mass
    for m in 2..=4usize {
        for l in 0..=m {
            for n in m + 2..=cfg.max_n {
                let pattern = PatternSpec::AnchoredPair { s: l, t: m - l, a: 1, b: n };
                let r = solve(pattern, n, cfg, cfg.restarts)?;
                let bound = 1.0 / powf(m, m as i32) + ENVELOPE_SLACK;
                let label = format!("{pattern} n={n}");
                suite.push(
                    "anchored-pair-envelope",
                    label.clone(),
                    format!("{}", r.value),
                    format!("<= {bound}"),
                    Status::from_bool(r.value <= bound),
                );
                suite.stationarity(label, &r)?;
            }
        }
    }

    // rho against the path density
    let n = cfg.max_n;
    for m in 2..=4usize {
        let beta = match best_path.get(&m) {
            Some(&b) => b,
            None => solve(PatternSpec::Path { m }, n, cfg, cfg.restarts)?.value,
        };
        let r = solve(PatternSpec::Rho { m }, n, cfg, cfg.restarts)?;
        let label = format!("rho({m}) n={n}");
        let upper = 1152.0 / (m * m) as f64 * beta + ENVELOPE_SLACK;
        suite.push(
            "rho-path-transfer",
            label.clone(),
            format!("{}", r.value),
            format!("<= 1152/m^2 * {beta} + {ENVELOPE_SLACK:e}"),
            Status::from_bool(r.value <= upper),
        );
        let lower = 8.0 / powf(m, m as i32) - ENVELOPE_SLACK;
        suite.push(
            "rho-lower-envelope",
            label.clone(),
            format!("{}", r.value),
            format!(">= {lower}"),
            Status::from_bool(r.value >= lower),
        );
        if r.converged {
            let degree = r.measure.weighted_degrees().into_iter().fold(0.0f64, f64::max);
            let cap = 12.0 / (m - 1) as f64 + ENVELOPE_SLACK;
            suite.push(
                "rho-degree-bound",
                label.clone(),
                format!("{degree}"),
                format!("<= {cap}"),
                Status::from_bool(degree <= cap),
            );
        } else {
            suite.push("rho-degree-bound", label.clone(), "unconverged".into(), "-".into(), Status::Skip);
        }
        suite.stationarity(label, &r)?;
    }

    // blown-up cycle counts
    let m = 2;
    let rows = conjecture_gap_report(m, &cfg.construction_ns)?;
    for row in &rows {
        let bound = CONSTRUCTION_CONSTANT * gap_target(m, row.n) / 4.0;
        suite.push(
            "construction-envelope",
            format!("P5 in blow-up m=2 n={}", row.n),
            row.count.to_string(),
            format!("(0, {bound}]"),
            Status::from_bool(row.count > 0 && row.count as f64 <= bound),
        );
    }
    let increasing = rows.windows(2).all(|w| w[1].count > w[0].count && w[1].ratio > w[0].ratio);
    let below_one = rows.iter().all(|r| r.ratio < 1.0);
    let ratios: Vec<String> = rows.iter().map(|r| format!("{:.6}", r.ratio)).collect();
    suite.push(
        "construction-ratio-trend",
        format!("m=2 n={:?}", cfg.construction_ns),
        ratios.join(" "),
        "strictly increasing, < 1".into(),
        Status::from_bool(increasing && below_one),
    );
    Ok(suite)
}
