//! The pipelines behind each subcommand.

use std::fs;

use pathex_core::constructions::{gap_target, BlowupSpec};
use pathex_core::graph6::to_graph6;
use pathex_core::optimizer::kkt_check;
use pathex_core::{
    conjecture_gap_report, density, max_copies_planar, maximize, uniform_cycle_measure, vertex_balance_residual,
    EdgeMeasure, PatternSpec, Rational, Scalar,
};
use serde_json::{json, Value};

use crate::certify;
use crate::error::CliError;
use crate::manifest::{Arithmetic, Command, ExperimentManifest};
use crate::report::{Report, Table};

/// Multiple of `m^{−m}·n^{m+1}` known to bound the blow-up counts.
pub const CONSTRUCTION_CONSTANT: f64 = 1e4;

pub fn run(manifest: &ExperimentManifest) -> Result<Report, CliError> {
    let command = manifest.command.ok_or_else(|| CliError::Usage("the manifest does not name a command".into()))?;
    let report = |arithmetic, result, table| Report {
        command,
        arithmetic,
        manifest: manifest.clone(),
        result,
        table,
        failures: 0,
    };
    match command {
        Command::Optimize => {
            if manifest.arithmetic == Some(Arithmetic::Exact) {
                return Err(CliError::Usage("optimize runs in float arithmetic".into()));
            }
            Ok(report(Arithmetic::Float, optimize(manifest)?, None))
        }
        Command::Evaluate => {
            let arithmetic = manifest.arithmetic.unwrap_or(Arithmetic::Exact);
            let result = match arithmetic {
                Arithmetic::Exact => evaluate::<Rational>(manifest)?,
                Arithmetic::Float => evaluate::<f64>(manifest)?,
            };
            Ok(report(arithmetic, result, None))
        }
        Command::Construct => {
            let (result, table) = construct(manifest)?;
            Ok(report(Arithmetic::Exact, result, Some(table)))
        }
        Command::Oracle => Ok(report(Arithmetic::Exact, oracle(manifest)?, None)),
        Command::Certify => {
            let suite = certify::run_suite(&certify::SuiteConfig::from_manifest(manifest)?)?;
            let failures = suite.failures();
            Ok(Report { failures, ..report(Arithmetic::Float, suite.to_json(), Some(suite.table())) })
        }
    }
}

fn max_abs(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().fold(0.0, |a, x| a.max(x.abs()))
}

fn optimize(manifest: &ExperimentManifest) -> Result<Value, CliError> {
    let pattern = manifest.density_pattern()?;
    let config = manifest.solver_config()?;
    let result = maximize(&pattern, &config)?;
    let mut diagnostics = serde_json::Map::new();
    if result.measure.support_size() > 0 {
        match pattern {
            PatternSpec::Path { m } if config.mass == 1.0 => {
                let residual = vertex_balance_residual(&result.measure, m)?;
                diagnostics.insert("max_balance_residual".into(), json!(max_abs(residual)));
            }
            PatternSpec::Rho { .. } => {
                diagnostics.insert("max_weighted_degree".into(), json!(max_abs(result.measure.weighted_degrees())));
            }
            _ => {}
        }
    }
    let mut out = result.to_json();
    out["config"] = serde_json::to_value(&config).expect("config serializes");
    out["diagnostics"] = Value::Object(diagnostics);
    Ok(out)
}

fn load_measure<T: Scalar>(manifest: &ExperimentManifest, pattern: &PatternSpec) -> Result<EdgeMeasure<T>, CliError> {
    let source = manifest.measure.as_deref().ok_or_else(|| CliError::Usage("--measure is required".into()))?;
    if source == "uniform-cycle" {
        let n = manifest.n.ok_or_else(|| CliError::Usage("--n is required".into()))?;
        let m = match *pattern {
            PatternSpec::Path { m } | PatternSpec::Cycle { m } | PatternSpec::Rho { m } => manifest.m.unwrap_or(m),
            PatternSpec::AnchoredPair { .. } => {
                manifest.m.ok_or_else(|| CliError::Usage("give the cycle length with --m".into()))?
            }
        };
        return Ok(uniform_cycle_measure(m, n)?);
    }
    let text = fs::read_to_string(source).map_err(|e| CliError::Io(format!("{source}: {e}")))?;
    let doc: Value = serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{source}: {e}")))?;
    let mu = EdgeMeasure::<T>::from_json(&doc)?;
    if let Some(n) = manifest.n {
        if n != mu.n() {
            return Err(CliError::Usage(format!("--n {n} disagrees with the measure file (n = {})", mu.n())));
        }
    }
    Ok(mu)
}

fn evaluate<T: Scalar>(manifest: &ExperimentManifest) -> Result<Value, CliError> {
    // anchors default to (1, n) of the measure, so resolve n first
    let provisional = ExperimentManifest { n: manifest.n.or(Some(2)), ..manifest.clone() }.density_pattern()?;
    let mu = load_measure::<T>(manifest, &provisional)?;
    let pattern = ExperimentManifest { n: Some(mu.n()), ..manifest.clone() }.density_pattern()?;
    let value = density(&mu, &pattern)?;
    let tol = manifest.tol.unwrap_or(1e-9);
    let kkt = if mu.support_size() > 0 { Some(kkt_check(&mu, &pattern, tol)?) } else { None };
    Ok(json!({
        "pattern": pattern,
        "value": value.to_json(),
        "value_float": value.to_f64(),
        "mass": mu.mass().to_json(),
        "measure": mu.to_json(),
        "kkt": kkt,
    }))
}

fn construct(manifest: &ExperimentManifest) -> Result<(Value, Table), CliError> {
    let m = manifest.m.ok_or_else(|| CliError::Usage("construct needs --m".into()))?;
    let ns = match (&manifest.ns, manifest.n) {
        (Some(ns), None) => ns.clone(),
        (None, Some(n)) => vec![n],
        (Some(_), Some(_)) => return Err(CliError::Usage("give --n or --ns, not both".into())),
        (None, None) => return Err(CliError::Usage("construct needs --n or --ns".into())),
    };
    let rows = conjecture_gap_report(m, &ns)?;
    let mut json_rows = Vec::new();
    let mut table = Vec::new();
    for row in &rows {
        let spec = BlowupSpec::new(m, row.n)?;
        let bound = CONSTRUCTION_CONSTANT * gap_target(m, row.n) / 4.0;
        json_rows.push(json!({
            "m": row.m,
            "n": row.n,
            "count": row.count,
            "target": row.target,
            "ratio": row.ratio,
            "upper_bound": bound,
            "within_upper_bound": (row.count as f64) <= bound,
            "class_sizes": spec.class_sizes(),
            "graph6": to_graph6(&spec.graph()?),
        }));
        table.push(vec![
            row.m.to_string(),
            row.n.to_string(),
            row.count.to_string(),
            format!("{}", row.target),
            format!("{}", row.ratio),
        ]);
    }
    Ok((json!({ "rows": json_rows }), Table { headers: vec!["m", "n", "count", "target", "ratio"], rows: table }))
}

fn oracle(manifest: &ExperimentManifest) -> Result<Value, CliError> {
    let queries = manifest.oracle_queries()?;
    let results = queries.iter().map(max_copies_planar).collect::<Result<Vec<_>, _>>()?;
    let values: Vec<Value> = results.iter().map(|r| serde_json::to_value(r).expect("result serializes")).collect();
    Ok(if manifest.queries.is_some() { Value::Array(values) } else { values.into_iter().next().expect("one query") })
}
