//! Experiment manifests: the flat set of run parameters shared by manifest
//! files and command-line flags.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use pathex_core::oracle::{CopyPattern, OracleMode, OracleQuery, DEFAULT_ORACLE_CAP};
use pathex_core::{Method, PatternSpec, SolverConfig, StepRule};
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    Optimize,
    Certify,
    Construct,
    Oracle,
    Evaluate,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Optimize => "optimize",
            Command::Certify => "certify",
            Command::Construct => "construct",
            Command::Oracle => "oracle",
            Command::Evaluate => "evaluate",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Arithmetic {
    Exact,
    Float,
}

impl Arithmetic {
    pub fn name(self) -> &'static str {
        match self {
            Arithmetic::Exact => "exact",
            Arithmetic::Float => "float",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum StepRuleArg {
    Fixed,
    LineSearch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum MethodArg {
    ProjectedGradient,
    FrankWolfe,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OracleModeArg {
    AllGraphs,
    MaximalPlanarOnly,
}

/// Every run parameter. Unset fields fall back to per-command defaults.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, Args)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentManifest {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,

    /// Objective or copy pattern: path, cycle, rho, anchored-pair; a size
    /// suffix such as path3 or P3 sets m.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pattern: Option<String>,
    /// Vertex count of the path or cycle, or the rho walk length.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Edges of the first anchored path.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    /// Edges of the second anchored path.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<usize>,
    /// First anchor (default 1).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub a: Option<usize>,
    /// Second anchor (default n).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub b: Option<usize>,
    /// Host size.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    /// Host sizes for construction tables.
    #[arg(long, value_delimiter = ',')]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ns: Option<Vec<usize>>,

    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub restarts: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_iterations: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_rule: Option<StepRuleArg>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<MethodArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub step_size: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub convergence_tol: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,

    /// `uniform-cycle` or a path to a measure JSON file.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub measure: Option<String>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub arithmetic: Option<Arithmetic>,
    /// Tolerance for stationarity reports and envelope checks.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,

    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<OracleModeArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cap: Option<usize>,
    /// Batch oracle queries (manifest only).
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub queries: Option<Vec<OracleQuery>>,

    /// Report destination; standard output when absent.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

macro_rules! overlay {
    ($base:ident, $top:ident, $($field:ident),*) => {
        $( if $top.$field.is_some() { $base.$field = $top.$field.clone(); } )*
    };
}

impl ExperimentManifest {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))?;
        let is_toml = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("toml"));
        if is_toml {
            toml::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        } else {
            serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
        }
    }

    /// Fields set in `top` replace those in `self`.
    pub fn overlay(mut self, top: &ExperimentManifest) -> Self {
        overlay!(
            self, top, command, pattern, m, s, t, a, b, n, ns, mass, restarts, max_iterations, step_rule, method,
            step_size, convergence_tol, seed, measure, arithmetic, tol, mode, cap, queries, output, format
        );
        self
    }

    /// The manifest as embedded in reports: the output destination is
    /// left out since it does not affect the result.
    pub fn for_report(&self) -> Self {
        ExperimentManifest { output: None, ..self.clone() }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or(Format::Json)
    }

    fn require_n(&self) -> Result<usize, CliError> {
        self.n.ok_or_else(|| CliError::Usage("--n is required".into()))
    }

    /// Splits `path3`, `P3`, `path(3)`, `rho` into a kind and optional size.
    fn pattern_parts(&self) -> Result<(String, Option<usize>), CliError> {
        let raw = self.pattern.as_deref().ok_or_else(|| CliError::Usage("--pattern is required".into()))?;
        let lower = raw.trim().to_ascii_lowercase();
        let split = lower.find(|c: char| c.is_ascii_digit() || c == '(').unwrap_or(lower.len());
        let (kind, size) = lower.split_at(split);
        let kind = match kind.trim_end_matches('-') {
            "p" | "path" => "path",
            "c" | "cycle" => "cycle",
            "rho" => "rho",
            "anchored" | "anchored-pair" | "pair" => "anchored-pair",
            other => return Err(CliError::Usage(format!("unknown pattern {other:?}"))),
        };
        let size = size.trim_start_matches('(').trim_end_matches(')');
        let size = if size.is_empty() {
            None
        } else {
            Some(size.parse().map_err(|_| CliError::Usage(format!("bad pattern size in {raw:?}")))?)
        };
        if let (Some(k), Some(m)) = (size, self.m) {
            if k != m {
                return Err(CliError::Usage(format!("pattern {raw:?} conflicts with --m {m}")));
            }
        }
        Ok((kind.to_string(), size.or(self.m)))
    }

    pub fn density_pattern(&self) -> Result<PatternSpec, CliError> {
        let (kind, m) = self.pattern_parts()?;
        let need_m = || m.ok_or_else(|| CliError::Usage(format!("pattern {kind} needs --m")));
        let p = match kind.as_str() {
            "path" => PatternSpec::Path { m: need_m()? },
            "cycle" => PatternSpec::Cycle { m: need_m()? },
            "rho" => PatternSpec::Rho { m: need_m()? },
            _ => {
                let s = self.s.ok_or_else(|| CliError::Usage("anchored-pair needs --s".into()))?;
                let t = self.t.ok_or_else(|| CliError::Usage("anchored-pair needs --t".into()))?;
                PatternSpec::AnchoredPair { s, t, a: self.a.unwrap_or(1), b: self.b.unwrap_or(self.require_n()?) }
            }
        };
        p.validate().map_err(CliError::from)?;
        Ok(p)
    }

    pub fn copy_pattern(&self) -> Result<CopyPattern, CliError> {
        let (kind, m) = self.pattern_parts()?;
        let k = m.ok_or_else(|| CliError::Usage(format!("pattern {kind} needs a size (e.g. path3 or --m 3)")))?;
        match kind.as_str() {
            "path" => Ok(CopyPattern::Path(k)),
            "cycle" => Ok(CopyPattern::Cycle(k)),
            other => Err(CliError::Usage(format!("the oracle counts paths and cycles, not {other}"))),
        }
    }

    pub fn solver_config(&self) -> Result<SolverConfig, CliError> {
        let d = SolverConfig::default();
        Ok(SolverConfig {
            n: self.require_n()?,
            mass: self.mass.unwrap_or(d.mass),
            restarts: self.restarts.unwrap_or(d.restarts),
            max_iterations: self.max_iterations.unwrap_or(d.max_iterations),
            step_rule: match self.step_rule {
                Some(StepRuleArg::Fixed) => StepRule::Fixed,
                Some(StepRuleArg::LineSearch) => StepRule::LineSearch,
                None => d.step_rule,
            },
            method: match self.method {
                Some(MethodArg::FrankWolfe) => Method::FrankWolfe,
                Some(MethodArg::ProjectedGradient) => Method::ProjectedGradient,
                None => d.method,
            },
            step_size: self.step_size.unwrap_or(d.step_size),
            convergence_tol: self.convergence_tol.unwrap_or(d.convergence_tol),
            seed: self.seed.unwrap_or(d.seed),
        })
    }

    pub fn oracle_queries(&self) -> Result<Vec<OracleQuery>, CliError> {
        if let Some(q) = &self.queries {
            if self.pattern.is_some() || self.n.is_some() {
                return Err(CliError::Usage("give either queries or a single --n/--pattern, not both".into()));
            }
            return Ok(q.clone());
        }
        let mode = match self.mode {
            Some(OracleModeArg::AllGraphs) => OracleMode::AllGraphs,
            _ => OracleMode::MaximalPlanarOnly,
        };
        Ok(vec![OracleQuery {
            n: self.require_n()?,
            pattern: self.copy_pattern()?,
            mode,
            cap: self.cap.unwrap_or(DEFAULT_ORACLE_CAP),
        }])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn with_pattern(p: &str) -> ExperimentManifest {
        ExperimentManifest { pattern: Some(p.into()), n: Some(6), ..Default::default() }
    }

    #[test]
    fn pattern_forms() {
        assert_eq!(with_pattern("path3").density_pattern().unwrap(), PatternSpec::Path { m: 3 });
        assert_eq!(with_pattern("P4").copy_pattern().unwrap(), CopyPattern::Path(4));
        assert_eq!(with_pattern("cycle(5)").copy_pattern().unwrap(), CopyPattern::Cycle(5));
        let rho = ExperimentManifest { m: Some(3), ..with_pattern("rho") };
        assert_eq!(rho.density_pattern().unwrap(), PatternSpec::Rho { m: 3 });
        let pair = ExperimentManifest { s: Some(2), t: Some(1), ..with_pattern("anchored-pair") };
        assert_eq!(pair.density_pattern().unwrap(), PatternSpec::AnchoredPair { s: 2, t: 1, a: 1, b: 6 });
        assert!(with_pattern("rho").density_pattern().is_err());
        assert!(with_pattern("star3").density_pattern().is_err());
        assert!(ExperimentManifest { m: Some(4), ..with_pattern("path3") }.density_pattern().is_err());
        assert!(with_pattern("rho3").copy_pattern().is_err());
    }

    #[test]
    fn overlay_prefers_top() {
        let base = ExperimentManifest { n: Some(5), seed: Some(1), ..Default::default() };
        let top = ExperimentManifest { seed: Some(9), ..Default::default() };
        let merged = base.overlay(&top);
        assert_eq!((merged.n, merged.seed), (Some(5), Some(9)));
    }

    #[test]
    fn manifest_documents() {
        let json: ExperimentManifest =
            serde_json::from_str(r#"{"command": "optimize", "pattern": "rho", "m": 3, "n": 6, "step-rule": "line-search"}"#)
                .unwrap();
        assert_eq!(json.command, Some(Command::Optimize));
        assert_eq!(json.step_rule, Some(StepRuleArg::LineSearch));
        let toml_doc: ExperimentManifest = toml::from_str("command = \"oracle\"\nn = 4\npattern = \"path3\"\n").unwrap();
        assert_eq!(toml_doc.oracle_queries().unwrap()[0].pattern, CopyPattern::Path(3));
        assert!(serde_json::from_str::<ExperimentManifest>(r#"{"bogus": 1}"#).is_err());
    }
}
