use serde_json::{json, Value};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_ENVELOPE: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error("{0}")]
    Core(#[from] pathex_core::Error),

    #[error("{0}")]
    Io(String),

    /// The report was written, but at least one envelope check failed.
    #[error("{failed} envelope check(s) failed")]
    Envelope { failed: usize },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        use pathex_core::Error as E;
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_FAILURE,
            CliError::Envelope { .. } => EXIT_ENVELOPE,
            CliError::Core(E::ResourceLimit(_)) => EXIT_RESOURCE,
            CliError::Core(E::Verification(_)) => EXIT_FAILURE,
            CliError::Core(_) => EXIT_USAGE,
        }
    }

    pub fn kind(&self) -> &'static str {
        use pathex_core::Error as E;
        match self {
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Envelope { .. } => "envelope-violation",
            CliError::Core(e) => match e {
                E::ResourceLimit(_) => "resource-limit",
                E::InvalidPattern(_) => "invalid-pattern",
                E::InvalidAnchor(_) => "invalid-anchor",
                E::InvalidVertex { .. } | E::InvalidEdge(_) => "invalid-graph",
                E::NonProbabilityMeasure { .. } | E::InvalidMeasure(_) => "invalid-measure",
                E::DegenerateMeasure(_) => "degenerate-measure",
                E::InvalidSpec(_) => "invalid-spec",
                E::InvalidConfig(_) => "invalid-config",
                E::Graph6(_) => "graph6",
                E::Verification(_) => "verification",
            },
        }
    }

    /// The structured error document written to standard error.
    pub fn to_json(&self) -> Value {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.to_string(),
                "exit_code": self.exit_code(),
            }
        })
    }
}
