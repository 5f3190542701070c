use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid pattern: {0}")]
    InvalidPattern(String),

    #[error("anchors must be distinct vertices, got a = b = {0}")]
    InvalidAnchor(usize),

    #[error("vertex {vertex} is outside [1, {n}]")]
    InvalidVertex { vertex: usize, n: usize },

    #[error("invalid edge: {0}")]
    InvalidEdge(String),

    #[error("measure is not a probability measure (mass {mass})")]
    NonProbabilityMeasure { mass: f64 },

    #[error("degenerate measure: {0}")]
    DegenerateMeasure(String),

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("invalid specification: {0}")]
    InvalidSpec(String),

    #[error("invalid solver configuration: {0}")]
    InvalidConfig(String),

    #[error("resource limit exceeded: {0}")]
    ResourceLimit(String),

    #[error("graph6: {0}")]
    Graph6(String),

    #[error("verification failed: {0}")]
    Verification(String),
}
