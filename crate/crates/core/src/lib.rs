//! Edge-measure path densities on complete graphs: evaluation in exact and
//! floating-point arithmetic, maximization over the simplex with KKT
//! certificates, the blown-up cycle construction, and an exhaustive planar
//! copy-count oracle for tiny hosts.

pub mod canon;
pub mod constructions;
pub mod density;
pub mod error;
pub mod graph;
pub mod graph6;
pub mod measure;
pub mod optimizer;
pub mod oracle;
pub mod planarity;

pub use constructions::{blowup_cycle, conjecture_gap_report, uniform_cycle_measure, BlowupSpec, GapRow};
pub use density::{
    beta_density, beta_star_density, density, gradient, polynomial_value, rho_density, weighted_degree, GradientVector,
    PatternSpec,
};
pub use error::{Error, Result};
pub use graph::{enumerate_anchored_pair_copies, enumerate_path_copies, AnchoredPairCopy, PathCopy, SimpleGraph};
pub use measure::{EdgeMeasure, Rational, Scalar};
pub use oracle::{count_copies, max_copies_planar, CopyPattern, OracleMode, OracleQuery, OracleResult};
pub use planarity::is_planar;
pub use optimizer::{
    kkt_check, maximize, vertex_balance_residual, weight_shift_step, KktReport, Method, OptimizeResult, ShiftOutcome,
    SolverConfig, StepRule,
};
