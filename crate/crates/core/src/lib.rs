//! Stochastic completeness of weighted graphs.
//!
//! The crate decides whether the heat semigroup of a weighted graph
//! `(V, b, mu)` preserves mass, using analytic criteria on radial profiles
//! and explicit windows, and cross-checks verdicts with numerical oracles
//! (lambda-harmonic exhaustion, killed heat flow, random walk sampling).
//!
//! Graph windows, global degree, surgery and the oracles are generic over
//! [`Scalar`] (`f32` or `f64`); the aliases below fix `f64`.

pub mod asymptotic;
pub mod builders;
pub mod criteria;
pub mod error;
pub mod global_degree;
pub mod graph;
pub mod oracle;
pub mod radial;
pub mod scalar;
pub mod sequence;
pub mod surgery;
pub mod verdict;

pub use error::{Error, Result};
pub use graph::{
    apply_laplacian, validate_graph, weighted_degree, DegreeValue, GraphBuilder, GraphWindow,
    ValidationReport, VertexId, VertexValues, Violation,
};
pub use radial::{radial_statistics, RadialProfile, RadialStats, Tail};
pub use scalar::Scalar;
pub use global_degree::{
    bounded_degree_completeness_test, global_degree_limit, global_degree_step, DegreeSource,
    GlobalDegreeSchedule, GlobalDegreeTable,
};
pub use sequence::{RadialExpr, TailedSequence};
pub use verdict::{Caveat, Certificate, ParamValue, Region, Status, TheoremTag, Verdict};

/// Window with `f64` weights and measures.
pub type Graph = GraphWindow<f64>;
