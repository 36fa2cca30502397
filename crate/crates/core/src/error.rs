use thiserror::Error;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown vertex id {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {0} lies on the frontier")]
    FrontierVertex(VertexId),
    #[error("function undefined at vertex {0}")]
    MissingValue(VertexId),
    #[error("window has no root")]
    NoRoot,
    #[error("vertex {0} is unreachable from the root")]
    Unreachable(VertexId),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid graph: {0}")]
    InvalidGraph(String),
    #[error("profile inconsistent at radius {radius}: {reason}")]
    InconsistentProfile { radius: usize, reason: String },
    #[error("profile not realizable at radius {radius}: {reason}")]
    NotRealizable { radius: usize, reason: String },
    #[error("sphere size overflow at radius {0}")]
    Overflow(usize),
    #[error("negative term at index {0}")]
    NegativeTerm(usize),
    #[error("divergence hypothesis not established: {0}")]
    DivergenceNotEstablished(String),
    #[error("convergence hypothesis not established: {0}")]
    ConvergenceNotEstablished(String),
    #[error("weighted degree is bounded ({0}); use the bounded degree test instead")]
    BoundedDegree(String),
    #[error("test function is bounded: {0}")]
    BoundedFunction(String),
    #[error("test function is unbounded: {0}")]
    UnboundedFunction(String),
    #[error("test function is negative at {0}")]
    NegativeFunction(String),
    #[error("interface vertex {0} lies on the frontier")]
    InterfaceOnFrontier(VertexId),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("solver did not converge within {iterations} iterations (residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },
    #[error("time step underflow at h = {0:e}")]
    StepUnderflow(f64),
    #[error("root values not monotone: radius {radius} value {value} exceeds previous {previous}")]
    NonMonotone {
        radius: usize,
        value: f64,
        previous: f64,
    },
    #[error("internal error: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
