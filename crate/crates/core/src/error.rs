use thiserror::Error;

use crate::solver::Solution;

/// Errors shared by graph construction, the discrete calculus, and the
/// constrained solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("graph needs at least one vertex")]
    EmptyGraph,

    #[error("duplicate vertex id {id:?}")]
    DuplicateVertex { id: String },

    #[error("measure must be positive at vertex {id:?} (got {value})")]
    NonPositiveMeasure { id: String, value: f64 },

    #[error("weight must be positive on edge {a:?}-{b:?} (got {value})")]
    NonPositiveWeight { a: String, b: String, value: f64 },

    #[error("edge endpoint {id:?} is not a vertex of the graph")]
    UnknownEndpoint { id: String },

    #[error("self-loop at vertex {id:?}")]
    SelfLoop { id: String },

    #[error("duplicate edge {a:?}-{b:?}")]
    DuplicateEdge { a: String, b: String },

    #[error("unknown vertex {id:?}")]
    UnknownVertex { id: String },

    #[error("function has {got} values but the graph has {expected} vertices")]
    DomainMismatch { expected: usize, got: usize },

    #[error("exponent must satisfy {requirement} (got {value})")]
    InvalidExponent { value: f64, requirement: &'static str },

    #[error("mass must be positive (got {0})")]
    NonPositiveMass(f64),

    #[error("mass constraint violated: expected {expected}, got {actual}")]
    MassMismatch { expected: f64, actual: f64 },

    #[error("potential must be strictly positive (min h = {min} at vertex {id:?})")]
    NonPositivePotential { id: String, min: f64 },

    #[error("graph is disconnected; the constrained problems assume connectivity")]
    DisconnectedGraph,

    #[error("origin vertex {id:?} is isolated (deg = 0)")]
    IsolatedOrigin { id: String },

    #[error(
        "solver did not converge after {iterations} iterations \
         (best residual {residual:.3e}); best iterate attached"
    )]
    NotConverged {
        best: Box<Solution>,
        iterations: u64,
        residual: f64,
    },

    #[error("invalid problem: {0}")]
    InvalidProblem(String),

    #[error("brute-force search handles at most 3 vertices (got {0})")]
    TooManyVertices(usize),

    #[error("finite-difference step must be positive (got {0})")]
    NonPositiveStep(f64),

    #[error("truncation radii must be strictly increasing")]
    RadiiNotIncreasing,

    #[error("mass sweep tail has not settled: {0}")]
    SweepNotSettled(String),

    #[error("limit multiplier inconsistent: {0}")]
    InconsistentMultiplier(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("failed to read {path:?}")]
    FileIo {
        path: String,
        #[source]
        source: std::io::Error,
    },

    #[error("graph file is not valid JSON: {0}")]
    FileParse(#[from] serde_json::Error),

    #[error("graph file, {location}: {source}")]
    FileField {
        location: String,
        #[source]
        source: Box<Error>,
    },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
