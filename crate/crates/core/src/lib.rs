//! Normalized (mass-constrained) solutions of the nonlinear Schrödinger
//! equation on weighted finite graphs, with truncation handling for locally
//! finite graphs carrying a confining potential.
//!
//! The crate is organised around the discrete calculus of the μ-Laplacian:
//!
//! - [`graph`]: weighted graphs, vertex functions, Laplacian, gradient form,
//!   integrals, norms, and ball subgraphs;
//! - [`energy`]: the constrained functionals, Lagrange-multiplier formula,
//!   and Euler–Lagrange residuals;
//! - [`solver`]: projected gradient descent on the mass sphere
//!   (`minimize_normalized`) and its rescaled core;
//! - [`potential`]: the confining-potential problem on ball truncations
//!   (`maximize_constrained`, condition checks, truncation studies);
//! - [`asymptotics`]: mass sweeps, small/large-mass limit classification,
//!   and the generalized eigenproblem `−Δv = λ h v`;
//! - [`oracle`]: brute-force constrained search and finite-difference
//!   gradient checks that back the iterative solvers independently;
//! - [`io`] and [`fixtures`]: the JSON graph format and built-in graphs;
//! - [`generate`]: lattice generators materialised as ball truncations.

pub mod asymptotics;
pub mod energy;
pub mod error;
pub mod fixtures;
pub mod generate;
pub mod graph;
pub mod io;
pub mod oracle;
pub mod potential;
pub mod solver;
pub mod testkit;

pub use error::{Error, Result};
pub use graph::{Edge, GraphBuilder, InducedSubgraph, VertexFunction, WeightedGraph};
pub use solver::{
    constant_candidate, minimize_normalized, Initialization, ProblemSpec, Solution, SolverOptions,
};
