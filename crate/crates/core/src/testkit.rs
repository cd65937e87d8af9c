//! Seeded random fixtures for tests and property suites.
//!
//! Everything here is deterministic in the seed, so failing cases can be
//! replayed. Not intended for production use, but kept public so the
//! integration and acceptance suites of downstream crates can share it.

use rand::Rng;
pub use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

use crate::graph::{VertexFunction, WeightedGraph};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random connected graph with 2..=max_vertices vertices, measures and
/// weights drawn from [0.1, 10]. A random spanning tree guarantees
/// connectivity; extra edges are sprinkled on top.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, max_vertices: usize) -> WeightedGraph {
    let n = rng.random_range(2..=max_vertices.max(2));
    random_connected_graph_exact(rng, n)
}

/// Same as [`random_connected_graph`] with the vertex count pinned.
pub fn random_connected_graph_exact(rng: &mut ChaCha8Rng, n: usize) -> WeightedGraph {
    let vertices: Vec<(String, f64)> = (0..n)
        .map(|i| (format!("v{i}"), rng.random_range(0.1..10.0)))
        .collect();
    let mut edges: Vec<(String, String, f64)> = Vec::new();
    for i in 1..n {
        let j = rng.random_range(0..i);
        edges.push((format!("v{j}"), format!("v{i}"), rng.random_range(0.1..10.0)));
    }
    // Sprinkle extra edges with probability ~2/n per pair.
    let p_extra = (2.0 / n as f64).min(0.5);
    for i in 0..n {
        for j in (i + 1)..n {
            let is_tree_edge = edges
                .iter()
                .any(|(a, b, _)| (a == &format!("v{i}") && b == &format!("v{j}")) || (a == &format!("v{j}") && b == &format!("v{i}")));
            if !is_tree_edge && rng.random_range(0.0..1.0) < p_extra {
                edges.push((format!("v{i}"), format!("v{j}"), rng.random_range(0.1..10.0)));
            }
        }
    }
    WeightedGraph::from_parts(vertices, edges).expect("random graph construction is valid")
}

/// Random vertex function with values uniform in [lo, hi].
pub fn random_function(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> VertexFunction {
    VertexFunction::new((0..n).map(|_| rng.random_range(lo..hi)).collect())
}

/// Random function bounded away from zero: |u| in [0.5, 2] with random sign.
/// Useful for finite-difference checks where |u|^{p-3} factors appear.
pub fn random_function_away_from_zero(rng: &mut ChaCha8Rng, n: usize) -> VertexFunction {
    VertexFunction::new(
        (0..n)
            .map(|_| {
                let mag = rng.random_range(0.5..2.0);
                if rng.random_range(0.0..1.0) < 0.5 {
                    -mag
                } else {
                    mag
                }
            })
            .collect(),
    )
}
