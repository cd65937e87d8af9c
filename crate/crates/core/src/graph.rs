//! Weighted-graph data model and the discrete calculus built on it.
//!
//! A [`WeightedGraph`] carries a positive vertex measure μ and symmetric
//! positive edge weights w. Functions on the vertex set live in
//! [`VertexFunction`], laid out in the graph's deterministic insertion order
//! so that repeated runs are bit-reproducible. The calculus operations follow
//! the usual μ-Laplacian conventions:
//!
//! ```text
//! Δu(x)      = (1/μ(x))  Σ_{y∼x} w_xy (u(y) − u(x))
//! Γ(u,v)(x)  = (1/2μ(x)) Σ_{y∼x} w_xy (u(y) − u(x))(v(y) − v(x))
//! ∫_V u dμ   = Σ_x μ(x) u(x)
//! ```
//!
//! with `Γ(u,u) = |∇u|²` and Green's identity `∫(−Δu)v dμ = ∫Γ(u,v) dμ`.

use std::collections::HashMap;
use std::ops::Index;

use crate::error::{Error, Result};

/// One undirected edge, stored once with endpoint indices `a < b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub w: f64,
}

/// A finite weighted graph with vertex measure μ and edge weights w.
///
/// Immutable after construction: any number of threads may share a reference.
/// Vertex order is the insertion order of the builder, and every
/// [`VertexFunction`] uses that order for its value layout.
#[derive(Debug, Clone)]
pub struct WeightedGraph {
    ids: Vec<String>,
    index: HashMap<String, usize>,
    mu: Vec<f64>,
    edges: Vec<Edge>,
    adjacency: Vec<Vec<(usize, f64)>>,
    connected: bool,
}

/// Incremental description of a graph; `build` validates and freezes it.
#[derive(Debug, Default, Clone)]
pub struct GraphBuilder {
    vertices: Vec<(String, f64)>,
    edges: Vec<(String, String, f64)>,
}

impl GraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(mut self, id: impl Into<String>, mu: f64) -> Self {
        self.vertices.push((id.into(), mu));
        self
    }

    pub fn edge(mut self, a: impl Into<String>, b: impl Into<String>, w: f64) -> Self {
        self.edges.push((a.into(), b.into(), w));
        self
    }

    pub fn build(self) -> Result<WeightedGraph> {
        WeightedGraph::from_parts(self.vertices, self.edges)
    }
}

impl WeightedGraph {
    pub fn builder() -> GraphBuilder {
        GraphBuilder::new()
    }

    /// Validates and constructs a graph from `(id, μ)` vertices and
    /// `(a, b, w)` edges. Each undirected edge is listed once; symmetry is
    /// implied and never stored twice.
    pub fn from_parts(
        vertices: impl IntoIterator<Item = (String, f64)>,
        edges: impl IntoIterator<Item = (String, String, f64)>,
    ) -> Result<Self> {
        let mut ids = Vec::new();
        let mut index = HashMap::new();
        let mut mu = Vec::new();
        for (id, m) in vertices {
            if index.contains_key(&id) {
                return Err(Error::DuplicateVertex { id });
            }
            if !(m > 0.0) || !m.is_finite() {
                return Err(Error::NonPositiveMeasure { id, value: m });
            }
            index.insert(id.clone(), ids.len());
            ids.push(id);
            mu.push(m);
        }
        if ids.is_empty() {
            return Err(Error::EmptyGraph);
        }

        let mut edge_list = Vec::new();
        let mut seen = HashMap::new();
        for (a, b, w) in edges {
            let ia = *index
                .get(&a)
                .ok_or_else(|| Error::UnknownEndpoint { id: a.clone() })?;
            let ib = *index
                .get(&b)
                .ok_or_else(|| Error::UnknownEndpoint { id: b.clone() })?;
            if ia == ib {
                return Err(Error::SelfLoop { id: a });
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(Error::NonPositiveWeight { a, b, value: w });
            }
            let key = (ia.min(ib), ia.max(ib));
            if seen.insert(key, ()).is_some() {
                return Err(Error::DuplicateEdge { a, b });
            }
            edge_list.push(Edge {
                a: key.0,
                b: key.1,
                w,
            });
        }

        let mut adjacency = vec![Vec::new(); ids.len()];
        for e in &edge_list {
            adjacency[e.a].push((e.b, e.w));
            adjacency[e.b].push((e.a, e.w));
        }

        let mut g = WeightedGraph {
            ids,
            index,
            mu,
            edges: edge_list,
            adjacency,
            connected: false,
        };
        g.connected = g.compute_connected();
        Ok(g)
    }

    fn compute_connected(&self) -> bool {
        self.distances_from(0)
            .iter()
            .all(|d| d.is_some())
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, i: usize) -> &str {
        &self.ids[i]
    }

    pub fn index_of(&self, id: &str) -> Option<usize> {
        self.index.get(id).copied()
    }

    /// Resolves a vertex id, failing with `UnknownVertex`.
    pub fn resolve(&self, id: &str) -> Result<usize> {
        self.index_of(id).ok_or_else(|| Error::UnknownVertex {
            id: id.to_string(),
        })
    }

    pub fn measure(&self, i: usize) -> f64 {
        self.mu[i]
    }

    pub fn measures(&self) -> &[f64] {
        &self.mu
    }

    pub fn min_measure(&self) -> f64 {
        self.mu.iter().copied().fold(f64::INFINITY, f64::min)
    }

    /// `|V| = ∫_V 1 dμ`, the μ-volume of the vertex set.
    pub fn volume(&self) -> f64 {
        self.mu.iter().sum()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn neighbors(&self, i: usize) -> &[(usize, f64)] {
        &self.adjacency[i]
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// `deg(x) = Σ_{xy∈E} w_xy`, the weighted degree.
    pub fn degree(&self, i: usize) -> f64 {
        self.adjacency[i].iter().map(|(_, w)| w).sum()
    }

    /// Weighted degree looked up by vertex id.
    pub fn degree_of(&self, id: &str) -> Result<f64> {
        Ok(self.degree(self.resolve(id)?))
    }

    fn check_domain(&self, f: &VertexFunction) -> Result<()> {
        if f.len() != self.len() {
            return Err(Error::DomainMismatch {
                expected: self.len(),
                got: f.len(),
            });
        }
        Ok(())
    }

    /// μ-Laplacian: `Δu(x) = (1/μ(x)) Σ_{y∼x} w_xy (u(y) − u(x))`.
    pub fn laplacian(&self, u: &VertexFunction) -> Result<VertexFunction> {
        self.check_domain(u)?;
        let mut out = vec![0.0; self.len()];
        for (x, acc) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for &(y, w) in &self.adjacency[x] {
                s += w * (u[y] - u[x]);
            }
            *acc = s / self.mu[x];
        }
        Ok(VertexFunction::new(out))
    }

    /// Gradient form `Γ(u,v)(x) = (1/2μ(x)) Σ_{y∼x} w_xy (u(y)−u(x))(v(y)−v(x))`.
    ///
    /// `gamma(u, u)` is the squared gradient length `|∇u|²`.
    pub fn gamma(&self, u: &VertexFunction, v: &VertexFunction) -> Result<VertexFunction> {
        self.check_domain(u)?;
        self.check_domain(v)?;
        let mut out = vec![0.0; self.len()];
        for (x, acc) in out.iter_mut().enumerate() {
            let mut s = 0.0;
            for &(y, w) in &self.adjacency[x] {
                s += w * (u[y] - u[x]) * (v[y] - v[x]);
            }
            *acc = s / (2.0 * self.mu[x]);
        }
        Ok(VertexFunction::new(out))
    }

    /// `∫_V f dμ = Σ_x μ(x) f(x)`.
    pub fn integrate(&self, f: &VertexFunction) -> Result<f64> {
        self.check_domain(f)?;
        Ok(self
            .mu
            .iter()
            .zip(f.values())
            .map(|(m, v)| m * v)
            .sum())
    }

    /// `∫_V |∇u|² dμ`, evaluated without materialising Γ.
    ///
    /// Equals the double-count form `½ Σ_x Σ_{y∼x} w_xy (u(y)−u(x))²`.
    pub fn dirichlet_energy(&self, u: &VertexFunction) -> Result<f64> {
        self.check_domain(u)?;
        let mut s = 0.0;
        for e in &self.edges {
            let d = u[e.b] - u[e.a];
            s += e.w * d * d;
        }
        Ok(s)
    }

    /// L^q(μ) norm for `q ≥ 1`, or the sup norm for `q = ∞`.
    pub fn lq_norm(&self, u: &VertexFunction, q: f64) -> Result<f64> {
        self.check_domain(u)?;
        if q == f64::INFINITY {
            return Ok(u.sup_norm());
        }
        if !(q >= 1.0) || !q.is_finite() {
            return Err(Error::InvalidExponent {
                value: q,
                requirement: "q >= 1 or q = infinity",
            });
        }
        let s: f64 = self
            .mu
            .iter()
            .zip(u.values())
            .map(|(m, v)| m * v.abs().powf(q))
            .sum();
        Ok(s.powf(1.0 / q))
    }

    /// Sobolev-type norm `(∫ (|∇u|² + u²) dμ)^{1/2}`.
    pub fn h_norm(&self, u: &VertexFunction) -> Result<f64> {
        let grad = self.dirichlet_energy(u)?;
        let l2: f64 = self
            .mu
            .iter()
            .zip(u.values())
            .map(|(m, v)| m * v * v)
            .sum();
        Ok((grad + l2).sqrt())
    }

    /// Hop-count distances from `origin` via breadth-first search.
    /// `None` marks vertices unreachable from the origin.
    pub fn distances_from(&self, origin: usize) -> Vec<Option<u32>> {
        let mut dist = vec![None; self.len()];
        if self.is_empty() {
            return dist;
        }
        dist[origin] = Some(0);
        let mut queue = std::collections::VecDeque::from([origin]);
        while let Some(x) = queue.pop_front() {
            let dx = dist[x].unwrap();
            for &(y, _) in &self.adjacency[x] {
                if dist[y].is_none() {
                    dist[y] = Some(dx + 1);
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Induced subgraph on the ball `B_r(O) = {x : ρ(x) ≤ r}` with inherited
    /// μ and w. Vertices keep the parent graph's relative order.
    pub fn ball(&self, origin: &str, r: u32) -> Result<InducedSubgraph> {
        let o = self.resolve(origin)?;
        let dist = self.distances_from(o);
        let parent: Vec<usize> = (0..self.len())
            .filter(|&i| matches!(dist[i], Some(d) if d <= r))
            .collect();
        let in_ball: HashMap<usize, ()> = parent.iter().map(|&i| (i, ())).collect();
        let vertices = parent
            .iter()
            .map(|&i| (self.ids[i].clone(), self.mu[i]));
        let edges = self
            .edges
            .iter()
            .filter(|e| in_ball.contains_key(&e.a) && in_ball.contains_key(&e.b))
            .map(|e| (self.ids[e.a].clone(), self.ids[e.b].clone(), e.w));
        let graph = WeightedGraph::from_parts(vertices.collect::<Vec<_>>(), edges)?;
        Ok(InducedSubgraph { graph, parent })
    }
}

/// A ball (or other induced) subgraph together with the parent indices of
/// its vertices, so functions can be restricted consistently.
#[derive(Debug, Clone)]
pub struct InducedSubgraph {
    pub graph: WeightedGraph,
    /// `parent[i]` is the index in the parent graph of subgraph vertex `i`.
    pub parent: Vec<usize>,
}

impl InducedSubgraph {
    /// Restricts a parent-graph function to the subgraph.
    pub fn restrict(&self, f: &VertexFunction) -> VertexFunction {
        VertexFunction::new(self.parent.iter().map(|&i| f[i]).collect())
    }
}

/// A real-valued function on the vertices of one specific graph, stored in
/// that graph's vertex order.
#[derive(Debug, Clone, PartialEq)]
pub struct VertexFunction {
    values: Vec<f64>,
}

impl VertexFunction {
    pub fn new(values: Vec<f64>) -> Self {
        Self { values }
    }

    pub fn constant(g: &WeightedGraph, c: f64) -> Self {
        Self {
            values: vec![c; g.len()],
        }
    }

    pub fn zeros(g: &WeightedGraph) -> Self {
        Self::constant(g, 0.0)
    }

    pub fn from_fn(g: &WeightedGraph, mut f: impl FnMut(usize) -> f64) -> Self {
        Self {
            values: (0..g.len()).map(&mut f).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [f64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |a, v| a.max(v.abs()))
    }

    /// Sup-norm distance to another function on the same graph.
    pub fn sup_distance(&self, other: &VertexFunction) -> f64 {
        debug_assert_eq!(self.len(), other.len());
        self.values
            .iter()
            .zip(&other.values)
            .fold(0.0, |a, (x, y)| a.max((x - y).abs()))
    }

    pub fn abs(&self) -> Self {
        Self {
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scaled(&self, s: f64) -> Self {
        Self {
            values: self.values.iter().map(|v| s * v).collect(),
        }
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Self {
        Self {
            values: self.values.iter().map(|&v| f(v)).collect(),
        }
    }
}

impl Index<usize> for VertexFunction {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.values[i]
    }
}

impl From<Vec<f64>> for VertexFunction {
    fn from(values: Vec<f64>) -> Self {
        Self::new(values)
    }
}
