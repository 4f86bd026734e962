//! Simple undirected graphs and the invariants that parameterize the
//! constructions and theorem checks.

mod decomposition;
pub mod embed;
mod graph6;
mod invariants;
mod partite;

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::bits::{self, VSet, MAX_VERTICES};

pub use decomposition::{decomposition_family, DecompositionFamily};
pub use embed::{find_subgraph, is_subgraph, PatternPlan};
pub use graph6::{parse_graph6, to_graph6, Graph6Error};
pub use invariants::{
    chromatic_number, class_size_profiles, clique_number, coloring_with_class_sizes, invariants,
    is_color_critical, is_homological, ColorCritical, GraphInvariants, EXACT_ORDER_LIMIT,
    HOMOLOGICAL_ORDER_LIMIT,
};
pub use partite::{partite_profile, PartiteProfile};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph order {order} exceeds the exact-computation limit of {limit}")]
    TooLarge { order: usize, limit: usize },
    #[error("graph is not bipartite")]
    NotBipartite,
    #[error("chromatic number {chi} is below the required minimum {min}")]
    ChromaticTooSmall { chi: usize, min: usize },
    #[error("index {index} out of range {lo}..={hi}")]
    IndexOutOfRange { index: usize, lo: usize, hi: usize },
    #[error("graphs must share one order (found {0:?})")]
    OrderMismatch(Vec<usize>),
    #[error("graph has no edges")]
    Empty,
    #[error("edge ({0}, {1}) is invalid")]
    InvalidEdge(usize, usize),
    #[error(transparent)]
    Graph6(#[from] Graph6Error),
}

/// A simple undirected graph on vertices `0..order`.
#[derive(Clone)]
pub struct SimpleGraph {
    order: usize,
    adj: Vec<VSet>,
    label: Option<String>,
}

impl SimpleGraph {
    pub fn empty(order: usize) -> Self {
        assert!(order <= MAX_VERTICES, "order {order} exceeds {MAX_VERTICES}");
        SimpleGraph { order, adj: vec![0; order], label: None }
    }

    pub fn from_edges(order: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        if order > MAX_VERTICES {
            return Err(GraphError::TooLarge { order, limit: MAX_VERTICES });
        }
        let mut g = SimpleGraph::empty(order);
        for &(u, v) in edges {
            if u == v || u >= order || v >= order {
                return Err(GraphError::InvalidEdge(u, v));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    pub fn from_adjacency(adj: Vec<VSet>) -> Self {
        let order = adj.len();
        let mut g = SimpleGraph::empty(order);
        for u in 0..order {
            for v in bits::members(adj[u] & bits::full(order)) {
                if u != v {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn adjacency(&self) -> &[VSet] {
        &self.adj
    }

    pub fn neighbors(&self, v: usize) -> VSet {
        self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        bits::count(self.adj[v])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.order && bits::contains(self.adj[u], v)
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.order && v < self.order);
        self.adj[u] |= bits::bit(v);
        self.adj[v] |= bits::bit(u);
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.adj[u] &= !bits::bit(v);
        self.adj[v] &= !bits::bit(u);
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|a| bits::count(*a)).sum::<usize>() / 2
    }

    /// Edges `(u, v)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for u in 0..self.order {
            for v in bits::members(self.adj[u] & !bits::full(u + 1)) {
                out.push((u, v));
            }
        }
        out
    }

    pub fn is_nonempty(&self) -> bool {
        self.adj.iter().any(|a| *a != 0)
    }

    pub fn isolated_vertices(&self) -> Vec<usize> {
        (0..self.order).filter(|&v| self.adj[v] == 0).collect()
    }

    /// Vertex sets of the connected components, ordered by smallest vertex.
    pub fn components(&self) -> Vec<VSet> {
        bits::components_within(&self.adj, bits::full(self.order))
            .into_iter()
            .map(|(c, _)| c)
            .collect()
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() == 1
    }

    pub fn is_bipartite(&self) -> bool {
        bits::components_within(&self.adj, bits::full(self.order))
            .iter()
            .all(|(_, b)| *b)
    }

    /// The subgraph induced by `set`, relabelled to `0..|set|` in increasing order.
    pub fn induced(&self, set: VSet) -> SimpleGraph {
        let verts: Vec<usize> = bits::members(set).collect();
        let mut g = SimpleGraph::empty(verts.len());
        for (i, &u) in verts.iter().enumerate() {
            for (j, &v) in verts.iter().enumerate().skip(i + 1) {
                if self.has_edge(u, v) {
                    g.add_edge(i, j);
                }
            }
        }
        g
    }

    /// Components as standalone graphs (isolated vertices included as `K_1`).
    pub fn component_graphs(&self) -> Vec<SimpleGraph> {
        self.components().into_iter().map(|c| self.induced(c)).collect()
    }

    /// Removes isolated vertices; returns the reduced graph and how many went.
    pub fn strip_isolated(&self) -> (SimpleGraph, usize) {
        let keep = (0..self.order)
            .filter(|&v| self.adj[v] != 0)
            .fold(0u128, |s, v| s | bits::bit(v));
        let removed = self.order - bits::count(keep);
        let mut g = self.induced(keep);
        g.label = self.label.clone();
        (g, removed)
    }

    /// Disjoint union, `self` first.
    pub fn disjoint_union(&self, other: &SimpleGraph) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.order + other.order);
        for (u, v) in self.edges() {
            g.add_edge(u, v);
        }
        for (u, v) in other.edges() {
            g.add_edge(u + self.order, v + self.order);
        }
        g
    }

    pub fn union_all(parts: &[SimpleGraph]) -> SimpleGraph {
        parts
            .iter()
            .fold(SimpleGraph::empty(0), |acc, g| acc.disjoint_union(g))
    }

    pub fn complement(&self) -> SimpleGraph {
        let mut g = SimpleGraph::empty(self.order);
        for u in 0..self.order {
            for v in u + 1..self.order {
                if !self.has_edge(u, v) {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }

    pub fn to_graph6(&self) -> String {
        to_graph6(self)
    }

    // A few named families used throughout the tests and the CLI.

    pub fn complete(n: usize) -> Self {
        let mut g = SimpleGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn path(n: usize) -> Self {
        let mut g = SimpleGraph::empty(n);
        for v in 1..n {
            g.add_edge(v - 1, v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = SimpleGraph::path(n);
        if n >= 3 {
            g.add_edge(n - 1, 0);
        }
        g
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Self {
        let mut g = SimpleGraph::empty(a + b);
        for u in 0..a {
            for v in a..a + b {
                g.add_edge(u, v);
            }
        }
        g
    }

    pub fn star(leaves: usize) -> Self {
        SimpleGraph::complete_bipartite(1, leaves)
    }

    /// `t` disjoint copies of `g`.
    pub fn copies(&self, t: usize) -> Self {
        SimpleGraph::union_all(&vec![self.clone(); t])
    }

    /// Complete multipartite graph with the given part sizes.
    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let n: usize = parts.iter().sum();
        let mut owner = Vec::with_capacity(n);
        for (i, &p) in parts.iter().enumerate() {
            owner.extend(std::iter::repeat_n(i, p));
        }
        let mut g = SimpleGraph::empty(n);
        for u in 0..n {
            for v in u + 1..n {
                if owner[u] != owner[v] {
                    g.add_edge(u, v);
                }
            }
        }
        g
    }
}

// Labels are display-only and do not take part in equality.
impl PartialEq for SimpleGraph {
    fn eq(&self, other: &Self) -> bool {
        self.order == other.order && self.adj == other.adj
    }
}

impl Eq for SimpleGraph {}

impl std::hash::Hash for SimpleGraph {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.order.hash(state);
        self.adj.hash(state);
    }
}

impl fmt::Debug for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SimpleGraph({}", self.to_graph6())?;
        if let Some(l) = &self.label {
            write!(f, " \"{l}\"")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for SimpleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.label {
            Some(l) => write!(f, "{l}"),
            None => write!(f, "{}", self.to_graph6()),
        }
    }
}

#[derive(Serialize, Deserialize)]
struct GraphRepr {
    order: usize,
    adjacency: Vec<[usize; 2]>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    label: Option<String>,
}

impl Serialize for SimpleGraph {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        GraphRepr {
            order: self.order,
            adjacency: self.edges().into_iter().map(|(u, v)| [u, v]).collect(),
            label: self.label.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimpleGraph {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = GraphRepr::deserialize(d)?;
        let edges: Vec<(usize, usize)> = repr.adjacency.iter().map(|e| (e[0], e[1])).collect();
        let g = SimpleGraph::from_edges(repr.order, &edges).map_err(serde::de::Error::custom)?;
        Ok(match repr.label {
            Some(l) => g.with_label(l),
            None => g,
        })
    }
}
