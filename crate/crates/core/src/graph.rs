//! Simple undirected graphs on dense vertex IDs `0..n`.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Vertex = usize;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("edge {0}-{1} has an endpoint outside 0..{2}")]
    VertexOutOfRange(Vertex, Vertex, usize),
    #[error("vertex {0} is out of range for a graph on {1} vertices")]
    UnknownVertex(Vertex, usize),
    #[error("graph has no vertices")]
    Empty,
}

/// Immutable simple graph with sorted adjacency lists.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    adj: Vec<Vec<Vertex>>,
    edge_count: usize,
}

/// Minimum and maximum degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeProfile {
    pub min_degree: usize,
    pub max_degree: usize,
}

impl Graph {
    /// Builds a graph on `n` vertices. Duplicate edges (in either direction)
    /// collapse to one; self-loops and out-of-range endpoints are rejected.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self, GraphError>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        let mut sets = vec![BTreeSet::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(GraphError::VertexOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            sets[u].insert(v);
            sets[v].insert(u);
        }
        let adj: Vec<Vec<Vertex>> = sets.into_iter().map(|s| s.into_iter().collect()).collect();
        let edge_count = adj.iter().map(Vec::len).sum::<usize>() / 2;
        Ok(Graph { adj, edge_count })
    }

    pub fn empty(n: usize) -> Self {
        Graph {
            adj: vec![Vec::new(); n],
            edge_count: 0,
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edge_count
    }

    pub fn vertices(&self) -> std::ops::Range<Vertex> {
        0..self.adj.len()
    }

    pub fn neighbors(&self, v: Vertex) -> &[Vertex] {
        &self.adj[v]
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.adj[v].len()
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&v).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, ns)| ns.iter().filter(move |&&v| u < v).map(move |&v| (u, v)))
    }

    pub fn degree_profile(&self) -> Result<DegreeProfile, GraphError> {
        let min_degree = self
            .adj
            .iter()
            .map(Vec::len)
            .min()
            .ok_or(GraphError::Empty)?;
        let max_degree = self
            .adj
            .iter()
            .map(Vec::len)
            .max()
            .ok_or(GraphError::Empty)?;
        Ok(DegreeProfile {
            min_degree,
            max_degree,
        })
    }

    /// ε(a, b): number of edges with one end in `a` and the other in `b`.
    /// An edge with both ends in `a ∩ b` is counted once.
    pub fn external_edge_count(
        &self,
        a: &BTreeSet<Vertex>,
        b: &BTreeSet<Vertex>,
    ) -> Result<usize, GraphError> {
        let n = self.vertex_count();
        if let Some(&v) = a.iter().chain(b.iter()).find(|&&v| v >= n) {
            return Err(GraphError::UnknownVertex(v, n));
        }
        Ok(self
            .edges()
            .filter(|&(u, v)| {
                (a.contains(&u) && b.contains(&v)) || (a.contains(&v) && b.contains(&u))
            })
            .count())
    }

    /// Disjoint union; vertices of `other` are shifted by `self.vertex_count()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let off = self.vertex_count();
        let mut adj = self.adj.clone();
        adj.extend(
            other
                .adj
                .iter()
                .map(|ns| ns.iter().map(|&v| v + off).collect::<Vec<_>>()),
        );
        Graph {
            adj,
            edge_count: self.edge_count + other.edge_count,
        }
    }

    /// Subgraph induced by `keep`, with vertices renumbered in ascending order.
    pub fn induced(&self, keep: &BTreeSet<Vertex>) -> Graph {
        let index: Vec<Option<usize>> = {
            let mut idx = vec![None; self.vertex_count()];
            for (i, &v) in keep.iter().enumerate() {
                idx[v] = Some(i);
            }
            idx
        };
        let edges = self
            .edges()
            .filter_map(|(u, v)| Some((index[u]?, index[v]?)))
            .collect::<Vec<_>>();
        Graph::from_edges(keep.len(), edges).expect("induced subgraph of a valid graph")
    }

    pub fn is_connected(&self) -> bool {
        self.is_connected_without(None)
    }

    /// True when the graph is connected and stays connected after deleting
    /// any single vertex (n ≥ 3).
    pub fn is_biconnected(&self) -> bool {
        self.vertex_count() >= 3
            && self.is_connected()
            && self.vertices().all(|v| self.is_connected_without(Some(v)))
    }

    fn is_connected_without(&self, removed: Option<Vertex>) -> bool {
        let n = self.vertex_count();
        let Some(start) = self.vertices().find(|&v| Some(v) != removed) else {
            return true;
        };
        let mut seen = vec![false; n];
        if let Some(r) = removed {
            seen[r] = true;
        }
        seen[start] = true;
        let mut stack = vec![start];
        let mut reached = 1 + usize::from(removed.is_some());
        while let Some(u) = stack.pop() {
            for &v in &self.adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        reached == n
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edges().collect::<Vec<_>>())
            .finish()
    }
}
