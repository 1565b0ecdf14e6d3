//! Path partitions: representation, validation, order statistics and the
//! greedy starting partition.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Vertex};

/// First violated invariant of a candidate path list.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    EmptyPath { path: usize },
    UnknownVertex { vertex: Vertex },
    NotAnEdge { path: usize, u: Vertex, v: Vertex },
    Duplicated { vertex: Vertex },
    Missing { vertex: Vertex },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptyPath { path } => write!(f, "path {path} is empty"),
            Violation::UnknownVertex { vertex } => write!(f, "vertex {vertex} is not in the graph"),
            Violation::NotAnEdge { path, u, v } => {
                write!(f, "path {path}: {u}-{v} is not an edge")
            }
            Violation::Duplicated { vertex } => write!(f, "vertex {vertex} is duplicated"),
            Violation::Missing { vertex } => write!(f, "vertex {vertex} is not covered"),
        }
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum PartitionError {
    #[error("invalid partition: {0}")]
    Invalid(Violation),
    #[error("edge set has a vertex of degree > 2 at {0}")]
    Branching(Vertex),
    #[error("edge set contains a cycle through {0}")]
    Cycle(Vertex),
}

/// Checks that `paths` is a path partition of `g`, reporting the first
/// violated invariant in scan order (paths in order, vertices in order).
pub fn validate_paths(g: &Graph, paths: &[Vec<Vertex>]) -> Result<(), Violation> {
    let n = g.vertex_count();
    let mut seen = vec![false; n];
    for (pi, path) in paths.iter().enumerate() {
        if path.is_empty() {
            return Err(Violation::EmptyPath { path: pi });
        }
        for (i, &v) in path.iter().enumerate() {
            if v >= n {
                return Err(Violation::UnknownVertex { vertex: v });
            }
            if i > 0 && !g.has_edge(path[i - 1], v) {
                return Err(Violation::NotAnEdge {
                    path: pi,
                    u: path[i - 1],
                    v,
                });
            }
        }
    }
    for path in paths {
        for &v in path {
            if std::mem::replace(&mut seen[v], true) {
                return Err(Violation::Duplicated { vertex: v });
            }
        }
    }
    match seen.iter().position(|&s| !s) {
        Some(v) => Err(Violation::Missing { vertex: v }),
        None => Ok(()),
    }
}

/// Lexicographic potential `(|P|, p_1, p_2)`; smaller is better.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Potential {
    pub path_count: usize,
    pub p1: usize,
    pub p2: usize,
}

impl fmt::Display for Potential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.path_count, self.p1, self.p2)
    }
}

impl Potential {
    pub fn of_orders(orders: impl IntoIterator<Item = usize>) -> Self {
        let mut pot = Potential {
            path_count: 0,
            p1: 0,
            p2: 0,
        };
        for o in orders {
            pot.path_count += 1;
            match o {
                1 => pot.p1 += 1,
                2 => pot.p2 += 1,
                _ => {}
            }
        }
        pot
    }
}

/// A validated path partition with a vertex → (path, position) index.
#[derive(Clone, PartialEq, Eq)]
pub struct PathPartition {
    paths: Vec<Vec<Vertex>>,
    locator: Vec<(usize, usize)>,
}

impl fmt::Debug for PathPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.paths).finish()
    }
}

impl PathPartition {
    pub fn new(g: &Graph, paths: Vec<Vec<Vertex>>) -> Result<Self, PartitionError> {
        validate_paths(g, &paths).map_err(PartitionError::Invalid)?;
        Ok(Self::index(g.vertex_count(), paths))
    }

    fn index(n: usize, paths: Vec<Vec<Vertex>>) -> Self {
        let mut locator = vec![(usize::MAX, usize::MAX); n];
        for (pi, path) in paths.iter().enumerate() {
            for (pos, &v) in path.iter().enumerate() {
                locator[v] = (pi, pos);
            }
        }
        PathPartition { paths, locator }
    }

    /// Every vertex as its own path.
    pub fn singletons(g: &Graph) -> Self {
        Self::index(g.vertex_count(), g.vertices().map(|v| vec![v]).collect())
    }

    /// Rebuilds a partition from the edge set it uses. The result is in
    /// canonical form (see [`PathPartition::canonical`]).
    pub fn from_edge_set(
        g: &Graph,
        edges: &BTreeSet<(Vertex, Vertex)>,
    ) -> Result<Self, PartitionError> {
        for &(u, v) in edges {
            if !g.has_edge(u, v) {
                return Err(PartitionError::Invalid(Violation::NotAnEdge {
                    path: usize::MAX,
                    u,
                    v,
                }));
            }
        }
        let paths = paths_from_edges(g.vertices(), edges.iter().copied())?;
        Ok(Self::index(g.vertex_count(), paths))
    }

    pub fn validate(&self, g: &Graph) -> Result<(), Violation> {
        validate_paths(g, &self.paths)
    }

    pub fn paths(&self) -> &[Vec<Vertex>] {
        &self.paths
    }

    pub fn into_paths(self) -> Vec<Vec<Vertex>> {
        self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.locator.len()
    }

    pub fn path(&self, idx: usize) -> &[Vertex] {
        &self.paths[idx]
    }

    pub fn path_of(&self, v: Vertex) -> usize {
        self.locator[v].0
    }

    pub fn position(&self, v: Vertex) -> usize {
        self.locator[v].1
    }

    pub fn order(&self, idx: usize) -> usize {
        self.paths[idx].len()
    }

    /// End vertices of a path; a singleton has one end.
    pub fn ends(&self, idx: usize) -> Vec<Vertex> {
        let p = &self.paths[idx];
        if p.len() == 1 {
            vec![p[0]]
        } else {
            vec![p[0], p[p.len() - 1]]
        }
    }

    pub fn is_end(&self, v: Vertex) -> bool {
        let (pi, pos) = self.locator[v];
        pos == 0 || pos + 1 == self.paths[pi].len()
    }

    pub fn same_path(&self, u: Vertex, v: Vertex) -> bool {
        self.locator[u].0 == self.locator[v].0
    }

    /// Neighbors of `v` along its own path.
    pub fn path_neighbors(&self, v: Vertex) -> Vec<Vertex> {
        let (pi, pos) = self.locator[v];
        let p = &self.paths[pi];
        let mut out = Vec::with_capacity(2);
        if pos > 0 {
            out.push(p[pos - 1]);
        }
        if pos + 1 < p.len() {
            out.push(p[pos + 1]);
        }
        out
    }

    /// Central vertex of an odd-order path.
    pub fn center(&self, idx: usize) -> Option<Vertex> {
        let p = &self.paths[idx];
        (p.len() % 2 == 1).then(|| p[p.len() / 2])
    }

    /// Edges used by the paths, normalized `(min, max)`.
    pub fn edge_set(&self) -> BTreeSet<(Vertex, Vertex)> {
        self.paths
            .iter()
            .flat_map(|p| p.windows(2).map(|w| norm(w[0], w[1])))
            .collect()
    }

    pub fn potential(&self) -> Potential {
        Potential::of_orders(self.paths.iter().map(Vec::len))
    }

    /// Canonical form: each path starts at its smaller end, paths sorted by
    /// first vertex. Two partitions with the same edge set are equal after
    /// canonicalization.
    pub fn canonical(&self) -> PathPartition {
        let mut paths: Vec<Vec<Vertex>> = self
            .paths
            .iter()
            .map(|p| {
                let mut p = p.clone();
                if p.last() < p.first() {
                    p.reverse();
                }
                p
            })
            .collect();
        paths.sort();
        Self::index(self.vertex_count(), paths)
    }

    /// Replaces the paths with indices `touched` by `replacement`, returning
    /// the result in canonical form.
    pub(crate) fn replace_paths(
        &self,
        touched: &[usize],
        replacement: Vec<Vec<Vertex>>,
    ) -> PathPartition {
        let drop: BTreeSet<usize> = touched.iter().copied().collect();
        let mut paths: Vec<Vec<Vertex>> = self
            .paths
            .iter()
            .enumerate()
            .filter(|(i, _)| !drop.contains(i))
            .map(|(_, p)| p.clone())
            .collect();
        paths.extend(replacement);
        Self::index(self.vertex_count(), paths).canonical()
    }

    /// Order statistics over the whole partition, or over the listed paths
    /// when `scope` is given.
    pub fn stats(&self, scope: Option<&BTreeSet<usize>>) -> PartitionStats {
        let mut st = PartitionStats {
            scope: match scope {
                None => StatsScope::Whole,
                Some(s) => StatsScope::Paths(s.iter().copied().collect()),
            },
            ..PartitionStats::default()
        };
        for (pi, p) in self.paths.iter().enumerate() {
            if scope.is_some_and(|s| !s.contains(&pi)) {
                continue;
            }
            *st.order_counts.entry(p.len()).or_insert(0) += 1;
            st.end_vertices.extend(self.ends(pi));
            match p.len() {
                1 => {
                    st.singletons.insert(p[0]);
                }
                2 => {
                    st.pair_ends.extend(p.iter().copied());
                }
                3 => {
                    st.centers3.insert(p[1]);
                }
                4 => {
                    st.interior4.extend([p[1], p[2]]);
                }
                5 => {
                    st.centers5.insert(p[2]);
                }
                _ => {}
            }
        }
        st
    }

    /// Greedy path stripping: start at the lowest uncovered vertex, extend
    /// the tail to the lowest uncovered neighbor until stuck, then the head.
    pub fn greedy_initial(g: &Graph) -> PathPartition {
        let n = g.vertex_count();
        let mut covered = vec![false; n];
        let mut paths = Vec::new();
        for start in 0..n {
            if covered[start] {
                continue;
            }
            covered[start] = true;
            let mut tail = vec![start];
            let mut head = Vec::new();
            let mut cur = start;
            while let Some(&next) = g.neighbors(cur).iter().find(|&&u| !covered[u]) {
                covered[next] = true;
                tail.push(next);
                cur = next;
            }
            cur = start;
            while let Some(&next) = g.neighbors(cur).iter().find(|&&u| !covered[u]) {
                covered[next] = true;
                head.push(next);
                cur = next;
            }
            head.reverse();
            head.extend(tail);
            paths.push(head);
        }
        Self::index(n, paths)
    }
}

pub(crate) fn norm(u: Vertex, v: Vertex) -> (Vertex, Vertex) {
    if u < v {
        (u, v)
    } else {
        (v, u)
    }
}

/// Splits a vertex set with a set of edges among them into paths, in
/// canonical form. Fails on a vertex of degree > 2 or on a cycle.
pub(crate) fn paths_from_edges(
    vertices: impl IntoIterator<Item = Vertex>,
    edges: impl IntoIterator<Item = (Vertex, Vertex)>,
) -> Result<Vec<Vec<Vertex>>, PartitionError> {
    let verts: BTreeSet<Vertex> = vertices.into_iter().collect();
    let mut nbrs: HashMap<Vertex, Vec<Vertex>> = verts.iter().map(|&v| (v, Vec::new())).collect();
    for (u, v) in edges {
        for (a, b) in [(u, v), (v, u)] {
            let list = nbrs.get_mut(&a).expect("edge endpoint outside vertex set");
            list.push(b);
            if list.len() > 2 {
                return Err(PartitionError::Branching(a));
            }
        }
    }
    let mut visited: BTreeSet<Vertex> = BTreeSet::new();
    let mut paths = Vec::new();
    for &v in &verts {
        if visited.contains(&v) || nbrs[&v].len() == 2 {
            continue;
        }
        let mut path = vec![v];
        visited.insert(v);
        let mut prev = usize::MAX;
        let mut cur = v;
        while let Some(&next) = nbrs[&cur].iter().find(|&&u| u != prev) {
            path.push(next);
            visited.insert(next);
            prev = cur;
            cur = next;
        }
        paths.push(path);
    }
    if let Some(&v) = verts.iter().find(|v| !visited.contains(v)) {
        return Err(PartitionError::Cycle(v));
    }
    paths.sort();
    Ok(paths)
}

/// Which paths a [`PartitionStats`] was computed over.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StatsScope {
    #[default]
    Whole,
    Paths(Vec<usize>),
}

/// Order counts `p_i` and the vertex classes V1, V2, C3, C5, Int(R4).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct PartitionStats {
    pub scope: StatsScope,
    pub order_counts: BTreeMap<usize, usize>,
    pub singletons: BTreeSet<Vertex>,
    pub pair_ends: BTreeSet<Vertex>,
    pub centers3: BTreeSet<Vertex>,
    pub centers5: BTreeSet<Vertex>,
    pub interior4: BTreeSet<Vertex>,
    pub end_vertices: BTreeSet<Vertex>,
    /// `p'_4`: 4-paths carrying exactly one W vertex (set by the layering).
    pub p4_one_w: Option<usize>,
    /// `p''_4`: 4-paths carrying exactly two W vertices.
    pub p4_two_w: Option<usize>,
}

impl PartitionStats {
    pub fn p(&self, order: usize) -> usize {
        self.order_counts.get(&order).copied().unwrap_or(0)
    }

    pub fn path_count(&self) -> usize {
        self.order_counts.values().sum()
    }

    pub fn vertex_count(&self) -> usize {
        self.order_counts.iter().map(|(i, c)| i * c).sum()
    }
}
