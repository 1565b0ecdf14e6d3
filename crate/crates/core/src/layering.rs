//! Layered end-vertex sets grown from the short paths of a partition.
//!
//! `X_1` holds every vertex of a 1- or 2-path. `W_t` collects the new
//! neighbors of `X_t` lying off the neighbor's own path, and a path whose
//! interior meets `N_ext(X_t)` contributes both of its ends to `X_{t+1}`. The
//! construction stops at the first `s` with `X_s = X_{s+1}`.
//!
//! Each `w ∈ W_r` is certified by an α-sequence `x_1w_1, …, x_rw_r` of
//! cross-path edges, from which the rewired partitions `P1(w)` and `P2(w)`
//! are derived.

use std::collections::hash_map::DefaultHasher;
use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::partition::{norm, PartitionError, PathPartition};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum LayeringError {
    #[error("vertex {0} is not in W")]
    NotInW(Vertex),
    #[error("layering was built for a different partition")]
    Stale,
    #[error("α-sequence does not match the partition: {0}")]
    InconsistentSequence(String),
    #[error("rewired edge set is not a path partition: {0}")]
    Rewire(#[from] PartitionError),
}

pub(crate) fn fingerprint(p: &PathPartition) -> u64 {
    let mut h = DefaultHasher::new();
    p.paths().hash(&mut h);
    h.finish()
}

/// The `X_t` / `W_t` layers of a partition with α-sequence back-pointers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Layering {
    /// Cumulative layers `X_1 ⊂ X_2 ⊂ … ⊂ X_s`.
    pub x_layers: Vec<BTreeSet<Vertex>>,
    /// Disjoint layers `W_1, …, W_s`.
    pub w_layers: Vec<BTreeSet<Vertex>>,
    pub x_union: BTreeSet<Vertex>,
    pub w_union: BTreeSet<Vertex>,
    /// For `w ∈ W_t`, the smallest `x ∈ X_t \ X_{t−1}` adjacent to it.
    pub back_edge: BTreeMap<Vertex, Vertex>,
    /// 1-based layer index of every vertex of `X`.
    pub x_layer_of: BTreeMap<Vertex, usize>,
    /// 1-based layer index of every vertex of `W`.
    pub w_layer_of: BTreeMap<Vertex, usize>,
    /// `W_a`: vertices of good order.
    pub good_order: BTreeSet<Vertex>,
    /// `W_b = W \ W_a`.
    pub bad: BTreeSet<Vertex>,
    /// `P'`: indices of paths with both ends in `X`.
    pub prime_paths: BTreeSet<usize>,
    fingerprint: u64,
}

/// Neighbors of `x` that lie off `x`'s own path.
pub fn external_neighbors<'a>(
    g: &'a Graph,
    p: &'a PathPartition,
    x: Vertex,
) -> impl Iterator<Item = Vertex> + 'a {
    g.neighbors(x)
        .iter()
        .copied()
        .filter(move |&u| !p.same_path(u, x))
}

impl Layering {
    pub fn build(g: &Graph, p: &PathPartition) -> Layering {
        let mut l = Layering {
            x_layers: Vec::new(),
            w_layers: Vec::new(),
            x_union: BTreeSet::new(),
            w_union: BTreeSet::new(),
            back_edge: BTreeMap::new(),
            x_layer_of: BTreeMap::new(),
            w_layer_of: BTreeMap::new(),
            good_order: BTreeSet::new(),
            bad: BTreeSet::new(),
            prime_paths: BTreeSet::new(),
            fingerprint: fingerprint(p),
        };
        let mut fresh: BTreeSet<Vertex> = (0..p.len())
            .filter(|&i| p.order(i) <= 2)
            .flat_map(|i| p.path(i).iter().copied())
            .collect();
        let mut entered: BTreeSet<usize> = fresh.iter().map(|&v| p.path_of(v)).collect();
        let mut t = 0;
        while !fresh.is_empty() {
            t += 1;
            for &x in &fresh {
                l.x_layer_of.insert(x, t);
            }
            l.x_union.extend(fresh.iter().copied());
            l.x_layers.push(l.x_union.clone());

            // W_t: external neighbors of the new ends not already in N_ext(X_{t-1}).
            let mut layer = BTreeSet::new();
            for &x in &fresh {
                for w in external_neighbors(g, p, x) {
                    if !l.w_layer_of.contains_key(&w) {
                        layer.insert(w);
                    }
                }
            }
            for &w in &layer {
                l.w_layer_of.insert(w, t);
                let x = fresh
                    .iter()
                    .copied()
                    .find(|&x| g.has_edge(x, w) && !p.same_path(x, w))
                    .expect("W vertex has a witness in the newest X layer");
                l.back_edge.insert(w, x);
            }
            l.w_union.extend(layer.iter().copied());

            let mut next = BTreeSet::new();
            for &w in &layer {
                let pi = p.path_of(w);
                if p.is_end(w) || entered.contains(&pi) {
                    continue;
                }
                entered.insert(pi);
                next.extend(p.ends(pi));
            }
            l.w_layers.push(layer);
            fresh = next;
        }
        l.prime_paths = (0..p.len())
            .filter(|&i| p.ends(i).iter().all(|v| l.x_union.contains(v)))
            .collect();
        let (good, bad) = l.classify(p);
        l.good_order = good;
        l.bad = bad;
        l
    }

    /// Number of layers `s`.
    pub fn depth(&self) -> usize {
        self.x_layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x_layers.is_empty()
    }

    pub fn is_current(&self, p: &PathPartition) -> bool {
        self.fingerprint == fingerprint(p)
    }

    pub fn check_current(&self, p: &PathPartition) -> Result<(), LayeringError> {
        if self.is_current(p) {
            Ok(())
        } else {
            Err(LayeringError::Stale)
        }
    }

    /// Splits `W` into good-order vertices (interior of a path whose ends
    /// enter `X` exactly one layer after `w`) and the rest.
    fn classify(&self, p: &PathPartition) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
        let mut good = BTreeSet::new();
        let mut bad = BTreeSet::new();
        for (&w, &r) in &self.w_layer_of {
            let pi = p.path_of(w);
            let is_good = !p.is_end(w)
                && p.ends(pi)
                    .iter()
                    .all(|e| self.x_layer_of.get(e) == Some(&(r + 1)));
            if is_good {
                good.insert(w);
            } else {
                bad.insert(w);
            }
        }
        (good, bad)
    }

    /// Reconstructs `α(w)` by following back edges down to `W_1`. Each
    /// intermediate `w_{t−1}` is the smallest vertex of `W_{t−1}` inside the
    /// path of `x_t`.
    pub fn alpha_sequence(
        &self,
        p: &PathPartition,
        w: Vertex,
    ) -> Result<AlphaSequence, LayeringError> {
        self.check_current(p)?;
        let r = *self.w_layer_of.get(&w).ok_or(LayeringError::NotInW(w))?;
        let mut steps = Vec::with_capacity(r);
        let mut cur_w = w;
        for t in (1..=r).rev() {
            let x = self.back_edge[&cur_w];
            steps.push(AlphaStep { x, w: cur_w });
            if t > 1 {
                let host = p.path(p.path_of(x));
                cur_w = host[1..host.len() - 1]
                    .iter()
                    .copied()
                    .filter(|v| self.w_layer_of.get(v) == Some(&(t - 1)))
                    .min()
                    .ok_or_else(|| {
                        LayeringError::InconsistentSequence(format!(
                            "path of x_{t} = {x} has no interior vertex in W_{}",
                            t - 1
                        ))
                    })?;
            }
        }
        steps.reverse();
        let host = p.path_of(w);
        let terminal = *p.ends(host).iter().min().expect("paths are nonempty");
        Ok(AlphaSequence {
            steps,
            host_path: host,
            host_terminal: terminal,
        })
    }

    /// Good-order classification as a pair `(W_a, W_b)`.
    pub fn classify_good_order(&self) -> (BTreeSet<Vertex>, BTreeSet<Vertex>) {
        (self.good_order.clone(), self.bad.clone())
    }

    /// 4-paths of `P'` carrying exactly one and exactly two `W` vertices.
    pub fn four_path_w_counts(&self, p: &PathPartition) -> (usize, usize) {
        let mut one = 0;
        let mut two = 0;
        for &pi in &self.prime_paths {
            if p.order(pi) != 4 {
                continue;
            }
            match p
                .path(pi)
                .iter()
                .filter(|v| self.w_union.contains(v))
                .count()
            {
                1 => one += 1,
                2 => two += 1,
                _ => {}
            }
        }
        (one, two)
    }

    /// JSON-friendly dump of the layers, α-sequences and classification.
    pub fn trace(&self, p: &PathPartition) -> LayerTrace {
        let alpha = self
            .w_union
            .iter()
            .map(|&w| {
                let seq = self
                    .alpha_sequence(p, w)
                    .map(|a| a.steps.iter().map(|s| [s.x, s.w]).collect())
                    .unwrap_or_default();
                (w, seq)
            })
            .collect();
        LayerTrace {
            x_layers: self.x_layers.clone(),
            w_layers: self.w_layers.clone(),
            alpha,
            good_order: self.good_order.clone(),
            bad: self.bad.clone(),
            prime_paths: self.prime_paths.clone(),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LayerTrace {
    pub x_layers: Vec<BTreeSet<Vertex>>,
    pub w_layers: Vec<BTreeSet<Vertex>>,
    pub alpha: BTreeMap<Vertex, Vec<[Vertex; 2]>>,
    pub good_order: BTreeSet<Vertex>,
    pub bad: BTreeSet<Vertex>,
    pub prime_paths: BTreeSet<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct AlphaStep {
    pub x: Vertex,
    pub w: Vertex,
}

/// Chain of cross-path edges certifying `w_r ∈ W_r`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlphaSequence {
    pub steps: Vec<AlphaStep>,
    /// Path holding `w_r`.
    pub host_path: usize,
    /// End `x_{r+1}` of the host path that `w_r^+` points toward. Defaults
    /// to the smaller end.
    pub host_terminal: Vertex,
}

/// Edges as `(u, v)` pairs with `u < v`.
pub type EdgeList = Vec<(Vertex, Vertex)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum RewireVariant {
    P1,
    P2,
}

impl AlphaSequence {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last_w(&self) -> Vertex {
        self.steps.last().expect("α-sequences are nonempty").w
    }

    /// Same sequence with the host path oriented toward `terminal`.
    pub fn toward(mut self, terminal: Vertex) -> Self {
        self.host_terminal = terminal;
        self
    }

    /// Orders `(i_1, i_2)` of the host sub-paths `[w^+, x]` and `[x', w^-]`.
    pub fn split_orders(&self, p: &PathPartition) -> (usize, usize) {
        let w = self.last_w();
        let len = p.order(self.host_path);
        let i1 = p.position(w).abs_diff(p.position(self.host_terminal));
        (i1, len - 1 - i1)
    }

    /// Edges `(removed, added)` turning `p` into `P1(w)` or `P2(w)`.
    pub fn rewire_edges(
        &self,
        g: &Graph,
        p: &PathPartition,
        variant: RewireVariant,
    ) -> Result<(EdgeList, EdgeList), LayeringError> {
        let bad = |msg: String| LayeringError::InconsistentSequence(msg);
        if self.steps.is_empty() {
            return Err(bad("empty sequence".into()));
        }
        let r = self.steps.len();
        let mut removed = Vec::with_capacity(r);
        let mut added = Vec::with_capacity(r);
        for (t, step) in self.steps.iter().enumerate() {
            let AlphaStep { x, w } = *step;
            if x >= p.vertex_count() || w >= p.vertex_count() {
                return Err(bad(format!("vertex out of range in step {}", t + 1)));
            }
            if !g.has_edge(x, w) || p.same_path(x, w) {
                return Err(bad(format!("{x}-{w} is not a cross-path edge")));
            }
            if !p.is_end(x) {
                return Err(bad(format!("x_{} = {x} is not an end vertex", t + 1)));
            }
            let terminal = if t + 1 < r {
                self.steps[t + 1].x
            } else {
                self.host_terminal
            };
            if !p.same_path(w, terminal) || !p.is_end(terminal) {
                return Err(bad(format!(
                    "w_{} = {w} is not on a path ending at {terminal}",
                    t + 1
                )));
            }
            if p.is_end(w) {
                return Err(bad(format!("w_{} = {w} is an end vertex", t + 1)));
            }
            let path = p.path(p.path_of(w));
            let pos = p.position(w);
            let (toward, away) = if p.position(terminal) > pos {
                (path[pos + 1], path[pos - 1])
            } else {
                (path[pos - 1], path[pos + 1])
            };
            let cut = if t + 1 == r && variant == RewireVariant::P2 {
                away
            } else {
                toward
            };
            removed.push(norm(w, cut));
            added.push(norm(x, w));
        }
        Ok((removed, added))
    }

    /// `P1(w)` deletes `w_t w_t^+` for every step; `P2(w)` deletes
    /// `w_r w_r^-` in the last step instead. Both add every `x_t w_t`.
    pub fn derive_rewired(
        &self,
        g: &Graph,
        p: &PathPartition,
        variant: RewireVariant,
    ) -> Result<PathPartition, LayeringError> {
        let (removed, added) = self.rewire_edges(g, p, variant)?;
        let mut edges = p.edge_set();
        for e in &removed {
            edges.remove(e);
        }
        for e in added {
            if !edges.insert(e) {
                return Err(LayeringError::InconsistentSequence(format!(
                    "edge {}-{} is already on a path",
                    e.0, e.1
                )));
            }
        }
        let out = PathPartition::from_edge_set(g, &edges)?;
        debug_assert_eq!(out.len(), p.len());
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    // Labels of the two-chain example graph (16 vertices, μ = 4).
    const X1P: Vertex = 0;
    const X1: Vertex = 1;
    const W1M: Vertex = 2;
    const W1: Vertex = 3;
    const W1P: Vertex = 4;
    const X2: Vertex = 5;
    const X3: Vertex = 6;
    const W2P: Vertex = 7;
    const W2: Vertex = 8;
    const W2M: Vertex = 9;
    const X3P: Vertex = 10;
    const X4P: Vertex = 11;
    const W3M: Vertex = 12;
    const W3: Vertex = 13;
    const W3P: Vertex = 14;
    const X4: Vertex = 15;

    fn chain_example() -> (Graph, PathPartition) {
        let edges = [
            (X1P, X1),
            (X1, W1),
            (W1M, W1),
            (W1, W1P),
            (W1P, X2),
            (X2, W2),
            (X3, W2P),
            (W2P, W2),
            (W2, W2M),
            (W2M, X3P),
            (X3, W3),
            (X4P, W3M),
            (W3M, W3),
            (W3, W3P),
            (W3P, X4),
        ];
        let g = Graph::from_edges(16, edges).unwrap();
        let p = PathPartition::new(
            &g,
            vec![
                vec![X1P, X1],
                vec![W1M, W1, W1P, X2],
                vec![X3, W2P, W2, W2M, X3P],
                vec![X4P, W3M, W3, W3P, X4],
            ],
        )
        .unwrap();
        (g, p)
    }

    fn sorted(p: &PathPartition) -> Vec<Vec<Vertex>> {
        p.canonical().into_paths()
    }

    fn canon(paths: Vec<Vec<Vertex>>) -> Vec<Vec<Vertex>> {
        let mut out: Vec<Vec<Vertex>> = paths
            .into_iter()
            .map(|mut q| {
                if q.last() < q.first() {
                    q.reverse();
                }
                q
            })
            .collect();
        out.sort();
        out
    }

    #[test]
    fn chain_example_layers() {
        let (g, p) = chain_example();
        let l = Layering::build(&g, &p);
        assert_eq!(
            l.w_layers,
            vec![[W1].into(), [W2].into(), [W3].into(), BTreeSet::new()]
        );
        assert_eq!(l.x_layers[0], [X1P, X1].into());
        assert_eq!(l.x_layer_of[&X2], 2);
        assert_eq!(l.x_layer_of[&X3], 3);
        assert_eq!(l.x_layer_of[&X4], 4);
        assert_eq!(l.good_order, [W1, W2, W3].into());
        let a = l.alpha_sequence(&p, W2).unwrap();
        assert_eq!(
            a.steps,
            vec![AlphaStep { x: X1, w: W1 }, AlphaStep { x: X2, w: W2 }]
        );
        assert_eq!(a.host_terminal, X3);
    }

    #[test]
    fn chain_example_rewires() {
        let (g, p) = chain_example();
        let l = Layering::build(&g, &p);
        let a = l.alpha_sequence(&p, W2).unwrap();
        let p1 = a.derive_rewired(&g, &p, RewireVariant::P1).unwrap();
        assert_eq!(
            sorted(&p1),
            canon(vec![
                vec![X1P, X1, W1, W1M],
                vec![W1P, X2, W2, W2M, X3P],
                vec![X3, W2P],
                vec![X4P, W3M, W3, W3P, X4],
            ])
        );
        let p2 = a.derive_rewired(&g, &p, RewireVariant::P2).unwrap();
        assert_eq!(
            sorted(&p2),
            canon(vec![
                vec![X1P, X1, W1, W1M],
                vec![W1P, X2, W2, W2P, X3],
                vec![W2M, X3P],
                vec![X4P, W3M, W3, W3P, X4],
            ])
        );
        // E(P2) = (E(P1) − w_r w_r^-) ∪ w_r w_r^+
        let mut e1 = p1.edge_set();
        e1.remove(&norm(W2, W2M));
        e1.insert(norm(W2, W2P));
        assert_eq!(e1, p2.edge_set());
        assert_eq!(a.split_orders(&p), (2, 2));
    }

    #[test]
    fn single_step_rewire_keeps_count() {
        let (g, p) = chain_example();
        let l = Layering::build(&g, &p);
        let a = l.alpha_sequence(&p, W1).unwrap().toward(X2);
        assert_eq!(a.len(), 1);
        assert_eq!(a.steps[0], AlphaStep { x: X1, w: W1 });
        for v in [RewireVariant::P1, RewireVariant::P2] {
            let q = a.derive_rewired(&g, &p, v).unwrap();
            assert_eq!(q.len(), p.len());
            assert!(q.validate(&g).is_ok());
        }
        // w_1 sits next to w_1^- = an end, so P2 leaves w_1^- as a singleton.
        let p2 = a.derive_rewired(&g, &p, RewireVariant::P2).unwrap();
        assert!(p2.paths().iter().any(|q| q == &vec![W1M]));
    }

    #[test]
    fn split_orders_on_short_paths() {
        // Built directly: a 3-path, a 4-path and a 5-path.
        let g = Graph::from_edges(
            15,
            [
                (0, 1),
                (1, 2),
                (3, 4),
                (4, 5),
                (5, 6),
                (7, 8),
                (8, 9),
                (9, 10),
                (10, 11),
                (12, 13),
                (12, 1),
                (13, 4),
                (14, 9),
                (14, 12),
            ],
        )
        .unwrap();
        let p = PathPartition::new(
            &g,
            vec![
                vec![0, 1, 2],
                vec![3, 4, 5, 6],
                vec![7, 8, 9, 10, 11],
                vec![12, 13],
                vec![14],
            ],
        )
        .unwrap();
        let l = Layering::build(&g, &p);
        assert_eq!(l.alpha_sequence(&p, 1).unwrap().split_orders(&p), (1, 1));
        let (i1, i2) = l.alpha_sequence(&p, 4).unwrap().split_orders(&p);
        assert_eq!((i1.min(i2), i1.max(i2)), (1, 2));
        assert_eq!(l.alpha_sequence(&p, 9).unwrap().split_orders(&p), (2, 2));
    }

    #[test]
    fn empty_and_trivial_layerings() {
        let g = Graph::from_edges(3, [(0, 1), (1, 2)]).unwrap();
        let p = PathPartition::new(&g, vec![vec![0, 1, 2]]).unwrap();
        let l = Layering::build(&g, &p);
        assert!(l.is_empty() && l.prime_paths.is_empty() && l.w_union.is_empty());
        assert_eq!(l.classify_good_order(), (BTreeSet::new(), BTreeSet::new()));

        let g = Graph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
        let p = PathPartition::new(&g, vec![vec![0, 1], vec![2, 3]]).unwrap();
        let l = Layering::build(&g, &p);
        assert_eq!(l.x_union, (0..4).collect());
        assert!(l.w_union.is_empty());
        assert_eq!(l.alpha_sequence(&p, 0), Err(LayeringError::NotInW(0)));
    }

    #[test]
    fn stale_layering_is_rejected() {
        let (g, p) = chain_example();
        let l = Layering::build(&g, &p);
        let q = l
            .alpha_sequence(&p, W1)
            .unwrap()
            .derive_rewired(&g, &p, RewireVariant::P1)
            .unwrap();
        assert_eq!(l.alpha_sequence(&q, W1), Err(LayeringError::Stale));
    }
}
