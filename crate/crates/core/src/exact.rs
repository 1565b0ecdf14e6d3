//! Exact path partition number by dynamic programming over vertex subsets.
//!
//! State `(S, v)`: the vertices of `S` are covered by paths and the path under
//! construction ends at `v ∈ S`. A state either extends its current path to an
//! uncovered neighbor of `v` (same count) or opens a new path at any uncovered
//! vertex (count + 1). `μ(G) = min_v dp[V][v]`.

use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::partition::PathPartition;

pub const DEFAULT_EXACT_LIMIT: usize = 20;

/// Hard ceiling on the subset table regardless of the requested limit.
const MAX_SUPPORTED: usize = 24;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ExactError {
    #[error("graph has {n} vertices, above the exact-solver limit of {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("graph has no vertices")]
    Empty,
}

#[derive(Debug, Clone)]
pub struct ExactResult {
    pub mu: usize,
    pub witness: PathPartition,
    /// Number of reachable `(S, v)` states.
    pub explored_states: u64,
}

const UNSET: u8 = u8::MAX;
/// Parent marker: the path ending here was opened at this vertex.
const OPENED: u8 = u8::MAX;

pub fn exact_mu(g: &Graph, limit: usize) -> Result<ExactResult, ExactError> {
    let n = g.vertex_count();
    if n == 0 {
        return Err(ExactError::Empty);
    }
    if n > limit || n > MAX_SUPPORTED {
        return Err(ExactError::TooLarge {
            n,
            limit: limit.min(MAX_SUPPORTED),
        });
    }
    let nbr_mask: Vec<u32> = g
        .vertices()
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &u| m | 1 << u))
        .collect();
    let full: usize = (1usize << n) - 1;
    let states = (full + 1) * n;
    let mut dp = vec![UNSET; states];
    let mut parent = vec![UNSET; states];
    // Best count over end vertices for each S, and the end achieving it.
    let mut best = vec![UNSET; full + 1];
    let mut best_end = vec![0u8; full + 1];
    best[0] = 0;
    let mut explored = 0u64;

    for s in 0..=full {
        // Finalize best[s] (s > 0) from its states.
        if s != 0 {
            let mut rest = s;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                let c = dp[s * n + v];
                if c != UNSET {
                    explored += 1;
                    if c < best[s] {
                        best[s] = c;
                        best_end[s] = v as u8;
                    }
                }
            }
        }
        if best[s] == UNSET || s == full {
            continue;
        }
        let free = full & !s;
        // Open a new path at any uncovered vertex.
        let open_cost = best[s] + 1;
        let mut rest = free;
        while rest != 0 {
            let u = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let idx = (s | 1 << u) * n + u;
            if open_cost < dp[idx] {
                dp[idx] = open_cost;
                parent[idx] = OPENED;
            }
        }
        // Extend a current path.
        let mut ends = s;
        while ends != 0 {
            let v = ends.trailing_zeros() as usize;
            ends &= ends - 1;
            let c = dp[s * n + v];
            if c == UNSET {
                continue;
            }
            let mut ext = nbr_mask[v] as usize & free;
            while ext != 0 {
                let u = ext.trailing_zeros() as usize;
                ext &= ext - 1;
                let idx = (s | 1 << u) * n + u;
                if c < dp[idx] {
                    dp[idx] = c;
                    parent[idx] = v as u8;
                }
            }
        }
    }

    let mu = best[full] as usize;
    // Walk parents back from the best end of the full set.
    let mut paths: Vec<Vec<Vertex>> = Vec::with_capacity(mu);
    let mut current: Vec<Vertex> = Vec::new();
    let mut s = full;
    let mut v = best_end[full] as usize;
    loop {
        current.push(v);
        let par = parent[s * n + v];
        s &= !(1 << v);
        if par == OPENED {
            current.reverse();
            paths.push(std::mem::take(&mut current));
            if s == 0 {
                break;
            }
            v = best_end[s] as usize;
        } else {
            v = par as usize;
        }
    }
    paths.reverse();
    let witness = PathPartition::new(g, paths).expect("DP witness is a path partition");
    debug_assert_eq!(witness.len(), mu);
    Ok(ExactResult {
        mu,
        witness,
        explored_states: explored,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn path_graph(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn k(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)))).unwrap()
    }

    fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::from_edges(10, outer.chain(spokes).chain(inner)).unwrap()
    }

    #[test]
    fn small_examples() {
        for n in 1..=12 {
            let r = exact_mu(&path_graph(n), DEFAULT_EXACT_LIMIT).unwrap();
            assert_eq!(r.mu, 1, "P_{n}");
        }
        assert_eq!(exact_mu(&Graph::empty(5), 20).unwrap().mu, 5);
        // K_{2,4}: a path alternates sides, so it covers at most 5 of 6 vertices.
        assert_eq!(exact_mu(&k(2, 4), 20).unwrap().mu, 2);
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let mut g = tri.clone();
        for m in 1..=5 {
            assert_eq!(exact_mu(&g, 20).unwrap().mu, m);
            g = g.disjoint_union(&tri);
        }
        assert_eq!(exact_mu(&petersen(), 20).unwrap().mu, 1);
    }

    #[test]
    fn refuses_oversize_and_empty() {
        assert_eq!(
            exact_mu(&Graph::empty(21), 20).unwrap_err(),
            ExactError::TooLarge { n: 21, limit: 20 }
        );
        assert_eq!(
            exact_mu(&Graph::empty(0), 20).unwrap_err(),
            ExactError::Empty
        );
    }

    #[test]
    fn witness_is_valid() {
        let r = exact_mu(&petersen().disjoint_union(&k(2, 5)), 20).unwrap();
        assert_eq!(r.mu, 4);
        assert!(r.explored_states > 0);
    }

    fn arb_graph(max_n: usize) -> impl Strategy<Value = Graph> {
        (1usize..=max_n).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(2 * n)).prop_map(move |es| {
                Graph::from_edges(n, es.into_iter().filter(|(u, v)| u != v)).unwrap()
            })
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn additive_over_components(a in arb_graph(6), b in arb_graph(6)) {
            let ma = exact_mu(&a, 20).unwrap().mu;
            let mb = exact_mu(&b, 20).unwrap().mu;
            prop_assert_eq!(exact_mu(&a.disjoint_union(&b), 20).unwrap().mu, ma + mb);
        }

        #[test]
        fn adding_edges_never_increases(g in arb_graph(10), extra in proptest::collection::vec((0usize..10, 0usize..10), 1..6)) {
            let n = g.vertex_count();
            let more = g.edges().chain(extra.into_iter().filter(|&(u, v)| u < n && v < n && u != v));
            let h = Graph::from_edges(n, more).unwrap();
            prop_assert!(exact_mu(&h, 20).unwrap().mu <= exact_mu(&g, 20).unwrap().mu);
        }
    }
}
