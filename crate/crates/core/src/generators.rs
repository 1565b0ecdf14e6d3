//! Deterministic graph families.
//!
//! Randomness comes from SplitMix64 seeded with the 64-bit seed as its
//! initial state; bounded draws use rejection sampling on the raw 64-bit
//! output, so a seed produces the same graph on every platform.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::io::{parse_edge_list, parse_paths};
use crate::partition::{norm, PathPartition};

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("delta = {delta} exceeds Delta = {max_delta}")]
    DeltaAboveMax { delta: usize, max_delta: usize },
    #[error("Delta = {max_delta} is not below n = {n}")]
    MaxDegreeTooLarge { max_delta: usize, n: usize },
    #[error("no graph found within {attempts} attempts")]
    Infeasible { attempts: usize },
    #[error("cubic graphs need an even vertex count of at least 4, got {0}")]
    BadCubicOrder(usize),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
}

/// Seeded source of bounded integers.
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in `0..n`, `n > 0`.
    pub fn below(&mut self, n: usize) -> usize {
        let n = n as u64;
        let zone = u64::MAX - u64::MAX % n;
        loop {
            let x = self.next_u64();
            if x < zone {
                return (x % n) as usize;
            }
        }
    }

    pub fn shuffle<T>(&mut self, items: &mut [T]) {
        for i in (1..items.len()).rev() {
            items.swap(i, self.below(i + 1));
        }
    }
}

fn complete_bipartite(a: usize, b: usize) -> Graph {
    Graph::from_edges(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)))).expect("valid")
}

fn complete(n: usize) -> Graph {
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).expect("valid")
}

fn copies(g: &Graph, m: usize) -> Graph {
    (1..m).fold(g.clone(), |acc, _| acc.disjoint_union(g))
}

/// `m` disjoint copies of `K_{δ,Δ}`; in each copy the `δ` side comes first.
pub fn bipartite_copies(delta: usize, max_delta: usize, m: usize) -> Result<Graph, GeneratorError> {
    if delta == 0 || m == 0 {
        return Err(GeneratorError::BadParameter(
            "delta and m must be positive".into(),
        ));
    }
    if delta > max_delta {
        return Err(GeneratorError::DeltaAboveMax { delta, max_delta });
    }
    Ok(copies(&complete_bipartite(delta, max_delta), m))
}

/// `m` disjoint copies of `K_{δ+1}`.
pub fn clique_copies(delta: usize, m: usize) -> Result<Graph, GeneratorError> {
    if delta == 0 || m == 0 {
        return Err(GeneratorError::BadParameter(
            "delta and m must be positive".into(),
        ));
    }
    Ok(copies(&complete(delta + 1), m))
}

const BOUNDED_ATTEMPTS: usize = 64;

/// A graph with minimum degree ≥ `delta` and maximum degree exactly
/// `max_delta`, not necessarily connected.
///
/// Each attempt joins a random hub to `max_delta` random vertices, inserts
/// random edges between vertices below `max_delta` (each of `n` random pairs
/// kept with probability 1/2), then repairs every vertex below `delta` by
/// joining it to random non-neighbors below `max_delta`. A stuck repair
/// starts the next attempt from the current generator state.
pub fn random_bounded(
    n: usize,
    delta: usize,
    max_delta: usize,
    seed: u64,
) -> Result<Graph, GeneratorError> {
    if delta > max_delta {
        return Err(GeneratorError::DeltaAboveMax { delta, max_delta });
    }
    if n == 0 || max_delta >= n {
        return Err(GeneratorError::MaxDegreeTooLarge { max_delta, n });
    }
    let mut rng = Rng::new(seed);
    'attempt: for _ in 0..BOUNDED_ATTEMPTS {
        let mut adj: Vec<BTreeSet<Vertex>> = vec![BTreeSet::new(); n];
        let add = |adj: &mut Vec<BTreeSet<Vertex>>, u: Vertex, v: Vertex| {
            adj[u].insert(v);
            adj[v].insert(u);
        };
        let hub = rng.below(n);
        let mut others: Vec<Vertex> = (0..n).filter(|&v| v != hub).collect();
        rng.shuffle(&mut others);
        for &v in &others[..max_delta] {
            add(&mut adj, hub, v);
        }
        for _ in 0..n {
            let (u, v) = (rng.below(n), rng.below(n));
            let keep = rng.below(2) == 0;
            if u != v
                && keep
                && !adj[u].contains(&v)
                && adj[u].len() < max_delta
                && adj[v].len() < max_delta
            {
                add(&mut adj, u, v);
            }
        }
        let mut order: Vec<Vertex> = (0..n).collect();
        rng.shuffle(&mut order);
        for &v in &order {
            while adj[v].len() < delta {
                let cands: Vec<Vertex> = (0..n)
                    .filter(|&u| u != v && !adj[v].contains(&u) && adj[u].len() < max_delta)
                    .collect();
                if cands.is_empty() {
                    continue 'attempt;
                }
                let u = cands[rng.below(cands.len())];
                add(&mut adj, u, v);
            }
        }
        let edges =
            (0..n).flat_map(|u| adj[u].iter().filter(move |&&v| u < v).map(move |&v| (u, v)));
        return Ok(Graph::from_edges(n, edges).expect("valid"));
    }
    Err(GeneratorError::Infeasible {
        attempts: BOUNDED_ATTEMPTS,
    })
}

const CUBIC_ATTEMPTS: usize = 100_000;

/// Connected 3-regular graph from the pairing model: shuffle `3n` points,
/// pair them consecutively, reject loops, multi-edges and disconnected
/// results, and retry.
pub fn random_cubic(n: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if n < 4 || n % 2 == 1 {
        return Err(GeneratorError::BadCubicOrder(n));
    }
    let mut rng = Rng::new(seed);
    let mut points: Vec<usize> = (0..3 * n).collect();
    'attempt: for _ in 0..CUBIC_ATTEMPTS {
        rng.shuffle(&mut points);
        let mut edges = BTreeSet::new();
        for pair in points.chunks(2) {
            let (u, v) = (pair[0] / 3, pair[1] / 3);
            if u == v || !edges.insert(norm(u, v)) {
                continue 'attempt;
            }
        }
        let g = Graph::from_edges(n, edges).expect("valid");
        if g.is_connected() {
            return Ok(g);
        }
    }
    Err(GeneratorError::Infeasible {
        attempts: CUBIC_ATTEMPTS,
    })
}

pub const ILLUSTRATION_GRAPH: &str = include_str!("../data/illustration.graph");
pub const ILLUSTRATION_PATHS: &str = include_str!("../data/illustration.paths");

/// Labeled vertices of the illustration fixture and their IDs. The
/// remaining IDs 12, 19, 21, 24, 26, 29, 31, 34, 36 are unlabeled path
/// vertices.
pub const ILLUSTRATION_LABELS: [(&str, Vertex); 29] = [
    ("x1", 0),
    ("x2", 1),
    ("x3", 2),
    ("x4", 3),
    ("x5", 4),
    ("x6", 5),
    ("x7", 6),
    ("x8", 7),
    ("w1", 8),
    ("x9", 9),
    ("x10", 10),
    ("w2", 11),
    ("x11", 13),
    ("x12", 14),
    ("w3", 15),
    ("w4", 16),
    ("x13", 17),
    ("x14", 18),
    ("w5", 20),
    ("x15", 22),
    ("x16", 23),
    ("w6", 25),
    ("x17", 27),
    ("x18", 28),
    ("w7", 30),
    ("x19", 32),
    ("x20", 33),
    ("w8", 35),
    ("x21", 37),
];

pub fn illustration_label(name: &str) -> Option<Vertex> {
    ILLUSTRATION_LABELS
        .iter()
        .find(|(l, _)| *l == name)
        .map(|&(_, v)| v)
}

/// The 38-vertex illustration graph and its 11-path partition.
pub fn illustration_fixture() -> (Graph, PathPartition) {
    let g = parse_edge_list(ILLUSTRATION_GRAPH).expect("fixture graph parses");
    let paths = parse_paths(ILLUSTRATION_PATHS).expect("fixture paths parse");
    let p = PathPartition::new(&g, paths).expect("fixture partition is valid");
    (g, p)
}

/// One generator invocation. Text form: the family name followed by
/// `key=value` tokens, e.g. `random_bounded n=10 delta=2 Delta=5 seed=1`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CorpusSpec {
    BipartiteCopies {
        delta: usize,
        max_delta: usize,
        m: usize,
    },
    CliqueCopies {
        delta: usize,
        m: usize,
    },
    RandomBounded {
        n: usize,
        delta: usize,
        max_delta: usize,
        seed: u64,
    },
    RandomCubic {
        n: usize,
        seed: u64,
    },
    Fixture,
}

impl CorpusSpec {
    pub fn build(&self) -> Result<Graph, GeneratorError> {
        match *self {
            CorpusSpec::BipartiteCopies {
                delta,
                max_delta,
                m,
            } => bipartite_copies(delta, max_delta, m),
            CorpusSpec::CliqueCopies { delta, m } => clique_copies(delta, m),
            CorpusSpec::RandomBounded {
                n,
                delta,
                max_delta,
                seed,
            } => random_bounded(n, delta, max_delta, seed),
            CorpusSpec::RandomCubic { n, seed } => random_cubic(n, seed),
            CorpusSpec::Fixture => Ok(illustration_fixture().0),
        }
    }

    pub fn family(&self) -> &'static str {
        match self {
            CorpusSpec::BipartiteCopies { .. } => "bipartite_copies",
            CorpusSpec::CliqueCopies { .. } => "clique_copies",
            CorpusSpec::RandomBounded { .. } => "random_bounded",
            CorpusSpec::RandomCubic { .. } => "random_cubic",
            CorpusSpec::Fixture => "fixture",
        }
    }

    /// Builds a spec from a family name and integer parameters.
    pub fn from_params(
        family: &str,
        get: impl Fn(&str) -> Option<u64>,
    ) -> Result<Self, GeneratorError> {
        let need = |k: &str| {
            get(k).ok_or_else(|| GeneratorError::BadParameter(format!("{family} needs {k}=")))
        };
        let size = |k: &str| need(k).map(|v| v as usize);
        Ok(match family {
            "bipartite_copies" => CorpusSpec::BipartiteCopies {
                delta: size("delta")?,
                max_delta: size("Delta")?,
                m: size("m")?,
            },
            "clique_copies" => CorpusSpec::CliqueCopies {
                delta: size("delta")?,
                m: size("m")?,
            },
            "random_bounded" => CorpusSpec::RandomBounded {
                n: size("n")?,
                delta: size("delta")?,
                max_delta: size("Delta")?,
                seed: get("seed").unwrap_or(0),
            },
            "random_cubic" => CorpusSpec::RandomCubic {
                n: size("n")?,
                seed: get("seed").unwrap_or(0),
            },
            "fixture" | "illustration" => CorpusSpec::Fixture,
            other => {
                return Err(GeneratorError::BadParameter(format!(
                    "unknown family {other:?}"
                )))
            }
        })
    }
}

/// Splits `key=value` tokens.
pub(crate) fn key_values(tokens: &[&str]) -> Result<Vec<(String, String)>, GeneratorError> {
    tokens
        .iter()
        .map(|t| {
            t.split_once('=')
                .map(|(k, v)| (k.to_string(), v.to_string()))
                .ok_or_else(|| {
                    GeneratorError::BadParameter(format!("expected key=value, got {t:?}"))
                })
        })
        .collect()
}

impl FromStr for CorpusSpec {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens: Vec<&str> = s.split_whitespace().collect();
        let Some((family, rest)) = tokens.split_first() else {
            return Err(GeneratorError::BadParameter("empty generator spec".into()));
        };
        let mut values = Vec::new();
        for (k, v) in key_values(rest)? {
            let parsed: u64 = v
                .parse()
                .map_err(|_| GeneratorError::BadParameter(format!("{k}={v} is not an integer")))?;
            values.push((k, parsed));
        }
        let spec = CorpusSpec::from_params(family, |k| {
            values.iter().find(|(kk, _)| kk == k).map(|&(_, v)| v)
        })?;
        if let Some((k, _)) = values
            .iter()
            .find(|(k, _)| !spec.keys().contains(&k.as_str()))
        {
            return Err(GeneratorError::BadParameter(format!(
                "{family} takes no {k}="
            )));
        }
        Ok(spec)
    }
}

impl CorpusSpec {
    fn keys(&self) -> &'static [&'static str] {
        match self {
            CorpusSpec::BipartiteCopies { .. } => &["delta", "Delta", "m"],
            CorpusSpec::CliqueCopies { .. } => &["delta", "m"],
            CorpusSpec::RandomBounded { .. } => &["n", "delta", "Delta", "seed"],
            CorpusSpec::RandomCubic { .. } => &["n", "seed"],
            CorpusSpec::Fixture => &[],
        }
    }
}

impl fmt::Display for CorpusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.family())?;
        match self {
            CorpusSpec::BipartiteCopies {
                delta,
                max_delta,
                m,
            } => write!(f, " delta={delta} Delta={max_delta} m={m}"),
            CorpusSpec::CliqueCopies { delta, m } => write!(f, " delta={delta} m={m}"),
            CorpusSpec::RandomBounded {
                n,
                delta,
                max_delta,
                seed,
            } => write!(f, " n={n} delta={delta} Delta={max_delta} seed={seed}"),
            CorpusSpec::RandomCubic { n, seed } => write!(f, " n={n} seed={seed}"),
            CorpusSpec::Fixture => Ok(()),
        }
    }
}

impl Serialize for CorpusSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::write_edge_list;
    use proptest::prelude::*;

    #[test]
    fn bipartite_examples() {
        let g = bipartite_copies(2, 4, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 8));
        let g = bipartite_copies(2, 4, 3).unwrap();
        assert_eq!(g.vertex_count(), 18);
        assert!(!g.is_connected());
        let d = g.degree_profile().unwrap();
        assert_eq!((d.min_degree, d.max_degree), (2, 4));
        let g = bipartite_copies(3, 3, 1).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (6, 9));
        assert!(bipartite_copies(3, 2, 1).is_err());
    }

    #[test]
    fn clique_examples() {
        let g = clique_copies(2, 3).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (9, 9));
        assert_eq!(clique_copies(3, 1).unwrap(), complete(4));
        let g = clique_copies(1, 2).unwrap();
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 2));
    }

    #[test]
    fn random_bounded_window_and_determinism() {
        let g = random_bounded(10, 2, 5, 1).unwrap();
        let d = g.degree_profile().unwrap();
        assert!(d.min_degree >= 2 && d.max_degree == 5);
        assert_eq!(g, random_bounded(10, 2, 5, 1).unwrap());
        for seed in 0..20 {
            assert_eq!(random_bounded(5, 4, 4, seed).unwrap(), complete(5));
        }
        assert_eq!(
            random_bounded(4, 3, 2, 0),
            Err(GeneratorError::DeltaAboveMax {
                delta: 3,
                max_delta: 2
            })
        );
        assert!(matches!(
            random_bounded(4, 2, 4, 0),
            Err(GeneratorError::MaxDegreeTooLarge { .. })
        ));
    }

    #[test]
    fn random_cubic_examples() {
        for seed in 0..5 {
            assert_eq!(random_cubic(4, seed).unwrap(), complete(4));
        }
        let g = random_cubic(10, 7).unwrap();
        assert!(g.is_connected());
        assert!(g.vertices().all(|v| g.degree(v) == 3));
        assert_eq!(g, random_cubic(10, 7).unwrap());
        assert_eq!(random_cubic(5, 0), Err(GeneratorError::BadCubicOrder(5)));
    }

    #[test]
    fn splitmix_stream_is_pinned() {
        // Reference SplitMix64 outputs for seed 0.
        let mut r = super::Rng::new(0);
        assert_eq!(r.next_u64(), 0xe220_a839_7b1d_cdaf);
        assert_eq!(r.next_u64(), 0x6e78_9e6a_a1b9_65f4);
    }

    #[test]
    fn fixture_shape() {
        let (g, p) = illustration_fixture();
        assert_eq!(g.vertex_count(), 38);
        assert_eq!(p.len(), 11);
        let mut ids: Vec<Vertex> = ILLUSTRATION_LABELS.iter().map(|&(_, v)| v).collect();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 29);
        assert_eq!(illustration_label("w8"), Some(35));
        assert_eq!(illustration_label("m"), None);
    }

    #[test]
    fn spec_text_round_trip() {
        for text in [
            "bipartite_copies delta=2 Delta=4 m=3",
            "clique_copies delta=3 m=1",
            "random_bounded n=10 delta=2 Delta=5 seed=1",
            "random_cubic n=10 seed=7",
            "fixture",
        ] {
            let spec: CorpusSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert!("random_cubic n=10 delta=3".parse::<CorpusSpec>().is_err());
        assert!("bipartite_copies delta=2".parse::<CorpusSpec>().is_err());
        assert!("tree n=4".parse::<CorpusSpec>().is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn bounded_outputs_respect_window(n in 6usize..20, delta in 2usize..4, extra in 0usize..4, seed: u64) {
            let max_delta = (2 * delta + extra).min(n - 1);
            prop_assume!(delta <= max_delta);
            let g = random_bounded(n, delta, max_delta, seed).unwrap();
            let d = g.degree_profile().unwrap();
            prop_assert!(d.min_degree >= delta);
            prop_assert_eq!(d.max_degree, max_delta);
            prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        }

        #[test]
        fn cubic_outputs_are_cubic(half in 2usize..10, seed: u64) {
            let g = random_cubic(2 * half, seed).unwrap();
            prop_assert!(g.is_connected());
            prop_assert!(g.vertices().all(|v| g.degree(v) == 3));
            prop_assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
        }
    }
}
