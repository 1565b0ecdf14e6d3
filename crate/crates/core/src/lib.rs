//! Path partitions of finite simple graphs.
//!
//! The crate bundles an exact minimum path-partition oracle ([`exact`]), a
//! local-search engine whose rewrite moves shrink the lexicographic potential
//! `(|P|, p_1, p_2)` ([`moves`]), the layered end-vertex construction the moves
//! and checks are phrased in ([`layering`]), and exact-rational verification of
//! the degree bound `μ(G) ≤ (Δ−δ)n/(Δ+δ)` together with its supporting
//! inequalities ([`bounds`]).

pub mod bounds;
pub mod exact;
pub mod generators;
pub mod graph;
pub mod io;
pub mod layering;
pub mod moves;
pub mod partition;
pub mod sweep;

pub use bounds::{BoundReport, CountingReport, Rational};
pub use exact::{exact_mu, ExactError, ExactResult, DEFAULT_EXACT_LIMIT};
pub use graph::{DegreeProfile, Graph, GraphError, Vertex};
pub use layering::{AlphaSequence, Layering, RewireVariant};
pub use moves::{local_search, MoveKind, Rewrite, SearchTrace};
pub use partition::{PartitionStats, PathPartition, Potential};
