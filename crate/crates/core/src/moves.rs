//! Rewrite moves on path partitions and the first-improvement local search.
//!
//! Every move exchanges a handful of path edges and is accepted only when it
//! strictly lowers the potential `(|P|, p_1, p_2)`. The catalog is exactly
//! what is needed for the structural claims checked by
//! [`assert_fixpoint_claims`] to hold at every fixpoint: whenever one of them
//! fails, one of the moves below applies.
//!
//! | kind              | exchange                                                          |
//! |-------------------|-------------------------------------------------------------------|
//! | `MergeEnds`       | join two path ends, possibly after rotating one path to expose a new end |
//! | `AbsorbSingleton` | hang a singleton onto an interior vertex, splitting its path      |
//! | `AbsorbPairEnd`   | same for an end of a 2-path                                       |
//! | `ChainRewire`     | the P1 / P2 rewirings along an α-sequence                        |
//! | `TripleMerge`     | two ends hit consecutive vertices of a third path                 |
//! | `QuadDetach`      | the interior edge of a 4-path is traded for two end attachments   |

use std::collections::BTreeSet;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::graph::{Graph, Vertex};
use crate::layering::{external_neighbors, Layering, LayeringError, RewireVariant};
use crate::partition::{norm, paths_from_edges, PathPartition, Potential};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MoveKind {
    MergeEnds,
    AbsorbSingleton,
    AbsorbPairEnd,
    ChainRewire,
    TripleMerge,
    QuadDetach,
}

impl MoveKind {
    pub const ALL: [MoveKind; 6] = [
        MoveKind::MergeEnds,
        MoveKind::AbsorbSingleton,
        MoveKind::AbsorbPairEnd,
        MoveKind::ChainRewire,
        MoveKind::TripleMerge,
        MoveKind::QuadDetach,
    ];
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum MoveError {
    #[error(transparent)]
    Layering(#[from] LayeringError),
    #[error("move is not applicable to this partition: {0}")]
    NotApplicable(String),
}

/// One improving edge exchange.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Rewrite {
    pub kind: MoveKind,
    pub edges_removed: Vec<(Vertex, Vertex)>,
    pub edges_added: Vec<(Vertex, Vertex)>,
    /// Indices (in the partition the move was enumerated on) of the paths
    /// the exchange touches.
    pub paths_touched: Vec<usize>,
    pub potential_before: Potential,
    pub potential_after: Potential,
    #[serde(skip)]
    key: Vec<Vertex>,
}

/// Applies an edge exchange to the touched paths only. Returns the touched
/// path indices and their replacement, or `None` when the result is not a
/// set of paths.
fn exchange(
    g: &Graph,
    p: &PathPartition,
    removed: &[(Vertex, Vertex)],
    added: &[(Vertex, Vertex)],
) -> Option<(Vec<usize>, Vec<Vec<Vertex>>)> {
    let touched: BTreeSet<usize> = removed
        .iter()
        .chain(added)
        .flat_map(|&(u, v)| [p.path_of(u), p.path_of(v)])
        .collect();
    let mut edges: BTreeSet<(Vertex, Vertex)> = touched
        .iter()
        .flat_map(|&i| p.path(i).windows(2).map(|w| norm(w[0], w[1])))
        .collect();
    for &(u, v) in removed {
        if !edges.remove(&norm(u, v)) {
            return None;
        }
    }
    for &(u, v) in added {
        if !g.has_edge(u, v) || !edges.insert(norm(u, v)) {
            return None;
        }
    }
    let verts = touched.iter().flat_map(|&i| p.path(i).iter().copied());
    let paths = paths_from_edges(verts, edges).ok()?;
    Some((touched.into_iter().collect(), paths))
}

struct Collector<'a> {
    g: &'a Graph,
    p: &'a PathPartition,
    before: Potential,
    kind: MoveKind,
    out: Vec<Rewrite>,
}

impl Collector<'_> {
    fn offer(
        &mut self,
        removed: Vec<(Vertex, Vertex)>,
        added: Vec<(Vertex, Vertex)>,
        key: Vec<Vertex>,
    ) {
        let Some((touched, new_paths)) = exchange(self.g, self.p, &removed, &added) else {
            return;
        };
        let old = touched.iter().map(|&i| self.p.order(i));
        let new = new_paths.iter().map(Vec::len);
        let gone = Potential::of_orders(old);
        let came = Potential::of_orders(new);
        let after = Potential {
            path_count: self.before.path_count - gone.path_count + came.path_count,
            p1: self.before.p1 - gone.p1 + came.p1,
            p2: self.before.p2 - gone.p2 + came.p2,
        };
        if after < self.before {
            self.out.push(Rewrite {
                kind: self.kind,
                edges_removed: removed.into_iter().map(|(u, v)| norm(u, v)).collect(),
                edges_added: added.into_iter().map(|(u, v)| norm(u, v)).collect(),
                paths_touched: touched,
                potential_before: self.before,
                potential_after: after,
                key,
            });
        }
    }

    fn finish(mut self) -> Vec<Rewrite> {
        self.out.sort_by(|a, b| a.key.cmp(&b.key));
        let mut seen = BTreeSet::new();
        self.out
            .retain(|m| seen.insert((m.edges_removed.clone(), m.edges_added.clone())));
        self.out
    }
}

/// End vertices of paths other than `own`'s path adjacent to `v`.
fn foreign_ends<'a>(
    g: &'a Graph,
    p: &'a PathPartition,
    v: Vertex,
    own: usize,
) -> impl Iterator<Item = Vertex> + 'a {
    g.neighbors(v)
        .iter()
        .copied()
        .filter(move |&b| p.path_of(b) != own && p.is_end(b))
}

fn merge_ends(c: &mut Collector) {
    let (g, p) = (c.g, c.p);
    for a in g.vertices().filter(|&a| p.is_end(a)) {
        for b in foreign_ends(g, p, a, p.path_of(a))
            .filter(|&b| b > a)
            .collect::<Vec<_>>()
        {
            c.offer(vec![], vec![(a, b)], vec![a, b]);
        }
    }
    // Rotations: an end adjacent to an earlier vertex of its own path exposes
    // that vertex's successor as a new end.
    for pi in 0..p.len() {
        let k = p.order(pi);
        if k < 3 {
            continue;
        }
        let fwd = p.path(pi).to_vec();
        let mut rev = fwd.clone();
        rev.reverse();
        for q in [&fwd, &rev] {
            let e = q[k - 1];
            for i in 0..=k - 3 {
                if !g.has_edge(e, q[i]) {
                    continue;
                }
                let u = q[i + 1];
                for b in foreign_ends(g, p, u, pi).collect::<Vec<_>>() {
                    c.offer(
                        vec![(q[i], u)],
                        vec![(q[i], e), (u, b)],
                        vec![u, b, e, q[i]],
                    );
                }
            }
        }
        // A closed path can be reopened at any of its edges.
        if g.has_edge(fwd[0], fwd[k - 1]) {
            for j in 0..k - 1 {
                for u in [fwd[j], fwd[j + 1]] {
                    for b in foreign_ends(g, p, u, pi).collect::<Vec<_>>() {
                        c.offer(
                            vec![(fwd[j], fwd[j + 1])],
                            vec![(fwd[0], fwd[k - 1]), (u, b)],
                            vec![u, b, fwd[0], fwd[k - 1]],
                        );
                    }
                }
            }
        }
    }
}

/// Attach `v` (a singleton or an end of a 2-path) to interior vertex `w`,
/// cutting `w` loose from one of its path neighbors.
fn absorb(c: &mut Collector, sources: impl Iterator<Item = Vertex>) {
    let (g, p) = (c.g, c.p);
    for v in sources {
        for &w in g.neighbors(v) {
            if p.same_path(v, w) || p.is_end(w) {
                continue;
            }
            for cut in p.path_neighbors(w) {
                c.offer(vec![(w, cut)], vec![(v, w)], vec![v, w, cut]);
            }
        }
    }
}

fn chain_rewire(c: &mut Collector, l: &Layering) {
    let (g, p) = (c.g, c.p);
    for &w in &l.w_union {
        if p.is_end(w) {
            continue;
        }
        let Ok(alpha) = l.alpha_sequence(p, w) else {
            continue;
        };
        for (tag, variant) in [(0, RewireVariant::P1), (1, RewireVariant::P2)] {
            if let Ok((removed, added)) = alpha.rewire_edges(g, p, variant) {
                c.offer(removed, added, vec![w, tag]);
            }
        }
    }
}

/// Consecutive `u, v` on a path, `u` adjacent to end `a`, `v` adjacent to
/// end `b` of other paths: drop `uv`, add `au` and `bv`.
fn split_attach(c: &mut Collector, pi: usize, u: Vertex, v: Vertex) {
    let (g, p) = (c.g, c.p);
    let left: Vec<Vertex> = foreign_ends(g, p, u, pi).collect();
    let right: Vec<Vertex> = foreign_ends(g, p, v, pi).collect();
    for &a in &left {
        for &b in &right {
            if a != b {
                c.offer(
                    vec![(u, v)],
                    vec![(a, u), (b, v)],
                    vec![u.min(v), u.max(v), a, b],
                );
            }
        }
    }
}

fn triple_merge(c: &mut Collector) {
    let p = c.p;
    for pi in 0..p.len() {
        let path = p.path(pi).to_vec();
        for j in 0..path.len().saturating_sub(1) {
            if path.len() == 4 && j == 1 {
                continue;
            }
            split_attach(c, pi, path[j], path[j + 1]);
        }
    }
}

fn quad_detach(c: &mut Collector) {
    let (g, p) = (c.g, c.p);
    for pi in 0..p.len() {
        if p.order(pi) != 4 {
            continue;
        }
        let [x0p, w1, w2, x0] = <[Vertex; 4]>::try_from(p.path(pi)).expect("4-path");
        split_attach(c, pi, w1, w2);
        // One end x sees both interior vertices: rotate the 4-path so that
        // the far interior vertex becomes an end, then attach it to x.
        let shared: Vec<Vertex> = foreign_ends(g, p, w1, pi)
            .filter(|&x| g.has_edge(x, w2))
            .collect();
        for x in shared {
            if g.has_edge(x0, w1) {
                c.offer(
                    vec![(w1, w2)],
                    vec![(x0, w1), (x, w2)],
                    vec![w1.min(w2), w1.max(w2), x, x0],
                );
            }
            if g.has_edge(x0p, w2) {
                c.offer(
                    vec![(w1, w2)],
                    vec![(x0p, w2), (x, w1)],
                    vec![w1.min(w2), w1.max(w2), x, x0p],
                );
            }
        }
    }
}

fn moves_of_kind(g: &Graph, p: &PathPartition, l: &Layering, kind: MoveKind) -> Vec<Rewrite> {
    let mut c = Collector {
        g,
        p,
        before: p.potential(),
        kind,
        out: Vec::new(),
    };
    match kind {
        MoveKind::MergeEnds => merge_ends(&mut c),
        MoveKind::AbsorbSingleton => {
            let singles: Vec<Vertex> = (0..p.len())
                .filter(|&i| p.order(i) == 1)
                .map(|i| p.path(i)[0])
                .collect();
            absorb(&mut c, singles.into_iter());
        }
        MoveKind::AbsorbPairEnd => {
            let mut pair_ends: Vec<Vertex> = (0..p.len())
                .filter(|&i| p.order(i) == 2)
                .flat_map(|i| p.path(i).to_vec())
                .collect();
            pair_ends.sort_unstable();
            absorb(&mut c, pair_ends.into_iter());
        }
        MoveKind::ChainRewire => chain_rewire(&mut c, l),
        MoveKind::TripleMerge => triple_merge(&mut c),
        MoveKind::QuadDetach => quad_detach(&mut c),
    }
    c.finish()
}

/// Every improving move, kinds in catalog order, each kind sorted by the
/// vertices it touches.
pub fn enumerate_moves(
    g: &Graph,
    p: &PathPartition,
    l: &Layering,
) -> Result<Vec<Rewrite>, MoveError> {
    l.check_current(p)?;
    Ok(MoveKind::ALL
        .iter()
        .flat_map(|&k| moves_of_kind(g, p, l, k))
        .collect())
}

/// The first move [`enumerate_moves`] would return, without building the
/// later kinds.
pub fn first_move(
    g: &Graph,
    p: &PathPartition,
    l: &Layering,
) -> Result<Option<Rewrite>, MoveError> {
    l.check_current(p)?;
    Ok(MoveKind::ALL
        .iter()
        .find_map(|&k| moves_of_kind(g, p, l, k).into_iter().next()))
}

/// Applies `m`, checking that it still yields paths and still improves.
pub fn apply(g: &Graph, p: &PathPartition, m: &Rewrite) -> Result<PathPartition, MoveError> {
    let (touched, new_paths) = exchange(g, p, &m.edges_removed, &m.edges_added)
        .ok_or_else(|| MoveError::NotApplicable("edge exchange does not yield paths".into()))?;
    let out = p.replace_paths(&touched, new_paths);
    if out.potential() >= p.potential() {
        return Err(MoveError::NotApplicable(format!(
            "potential {} does not improve on {}",
            out.potential(),
            p.potential()
        )));
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub kind: MoveKind,
    pub removed: Vec<(Vertex, Vertex)>,
    pub added: Vec<(Vertex, Vertex)>,
    pub before: Potential,
    pub after: Potential,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct SearchTrace {
    pub steps: Vec<TraceStep>,
    pub iterations: usize,
    pub fixpoint_reached: bool,
}

impl SearchTrace {
    /// One JSON object per accepted move.
    pub fn to_json_lines(&self) -> String {
        self.steps
            .iter()
            .map(|s| serde_json::to_string(s).expect("trace step serializes") + "\n")
            .collect()
    }
}

/// Default step budget `10·n`.
pub fn default_max_steps(g: &Graph) -> usize {
    10 * g.vertex_count().max(1)
}

/// Repeatedly rebuilds the layering and applies the first improving move
/// until none is left or `max_steps` moves were applied.
pub fn local_search(
    g: &Graph,
    p0: &PathPartition,
    max_steps: usize,
) -> (PathPartition, SearchTrace) {
    let mut p = p0.canonical();
    let mut trace = SearchTrace::default();
    loop {
        let l = Layering::build(g, &p);
        let Some(m) = first_move(g, &p, &l).expect("layering built for p") else {
            trace.fixpoint_reached = true;
            break;
        };
        if trace.iterations == max_steps {
            break;
        }
        let next = apply(g, &p, &m).expect("enumerated move applies");
        debug_assert!(next.validate(g).is_ok());
        trace.steps.push(TraceStep {
            kind: m.kind,
            removed: m.edges_removed,
            added: m.edges_added,
            before: p.potential(),
            after: next.potential(),
        });
        trace.iterations += 1;
        p = next;
    }
    (p, trace)
}

/// Outcome of one structural check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ClaimCheck {
    pub passed: bool,
    /// Vertices witnessing the first failure.
    pub witness: Vec<Vertex>,
}

impl ClaimCheck {
    fn pass() -> Self {
        ClaimCheck {
            passed: true,
            witness: Vec::new(),
        }
    }

    fn fail(witness: Vec<Vertex>) -> Self {
        ClaimCheck {
            passed: false,
            witness,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ClaimReport {
    /// No improving move exists.
    pub fixpoint: bool,
    /// δ(G) ≥ 2, the setting in which the checks are guaranteed.
    pub min_degree_ok: bool,
    /// `p_1 + p_2 = 0`: the claims are vacuous and `|P| ≤ n/3`.
    pub n_over_3_branch: bool,
    /// Every singleton's neighbors are centers of 3-paths.
    pub singleton_neighbors: ClaimCheck,
    /// Every 2-path end's external neighbors lie in `C3 ∪ Int(R4) ∪ C5`.
    pub pair_end_neighbors: ClaimCheck,
    /// `W ⊆ C3 ∪ Int(R4) ∪ C5`.
    pub w_classes: ClaimCheck,
    /// `W_b = ∅`.
    pub w_order: ClaimCheck,
    /// Every 4-path holds at most two `W` vertices; when it holds two, a
    /// single outside vertex of `X` sees it and it has exactly four edges to
    /// `X`.
    pub four_path_w: ClaimCheck,
    /// `W ∩ X = ∅`.
    pub w_x_disjoint: bool,
}

impl ClaimReport {
    pub fn all_passed(&self) -> bool {
        self.singleton_neighbors.passed
            && self.pair_end_neighbors.passed
            && self.w_classes.passed
            && self.w_order.passed
            && self.four_path_w.passed
    }
}

pub fn assert_fixpoint_claims(
    g: &Graph,
    p: &PathPartition,
    l: &Layering,
) -> Result<ClaimReport, MoveError> {
    l.check_current(p)?;
    let fixpoint = first_move(g, p, l)?.is_none();
    let st = p.stats(None);
    let allowed: BTreeSet<Vertex> = st
        .centers3
        .iter()
        .chain(&st.interior4)
        .chain(&st.centers5)
        .copied()
        .collect();

    let first_bad = |verts: &mut dyn Iterator<Item = (Vertex, Vertex)>| -> ClaimCheck {
        match verts.next() {
            Some((a, b)) => ClaimCheck::fail(vec![a, b]),
            None => ClaimCheck::pass(),
        }
    };

    let singleton_neighbors = first_bad(
        &mut st
            .singletons
            .iter()
            .flat_map(|&v| g.neighbors(v).iter().map(move |&u| (v, u)))
            .filter(|(_, u)| !st.centers3.contains(u)),
    );
    let pair_end_neighbors = first_bad(
        &mut st
            .pair_ends
            .iter()
            .flat_map(|&a| external_neighbors(g, p, a).map(move |u| (a, u)))
            .filter(|(_, u)| !allowed.contains(u)),
    );
    let w_classes = match l.w_union.iter().find(|w| !allowed.contains(w)) {
        Some(&w) => ClaimCheck::fail(vec![w]),
        None => ClaimCheck::pass(),
    };
    let w_order = match l.bad.iter().next() {
        Some(&w) => ClaimCheck::fail(vec![w]),
        None => ClaimCheck::pass(),
    };
    let mut four_path_w = ClaimCheck::pass();
    for pi in 0..p.len() {
        if p.order(pi) != 4 {
            continue;
        }
        let verts: BTreeSet<Vertex> = p.path(pi).iter().copied().collect();
        let hits = verts.iter().filter(|v| l.w_union.contains(v)).count();
        let ok = match hits {
            0 | 1 => true,
            2 => {
                let outside: BTreeSet<Vertex> = verts
                    .iter()
                    .flat_map(|&v| external_neighbors(g, p, v))
                    .filter(|u| l.x_union.contains(u))
                    .collect();
                outside.len() == 1
                    && g.external_edge_count(&l.x_union, &verts)
                        .expect("vertices in range")
                        == 4
            }
            _ => false,
        };
        if !ok {
            four_path_w = ClaimCheck::fail(p.path(pi).to_vec());
            break;
        }
    }
    let min_degree_ok = g
        .degree_profile()
        .map(|d| d.min_degree >= 2)
        .unwrap_or(false);
    Ok(ClaimReport {
        fixpoint,
        min_degree_ok,
        n_over_3_branch: st.p(1) + st.p(2) == 0,
        singleton_neighbors,
        pair_end_neighbors,
        w_classes,
        w_order,
        four_path_w,
        w_x_disjoint: l.w_union.is_disjoint(&l.x_union),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn graph(n: usize, edges: &[(Vertex, Vertex)]) -> Graph {
        Graph::from_edges(n, edges.iter().copied()).unwrap()
    }

    fn part(g: &Graph, paths: &[&[Vertex]]) -> PathPartition {
        PathPartition::new(g, paths.iter().map(|p| p.to_vec()).collect()).unwrap()
    }

    fn moves(g: &Graph, p: &PathPartition) -> Vec<Rewrite> {
        enumerate_moves(g, p, &Layering::build(g, p)).unwrap()
    }

    #[test]
    fn merge_two_edges() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let p = part(&g, &[&[0, 1], &[2, 3]]);
        let ms = moves(&g, &p);
        let merges: Vec<_> = ms
            .iter()
            .filter(|m| m.kind == MoveKind::MergeEnds)
            .collect();
        assert_eq!(merges.len(), 1);
        assert_eq!(merges[0].edges_added, vec![(1, 2)]);
        let q = apply(&g, &p, merges[0]).unwrap();
        assert_eq!(q.paths(), &[vec![0, 1, 2, 3]]);
        assert_eq!(
            p.potential(),
            Potential {
                path_count: 2,
                p1: 0,
                p2: 2
            }
        );
        assert_eq!(
            q.potential(),
            Potential {
                path_count: 1,
                p1: 0,
                p2: 0
            }
        );
    }

    #[test]
    fn singleton_next_to_second_vertex_of_four_path() {
        // 4-path 0-1-2-3, singleton 4 adjacent to 1 only.
        let g = graph(5, &[(0, 1), (1, 2), (2, 3), (4, 1)]);
        let p = part(&g, &[&[0, 1, 2, 3], &[4]]);
        let ms = moves(&g, &p);
        let absorb: Vec<_> = ms
            .iter()
            .filter(|m| m.kind == MoveKind::AbsorbSingleton)
            .collect();
        assert!(!absorb.is_empty());
        assert!(absorb
            .iter()
            .all(|m| m.potential_after < m.potential_before));
        let q = apply(&g, &p, absorb[0]).unwrap();
        assert_eq!(q.potential().p1, 0);
    }

    #[test]
    fn fixpoint_has_no_moves() {
        let g = graph(3, &[(0, 1), (1, 2)]);
        let p = part(&g, &[&[0, 1, 2]]);
        assert!(moves(&g, &p).is_empty());
    }

    #[test]
    fn rotation_exposes_an_end() {
        // 3-path 0-1-2 closed into a triangle; 1 is adjacent to singleton 3.
        let g = graph(4, &[(0, 1), (1, 2), (0, 2), (1, 3)]);
        let p = part(&g, &[&[0, 1, 2], &[3]]);
        let ms = moves(&g, &p);
        let m = ms
            .iter()
            .find(|m| m.kind == MoveKind::MergeEnds)
            .expect("rotation merge");
        let q = apply(&g, &p, m).unwrap();
        assert_eq!(q.len(), 1);
    }

    #[test]
    fn quad_detach_three_into_two() {
        // R = 0-1-2-3; A = 4-5-6-7 with end 7 ~ 1; B = 8-9-10-11 with end 8 ~ 2.
        let g = graph(
            12,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (4, 5),
                (5, 6),
                (6, 7),
                (8, 9),
                (9, 10),
                (10, 11),
                (7, 1),
                (8, 2),
            ],
        );
        let p = part(&g, &[&[0, 1, 2, 3], &[4, 5, 6, 7], &[8, 9, 10, 11]]);
        let ms = moves(&g, &p);
        let m = ms
            .iter()
            .find(|m| m.kind == MoveKind::QuadDetach)
            .expect("quad detach");
        assert_eq!(m.edges_removed, vec![(1, 2)]);
        let q = apply(&g, &p, m).unwrap();
        assert_eq!(q.len(), 2);
        assert!(q.validate(&g).is_ok());
    }

    #[test]
    fn triple_merge_on_five_path() {
        // R' = 0-1-2-3-4 with consecutive 1,2; R = 5-6-7 with end 7 ~ 1;
        // R'' = 8-9-10 with end 8 ~ 2.
        let g = graph(
            11,
            &[
                (0, 1),
                (1, 2),
                (2, 3),
                (3, 4),
                (5, 6),
                (6, 7),
                (8, 9),
                (9, 10),
                (7, 1),
                (8, 2),
            ],
        );
        let p = part(&g, &[&[0, 1, 2, 3, 4], &[5, 6, 7], &[8, 9, 10]]);
        let ms = moves(&g, &p);
        let m = ms
            .iter()
            .find(|m| m.kind == MoveKind::TripleMerge)
            .expect("triple merge");
        let q = apply(&g, &p, m).unwrap();
        assert_eq!(q.len(), 2);
        let covered: BTreeSet<Vertex> = q.paths().iter().flatten().copied().collect();
        assert_eq!(covered, (0..11).collect());
    }

    #[test]
    fn stale_layering_is_an_error() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let p = part(&g, &[&[0, 1], &[2, 3]]);
        let q = part(&g, &[&[0, 1, 2, 3]]);
        let l = Layering::build(&g, &p);
        assert!(matches!(
            enumerate_moves(&g, &q, &l),
            Err(MoveError::Layering(LayeringError::Stale))
        ));
    }

    #[test]
    fn apply_rejects_non_improving() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let p = part(&g, &[&[0, 1], &[2, 3]]);
        let ms = moves(&g, &p);
        let q = apply(&g, &p, &ms[0]).unwrap();
        assert!(apply(&g, &q, &ms[0]).is_err());
    }

    #[test]
    fn local_search_on_path_and_k4() {
        let g = graph(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5)]);
        let (q, t) = local_search(&g, &PathPartition::greedy_initial(&g), 60);
        assert!(t.fixpoint_reached);
        assert_eq!(t.iterations, 0);
        assert_eq!(q.len(), 1);

        let k4 = graph(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        let (q, t) = local_search(&k4, &PathPartition::singletons(&k4), 40);
        assert!(t.fixpoint_reached);
        assert_eq!(q.len(), 1);
        for w in t.steps.windows(2) {
            assert!(w[1].before == w[0].after && w[1].after < w[1].before);
        }
    }

    #[test]
    fn trace_json_lines() {
        let g = graph(4, &[(0, 1), (1, 2), (2, 3)]);
        let (_, t) = local_search(&g, &PathPartition::singletons(&g), 40);
        let text = t.to_json_lines();
        assert_eq!(text.lines().count(), t.steps.len());
        let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
        assert_eq!(first["kind"], "MergeEnds");
        assert!(
            first["before"]["path_count"].as_u64().unwrap()
                > first["after"]["path_count"].as_u64().unwrap()
        );
    }
}
