//! Exact-rational evaluation of the degree bounds and of the counting
//! inequalities behind them. All comparisons are on `Ratio<i64>` or
//! cross-multiplied integers.

use std::collections::BTreeSet;
use std::fmt;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Serialize, Serializer};

use crate::graph::{Graph, Vertex};
use crate::layering::Layering;
use crate::partition::PathPartition;

/// Exact rational, serialized as `"numerator/denominator"`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(pub Ratio<i64>);

impl Rational {
    pub fn new(num: i64, den: i64) -> Self {
        Rational(Ratio::new(num, den))
    }

    pub fn int(v: i64) -> Self {
        Rational(Ratio::from_integer(v))
    }

    pub fn numer(&self) -> i64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> i64 {
        *self.0.denom()
    }
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.numer(), self.denom())
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

fn int(v: usize) -> i64 {
    i64::try_from(v).expect("count fits in i64")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum NotApplicable {
    /// δ < 2.
    MinDegreeBelowTwo,
    /// Δ < 2δ.
    MaxDegreeBelowTwiceMin,
}

/// `(Δ−δ)n/(Δ+δ)`, defined when `δ ≥ 2` and `Δ ≥ 2δ`.
pub fn theorem_bound(n: usize, delta: usize, max_delta: usize) -> Result<Rational, NotApplicable> {
    if delta < 2 {
        return Err(NotApplicable::MinDegreeBelowTwo);
    }
    if max_delta < 2 * delta {
        return Err(NotApplicable::MaxDegreeBelowTwiceMin);
    }
    Ok(Rational::new(
        int((max_delta - delta) * n),
        int(max_delta + delta),
    ))
}

/// How much the max-formula bound is backed by a proof here.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum ConjectureStatus {
    /// `δ ≥ 2` and `Δ ≥ 2δ`: the theorem covers it.
    CoveredByTheorem,
    /// Any other `δ ≥ 1`: checked empirically only.
    Empirical,
    /// `δ = 0`: isolated vertices; the value degenerates to `n`.
    Degenerate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConjectureBound {
    pub value: Rational,
    pub status: ConjectureStatus,
}

/// `max{n/(δ+1), (Δ−δ)n/(Δ+δ)}`.
pub fn conjecture_bound(n: usize, delta: usize, max_delta: usize) -> ConjectureBound {
    let clique_term = Rational::new(int(n), int(delta + 1));
    if delta == 0 {
        return ConjectureBound {
            value: clique_term,
            status: ConjectureStatus::Degenerate,
        };
    }
    let spread_term = if max_delta + delta == 0 {
        Rational::int(0)
    } else {
        Rational::new(
            int(max_delta.saturating_sub(delta) * n),
            int(max_delta + delta),
        )
    };
    let status = if delta >= 2 && max_delta >= 2 * delta {
        ConjectureStatus::CoveredByTheorem
    } else {
        ConjectureStatus::Empirical
    };
    ConjectureBound {
        value: clique_term.max(spread_term),
        status,
    }
}

/// `⌈n/9⌉` for connected cubic graphs, `⌈n/10⌉` when 2-connected.
pub fn cubic_bound(n: usize, two_connected: bool) -> usize {
    n.div_ceil(if two_connected { 10 } else { 9 })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub n: usize,
    pub delta: usize,
    #[serde(rename = "Delta")]
    pub max_delta: usize,
    /// `Δ/δ`; absent when `δ = 0`.
    pub k: Option<Rational>,
    pub theorem_value: Option<Rational>,
    pub not_applicable: Option<NotApplicable>,
    pub conjecture_value: Rational,
    pub conjecture_status: ConjectureStatus,
    pub preconditions_met: bool,
    pub partition_size: usize,
    pub verdict: Verdict,
    /// `partition_size` equals the theorem bound exactly.
    pub tight: bool,
    pub conjecture_verdict: Verdict,
}

/// Compares a path count (μ or the size of any partition) with the bounds.
pub fn check_bound(g: &Graph, partition_size: usize) -> BoundReport {
    let n = g.vertex_count();
    let (delta, max_delta) = g
        .degree_profile()
        .map(|d| (d.min_degree, d.max_degree))
        .unwrap_or((0, 0));
    let theorem = theorem_bound(n, delta, max_delta);
    let conj = conjecture_bound(n, delta, max_delta);
    let size = int(partition_size);
    // |P|·(Δ+δ) ≤ (Δ−δ)·n
    let (verdict, tight) = match theorem {
        Ok(_) => {
            let lhs = size * int(max_delta + delta);
            let rhs = int((max_delta - delta) * n);
            (Verdict::from_bool(lhs <= rhs), lhs == rhs)
        }
        Err(_) => (Verdict::NotApplicable, false),
    };
    BoundReport {
        n,
        delta,
        max_delta,
        k: (delta > 0).then(|| Rational::new(int(max_delta), int(delta))),
        theorem_value: theorem.ok(),
        not_applicable: theorem.err(),
        conjecture_value: conj.value,
        conjecture_status: conj.status,
        preconditions_met: theorem.is_ok(),
        partition_size,
        verdict,
        tight,
        conjecture_verdict: Verdict::from_bool(Rational::int(size) <= conj.value),
    }
}

/// The three sides of the ε(X, W) double count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EpsilonSandwich {
    /// Degree-based lower bound summed over the ends in `X`.
    pub lower: usize,
    /// Path-count upper bound `p_3Δ + p'_4(Δ−1) + 4p''_4 + p_5(Δ−2)`.
    pub upper: usize,
    /// ε(X, W) counted edge by edge.
    pub actual: usize,
    /// `X ∩ W = ∅`, under which ε counts each edge once unambiguously.
    pub disjoint: bool,
    pub p4_one_w: usize,
    pub p4_two_w: usize,
}

impl EpsilonSandwich {
    pub fn holds(&self) -> bool {
        self.lower <= self.actual && self.actual <= self.upper
    }
}

/// Lower, upper and actual value of ε(X, W) for a partition and its
/// layering. Path counts are taken over `P'`.
pub fn epsilon_sandwich(g: &Graph, p: &PathPartition, l: &Layering) -> EpsilonSandwich {
    let x = &l.x_union;
    let w = &l.w_union;
    let max_delta = g.degree_profile().map(|d| d.max_degree).unwrap_or(0);
    let actual = g
        .external_edge_count(x, w)
        .expect("layer vertices are in range");
    let (p4_one_w, p4_two_w) = l.four_path_w_counts(p);
    let mut lower = 0usize;
    let mut upper = 0usize;
    for &pi in &l.prime_paths {
        let path = p.path(pi);
        let ends: Vec<Vertex> = p.ends(pi);
        let deg_sum: usize = ends.iter().map(|&e| g.degree(e)).sum();
        match path.len() {
            1 | 3 => lower += deg_sum,
            2 | 5 => lower += deg_sum - ends.len(),
            4 => match path.iter().filter(|v| w.contains(v)).count() {
                1 => lower += deg_sum - 1,
                2 => lower += deg_sum,
                _ => {}
            },
            _ => {}
        }
        match path.len() {
            3 => upper += max_delta,
            4 => match path.iter().filter(|v| w.contains(v)).count() {
                1 => upper += max_delta - 1,
                2 => upper += 4,
                _ => {}
            },
            5 => upper += max_delta.saturating_sub(2),
            _ => {}
        }
    }
    EpsilonSandwich {
        lower,
        upper,
        actual,
        disjoint: x.is_disjoint(w),
        p4_one_w,
        p4_two_w,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CountingBranch {
    /// `p_1 + p_2 = 0`: every path has order ≥ 3, so `|P| ≤ n/3`.
    NOverThree,
    /// The layered count over `P'`.
    Layered,
}

#[derive(Debug, Clone, Serialize)]
pub struct CountingReport {
    pub branch: CountingBranch,
    pub preconditions_met: bool,
    pub delta: usize,
    #[serde(rename = "Delta")]
    pub max_delta: usize,
    pub k: Option<Rational>,
    /// `p_1 … p_5` over `P'`.
    pub prime_counts: [usize; 5],
    /// Solution of `p_1 + 2p_2 = r(p_3+p_4+p_5) + (2/δ)p_2`; absent when
    /// `p_3+p_4+p_5 = 0`.
    pub r: Option<Rational>,
    /// `|V(P')|`.
    pub n1: usize,
    /// `n − n1`.
    pub n2: usize,
    /// `|P'|`.
    pub p: usize,
    pub path_count: usize,
    pub epsilon_lower: usize,
    pub epsilon_upper: usize,
    pub epsilon_actual: usize,
    /// ε(X, W) ≥ the degree-based lower bound.
    pub epsilon_lower_ok: bool,
    /// `p_1 + 2p_2 ≤ (p_3+p_4+p_5)(k−2) + (2/δ)p_2`.
    pub excess_bound_ok: bool,
    /// `p ≤ (k−1)/(k+1)·n1`.
    pub p_bound_ok: bool,
    /// Every path outside `P'` has order ≥ 3, so `|P \ P'| ≤ n2/3`.
    pub outside_order_ok: bool,
    /// `|P| ≤ (k−1)/(k+1)·n`.
    pub final_ok: bool,
    /// Degenerate `p_3+p_4+p_5 = 0` with `p_1 + 2p_2 > 0`.
    pub degenerate: bool,
}

impl CountingReport {
    pub fn all_ok(&self) -> bool {
        self.epsilon_lower_ok
            && self.excess_bound_ok
            && self.p_bound_ok
            && self.outside_order_ok
            && self.final_ok
    }
}

/// Runs the counting argument on a partition: solves for `r`, checks
/// `r ≤ k−2`, the bound on `|P'|`, the order of the paths outside `P'`, and
/// the final `|P| ≤ (k−1)n/(k+1)`.
pub fn counting_chain(g: &Graph, p: &PathPartition, l: &Layering) -> CountingReport {
    let n = g.vertex_count();
    let (delta, max_delta) = g
        .degree_profile()
        .map(|d| (d.min_degree, d.max_degree))
        .unwrap_or((0, 0));
    let preconditions_met = theorem_bound(n, delta, max_delta).is_ok();
    let k = (delta > 0).then(|| Rational::new(int(max_delta), int(delta)));
    let whole = p.stats(None);
    let prime_set: BTreeSet<usize> = l.prime_paths.clone();
    let prime = p.stats(Some(&prime_set));
    let pc = [prime.p(1), prime.p(2), prime.p(3), prime.p(4), prime.p(5)];
    let n1 = prime.vertex_count();
    let n2 = n - n1;
    let p_prime = prime.path_count();
    let path_count = p.len();
    let eps = epsilon_sandwich(g, p, l);
    let outside_order_ok = (0..p.len())
        .filter(|i| !prime_set.contains(i))
        .all(|i| p.order(i) >= 3);

    // (k−1)/(k+1) = (Δ−δ)/(Δ+δ)
    let ratio_ok = |count: usize, total: usize| -> bool {
        int(count) * int(max_delta + delta) <= int(max_delta.saturating_sub(delta)) * int(total)
    };

    let mut report = CountingReport {
        branch: CountingBranch::Layered,
        preconditions_met,
        delta,
        max_delta,
        k,
        prime_counts: pc,
        r: None,
        n1,
        n2,
        p: p_prime,
        path_count,
        epsilon_lower: eps.lower,
        epsilon_upper: eps.upper,
        epsilon_actual: eps.actual,
        epsilon_lower_ok: eps.lower <= eps.actual,
        excess_bound_ok: false,
        p_bound_ok: false,
        outside_order_ok,
        final_ok: ratio_ok(path_count, n),
        degenerate: false,
    };

    if whole.p(1) + whole.p(2) == 0 {
        report.branch = CountingBranch::NOverThree;
        report.excess_bound_ok = true;
        report.p_bound_ok = true;
        // |P| ≤ n/3 and n/3 ≤ (k−1)n/(k+1) for k ≥ 2.
        report.final_ok = 3 * path_count <= n && (!preconditions_met || ratio_ok(path_count, n));
        return report;
    }
    if delta == 0 {
        return report;
    }

    let q = pc[2] + pc[3] + pc[4];
    let two_over_delta = Rational::new(2, int(delta));
    let lhs = Rational(Ratio::from_integer(int(pc[0] + 2 * pc[1])) - two_over_delta.0 * int(pc[1]));
    if q == 0 {
        // Forced p_1 = 0 and p_2(2 − 2/δ) ≤ 0.
        report.degenerate = pc[0] + 2 * pc[1] > 0;
        report.excess_bound_ok = lhs.0 <= Ratio::zero();
    } else {
        let r = Rational(lhs.0 / int(q));
        report.r = Some(r);
        let k = k.expect("δ > 0");
        report.excess_bound_ok = r.0 <= k.0 - 2;
    }
    report.p_bound_ok = ratio_ok(p_prime, n1);
    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k(a: usize, b: usize) -> Graph {
        Graph::from_edges(a + b, (0..a).flat_map(|x| (a..a + b).map(move |y| (x, y)))).unwrap()
    }

    #[test]
    fn theorem_bound_examples() {
        assert_eq!(theorem_bound(6, 2, 4), Ok(Rational::int(2)));
        assert_eq!(theorem_bound(7, 2, 5), Ok(Rational::int(3)));
        assert_eq!(theorem_bound(5, 2, 5), Ok(Rational::new(15, 7)));
        assert_eq!(
            theorem_bound(6, 2, 3),
            Err(NotApplicable::MaxDegreeBelowTwiceMin)
        );
        assert_eq!(
            theorem_bound(6, 1, 3),
            Err(NotApplicable::MinDegreeBelowTwo)
        );
    }

    #[test]
    fn conjecture_bound_examples() {
        let c = conjecture_bound(12, 3, 3);
        assert_eq!(c.value, Rational::int(3));
        assert_eq!(c.status, ConjectureStatus::Empirical);
        assert_eq!(conjecture_bound(6, 2, 4).value, Rational::int(2));
        assert_eq!(
            conjecture_bound(6, 2, 4).status,
            ConjectureStatus::CoveredByTheorem
        );
        let d = conjecture_bound(5, 0, 2);
        assert_eq!(
            (d.value, d.status),
            (Rational::int(5), ConjectureStatus::Degenerate)
        );
    }

    #[test]
    fn crossover_at_delta_plus_two() {
        // n/(δ+1) ≤ (Δ−δ)n/(Δ+δ) exactly when Δ ≥ δ+2
        for delta in 1..8usize {
            for max_delta in delta..delta + 8 {
                let n = 840;
                let a = Rational::new(n, int(delta + 1));
                let b = Rational::new(int(max_delta - delta) * n, int(max_delta + delta));
                assert_eq!(a <= b, max_delta >= delta + 2, "δ={delta} Δ={max_delta}");
            }
        }
    }

    #[test]
    fn cubic_bound_examples() {
        assert_eq!(cubic_bound(10, false), 2);
        assert_eq!(cubic_bound(10, true), 1);
        assert_eq!(cubic_bound(19, false), 3);
    }

    #[test]
    fn check_bound_examples() {
        let r = check_bound(&k(2, 4), 2);
        assert_eq!(r.verdict, Verdict::Pass);
        assert!(r.tight);
        let p10 = Graph::from_edges(10, (1..10).map(|i| (i - 1, i))).unwrap();
        assert_eq!(check_bound(&p10, 1).verdict, Verdict::NotApplicable);
        let tri = Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap();
        let three = tri.disjoint_union(&tri).disjoint_union(&tri);
        let r = check_bound(&three, 3);
        assert_eq!(r.verdict, Verdict::NotApplicable);
        assert_eq!(r.conjecture_verdict, Verdict::Pass);
        assert_eq!(r.conjecture_value, Rational::int(3));
    }

    #[test]
    fn rationals_serialize_as_fractions() {
        let r = check_bound(&k(2, 5), 3);
        let v = serde_json::to_value(&r).unwrap();
        assert_eq!(v["theorem_value"], "3/1");
        assert_eq!(v["k"], "5/2");
        assert_eq!(v["Delta"], 5);
        assert_eq!(Rational::new(15, 7).to_string(), "15/7");
        assert_eq!(Rational::new(-4, 6).to_string(), "-2/3");
    }
}
