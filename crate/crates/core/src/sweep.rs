//! Seeded corpus sweeps.
//!
//! A manifest lists one family per line with parameter ranges:
//!
//! ```text
//! # comment
//! random_bounded n=8..14 delta=2 Delta=5 seeds=50
//! random_cubic n=4..16 seeds=0..9
//! bipartite_copies delta=2..3 Delta=4..8 m=1..2
//! ```
//!
//! `a..b` is inclusive. `seeds=N` means seeds `0..N` (exclusive), and
//! `seeds=a..b` is inclusive like every other range. Odd `n` is skipped for
//! `random_cubic`. Instances run in parallel; results are sorted by
//! [`CorpusSpec`] before aggregation.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bounds::{
    check_bound, counting_chain, cubic_bound, epsilon_sandwich, ConjectureStatus, Verdict,
};
use crate::exact::{exact_mu, ExactError};
use crate::generators::{key_values, CorpusSpec, GeneratorError};
use crate::graph::Graph;
use crate::layering::Layering;
use crate::moves::{assert_fixpoint_claims, default_max_steps, local_search};
use crate::partition::PathPartition;

#[derive(Error, Debug, Clone, PartialEq, Eq)]
pub enum ManifestError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: {source}")]
    Spec { line: usize, source: GeneratorError },
}

fn parse_range(text: &str) -> Option<(u64, u64)> {
    match text.split_once("..") {
        Some((a, b)) => {
            let (a, b) = (a.parse().ok()?, b.parse().ok()?);
            (a <= b).then_some((a, b))
        }
        None => {
            let v = text.parse().ok()?;
            Some((v, v))
        }
    }
}

/// Expands one manifest line into specs.
pub fn expand_line(text: &str, line: usize) -> Result<Vec<CorpusSpec>, ManifestError> {
    let syntax = |message: String| ManifestError::Syntax { line, message };
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let (family, rest) = tokens
        .split_first()
        .ok_or_else(|| syntax("empty line".into()))?;
    let kv = key_values(rest).map_err(|source| ManifestError::Spec { line, source })?;
    let mut ranges: Vec<(String, Vec<u64>)> = Vec::new();
    for (k, v) in kv {
        let (key, values): (String, Vec<u64>) = if k == "seeds" {
            match v.parse::<u64>() {
                Ok(count) => ("seed".into(), (0..count).collect()),
                Err(_) => {
                    let (a, b) =
                        parse_range(&v).ok_or_else(|| syntax(format!("bad range seeds={v}")))?;
                    ("seed".into(), (a..=b).collect())
                }
            }
        } else {
            let (a, b) = parse_range(&v).ok_or_else(|| syntax(format!("bad range {k}={v}")))?;
            (k, (a..=b).collect())
        };
        if ranges.iter().any(|(kk, _)| *kk == key) {
            return Err(syntax(format!("{key} given twice")));
        }
        ranges.push((key, values));
    }
    // Cartesian product in the order the keys were written.
    let mut combos: Vec<Vec<(String, u64)>> = vec![Vec::new()];
    for (k, values) in &ranges {
        combos = combos
            .into_iter()
            .flat_map(|c| {
                values.iter().map(move |&v| {
                    let mut c = c.clone();
                    c.push((k.clone(), v));
                    c
                })
            })
            .collect();
    }
    let mut out = Vec::new();
    for combo in combos {
        let text = std::iter::once(family.to_string())
            .chain(combo.iter().map(|(k, v)| format!("{k}={v}")))
            .collect::<Vec<_>>()
            .join(" ");
        let spec: CorpusSpec = text
            .parse()
            .map_err(|source| ManifestError::Spec { line, source })?;
        if let CorpusSpec::RandomCubic { n, .. } = spec {
            if n % 2 == 1 {
                continue;
            }
        }
        out.push(spec);
    }
    Ok(out)
}

pub fn parse_manifest(text: &str) -> Result<Vec<CorpusSpec>, ManifestError> {
    let mut specs = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let body = raw.split('#').next().unwrap_or("").trim();
        if !body.is_empty() {
            specs.extend(expand_line(body, i + 1)?);
        }
    }
    specs.sort();
    specs.dedup();
    Ok(specs)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Skipped,
    /// A violation of a bound that is only conjectured for these degrees.
    EmpiricalViolation,
}

impl Outcome {
    fn of(ok: bool) -> Self {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Fail
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepOptions {
    pub exact_limit: usize,
    /// `None` means `10n`.
    pub max_steps: Option<usize>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            exact_limit: crate::exact::DEFAULT_EXACT_LIMIT,
            max_steps: None,
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InstanceReport {
    pub spec: CorpusSpec,
    pub n: usize,
    pub delta: usize,
    #[serde(rename = "Delta")]
    pub max_delta: usize,
    pub mu: Option<usize>,
    pub greedy: usize,
    pub heuristic: usize,
    pub steps: usize,
    pub checks: BTreeMap<&'static str, Outcome>,
    pub error: Option<String>,
}

impl InstanceReport {
    pub fn failed(&self) -> bool {
        self.error.is_some() || self.checks.values().any(|&o| o == Outcome::Fail)
    }
}

/// Runs every check that applies to one graph.
pub fn check_graph(spec: CorpusSpec, g: &Graph, opts: &SweepOptions) -> InstanceReport {
    let n = g.vertex_count();
    let (delta, max_delta) = g
        .degree_profile()
        .map(|d| (d.min_degree, d.max_degree))
        .unwrap_or((0, 0));
    let mut checks = BTreeMap::new();
    let mut error = None;

    let mu = match exact_mu(g, opts.exact_limit) {
        Ok(r) => {
            checks.insert(
                "exact_witness",
                Outcome::of(r.witness.validate(g).is_ok() && r.witness.len() == r.mu),
            );
            Some(r.mu)
        }
        Err(ExactError::TooLarge { .. }) => None,
        Err(e) => {
            error = Some(e.to_string());
            None
        }
    };

    let greedy = PathPartition::greedy_initial(g);
    let max_steps = opts.max_steps.unwrap_or_else(|| default_max_steps(g));
    let (fix, trace) = local_search(g, &greedy, max_steps);
    let decreasing = trace.steps.iter().all(|s| s.after < s.before)
        && trace.steps.windows(2).all(|w| w[1].before == w[0].after);
    checks.insert("search_fixpoint", Outcome::of(trace.fixpoint_reached));
    checks.insert("search_valid", Outcome::of(fix.validate(g).is_ok()));
    checks.insert(
        "search_monotone",
        Outcome::of(decreasing && fix.len() <= greedy.len()),
    );
    if let Some(mu) = mu {
        checks.insert("search_at_least_mu", Outcome::of(fix.len() >= mu));
    }

    let size = mu.unwrap_or(fix.len());
    let bound = check_bound(g, size);
    checks.insert(
        "theorem_bound",
        match bound.verdict {
            Verdict::Pass => Outcome::Pass,
            Verdict::Fail => Outcome::Fail,
            Verdict::NotApplicable => Outcome::Skipped,
        },
    );
    if bound.preconditions_met {
        checks.insert(
            "search_theorem_bound",
            Outcome::of(check_bound(g, fix.len()).verdict == Verdict::Pass),
        );
    }
    checks.insert(
        "conjecture_bound",
        match (bound.conjecture_verdict, bound.conjecture_status) {
            (Verdict::Fail, ConjectureStatus::CoveredByTheorem) => Outcome::Fail,
            (Verdict::Fail, _) => Outcome::EmpiricalViolation,
            _ => Outcome::Pass,
        },
    );

    if trace.fixpoint_reached && delta >= 2 {
        let l = Layering::build(g, &fix);
        let claims = assert_fixpoint_claims(g, &fix, &l).expect("layering is current");
        checks.insert(
            "fixpoint_claims",
            Outcome::of(claims.all_passed() && claims.w_x_disjoint),
        );
        if bound.preconditions_met {
            let eps = epsilon_sandwich(g, &fix, &l);
            checks.insert("epsilon_sandwich", Outcome::of(eps.holds()));
            checks.insert(
                "counting_chain",
                Outcome::of(counting_chain(g, &fix, &l).all_ok()),
            );
        }
    }

    match spec {
        CorpusSpec::RandomCubic { .. } => {
            if let Some(mu) = mu {
                checks.insert("cubic_bound", Outcome::of(mu <= cubic_bound(n, false)));
                if g.is_biconnected() {
                    checks.insert(
                        "cubic_bound_2connected",
                        Outcome::of(mu <= cubic_bound(n, true)),
                    );
                }
            }
        }
        CorpusSpec::BipartiteCopies {
            delta,
            max_delta,
            m,
        } if max_delta >= delta + 2 => {
            if let Some(mu) = mu {
                checks.insert("family_tight", Outcome::of(mu == m * (max_delta - delta)));
            }
        }
        CorpusSpec::CliqueCopies { m, .. } => {
            if let Some(mu) = mu {
                checks.insert("family_tight", Outcome::of(mu == m));
            }
        }
        _ => {}
    }

    InstanceReport {
        spec,
        n,
        delta,
        max_delta,
        mu,
        greedy: greedy.len(),
        heuristic: fix.len(),
        steps: trace.iterations,
        checks,
        error,
    }
}

pub fn run_instance(spec: &CorpusSpec, opts: &SweepOptions) -> InstanceReport {
    match spec.build() {
        Ok(g) => check_graph(spec.clone(), &g, opts),
        Err(e) => InstanceReport {
            spec: spec.clone(),
            n: 0,
            delta: 0,
            max_delta: 0,
            mu: None,
            greedy: 0,
            heuristic: 0,
            steps: 0,
            checks: BTreeMap::new(),
            error: Some(e.to_string()),
        },
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct CheckTally {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
    pub empirical_violation: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepSummary {
    pub instances: usize,
    pub failed_instances: usize,
    pub checks: BTreeMap<&'static str, CheckTally>,
    /// `(instance, check or error)` for every failure, sorted.
    pub failures: Vec<(String, String)>,
    pub empirical_violations: Vec<String>,
    pub reports: Vec<InstanceReport>,
}

impl SweepSummary {
    pub fn all_passed(&self) -> bool {
        self.failed_instances == 0
    }

    fn from_reports(mut reports: Vec<InstanceReport>) -> Self {
        reports.sort_by(|a, b| a.spec.cmp(&b.spec));
        let mut checks: BTreeMap<&'static str, CheckTally> = BTreeMap::new();
        let mut failures = Vec::new();
        let mut empirical = Vec::new();
        for r in &reports {
            if let Some(e) = &r.error {
                failures.push((r.spec.to_string(), e.clone()));
            }
            for (&name, &o) in &r.checks {
                let t = checks.entry(name).or_default();
                match o {
                    Outcome::Pass => t.pass += 1,
                    Outcome::Fail => {
                        t.fail += 1;
                        failures.push((r.spec.to_string(), name.to_string()));
                    }
                    Outcome::Skipped => t.skipped += 1,
                    Outcome::EmpiricalViolation => {
                        t.empirical_violation += 1;
                        empirical.push(r.spec.to_string());
                    }
                }
            }
        }
        SweepSummary {
            instances: reports.len(),
            failed_instances: reports.iter().filter(|r| r.failed()).count(),
            checks,
            failures,
            empirical_violations: empirical,
            reports,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = format!(
            "instances: {}\nfailed instances: {}\n",
            self.instances, self.failed_instances
        );
        for (name, t) in &self.checks {
            s += &format!(
                "  {name:<24} pass {:>5}  fail {:>3}  skipped {:>4}  empirical {:>3}\n",
                t.pass, t.fail, t.skipped, t.empirical_violation
            );
        }
        for (inst, what) in &self.failures {
            s += &format!("FAIL {inst}: {what}\n");
        }
        for inst in &self.empirical_violations {
            s += &format!("empirical violation (outside the theorem's range): {inst}\n");
        }
        s
    }
}

pub fn run_sweep(specs: &[CorpusSpec], opts: &SweepOptions) -> SweepSummary {
    let reports: Vec<InstanceReport> = specs.par_iter().map(|s| run_instance(s, opts)).collect();
    SweepSummary::from_reports(reports)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_expansion() {
        let specs = parse_manifest(
            "# demo\nrandom_bounded n=8..10 delta=2 Delta=5 seeds=3\n\nrandom_cubic n=4..7 seeds=5..6 # odd n dropped\n",
        )
        .unwrap();
        assert_eq!(specs.len(), 3 * 3 + 2 * 2);
        assert!(specs.windows(2).all(|w| w[0] < w[1]));
        assert!(specs.contains(&CorpusSpec::RandomCubic { n: 6, seed: 6 }));
        assert!(!specs
            .iter()
            .any(|s| matches!(s, CorpusSpec::RandomCubic { n: 5, .. })));
    }

    #[test]
    fn manifest_errors_carry_lines() {
        let e = parse_manifest("fixture\nrandom_cubic n=9..4 seeds=1\n").unwrap_err();
        assert!(matches!(e, ManifestError::Syntax { line: 2, .. }));
        let e = parse_manifest("walk n=3\n").unwrap_err();
        assert!(matches!(e, ManifestError::Spec { line: 1, .. }));
    }

    #[test]
    fn small_sweep_passes() {
        let specs = parse_manifest("bipartite_copies delta=2 Delta=4..5 m=1\nclique_copies delta=2 m=1..2\nrandom_bounded n=8 delta=2 Delta=4 seeds=4\n").unwrap();
        let s = run_sweep(&specs, &SweepOptions::default());
        assert!(s.all_passed(), "{}", s.to_text());
        assert_eq!(s.instances, 8);
        assert_eq!(s.checks["family_tight"].pass, 4);
    }

    #[test]
    fn infeasible_spec_is_a_failure() {
        let s = run_sweep(
            &[CorpusSpec::RandomCubic { n: 5, seed: 0 }],
            &SweepOptions::default(),
        );
        assert!(!s.all_passed());
        assert_eq!(s.failures.len(), 1);
    }
}
