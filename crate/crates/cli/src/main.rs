//! `pathpart` command-line driver.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 bad input or usage,
//! 3 infeasible generator parameters, 4 graph too large for the exact solver.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::Value;

use pathpart::bounds::{check_bound, counting_chain, epsilon_sandwich, Verdict};
use pathpart::generators::{CorpusSpec, GeneratorError};
use pathpart::io::{parse_graph, parse_paths, write_edge_list, write_paths};
use pathpart::moves::{assert_fixpoint_claims, default_max_steps, ClaimReport};
use pathpart::sweep::{parse_manifest, run_sweep, SweepOptions};
use pathpart::{
    exact_mu, local_search, ExactError, Graph, Layering, PathPartition, SearchTrace,
    DEFAULT_EXACT_LIMIT,
};

#[derive(Parser)]
#[command(
    name = "pathpart",
    version,
    about = "Path partitions: exact μ, local search, bound checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Args)]
struct Source {
    /// Edge-list or DIMACS file; `-` reads standard input.
    #[arg(long, short, conflicts_with = "gen")]
    input: Option<PathBuf>,
    /// Inline generator spec, e.g. "random_bounded n=10 delta=2 Delta=5 seed=1".
    #[arg(long)]
    gen: Option<String>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Args)]
struct SearchOpts {
    /// Step budget for the local search; defaults to 10n.
    #[arg(long)]
    max_steps: Option<usize>,
    /// Start from (or, for verify and layer, use) this partition: one path per line.
    #[arg(long)]
    partition: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Exact μ(G) with a witness partition.
    Exact {
        #[command(flatten)]
        src: Source,
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: usize,
    },
    /// Greedy start plus local search; prints the fixpoint and its checks.
    Solve {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Bound and counting checks on a solved or provided partition.
    Verify {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        search: SearchOpts,
        /// Also compare the exact μ when n is at most this.
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: usize,
    },
    /// Layers X_t / W_t, α-sequences and the good/bad split.
    Layer {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Local search with one JSON line per applied move.
    Trace {
        #[command(flatten)]
        src: Source,
        #[command(flatten)]
        search: SearchOpts,
    },
    /// Emit a generated graph as an edge list.
    Generate {
        /// Family and parameters, e.g. `random_cubic n=10 seed=7`.
        #[arg(required = true, num_args = 1..)]
        spec: Vec<String>,
    },
    /// Run a seeded corpus and aggregate pass/fail counts.
    Sweep {
        /// Manifest file, one family line with ranges per line.
        #[arg(long, conflicts_with = "family")]
        manifest: Option<PathBuf>,
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        n: Option<String>,
        #[arg(long)]
        delta: Option<String>,
        #[arg(long = "Delta")]
        max_delta: Option<String>,
        #[arg(long)]
        m: Option<String>,
        /// A count N (seeds 0..N) or an inclusive range a..b.
        #[arg(long)]
        seeds: Option<String>,
        #[arg(long, default_value_t = DEFAULT_EXACT_LIMIT)]
        exact_limit: usize,
        #[arg(long)]
        max_steps: Option<usize>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

enum Failure {
    Check,
    Input(String),
    Generator(GeneratorError),
    Oversize(ExactError),
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Check => 1,
            Failure::Input(_) => 2,
            Failure::Generator(_) => 3,
            Failure::Oversize(_) => 4,
        }
    }
}

type Outcome = Result<(), Failure>;

fn read_text(path: &PathBuf) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin()
            .read_to_string(&mut s)
            .map_err(|e| Failure::Input(format!("stdin: {e}")))?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
    }
}

fn load_graph(src: &Source) -> Result<Graph, Failure> {
    match (&src.input, &src.gen) {
        (Some(path), _) => {
            let text = read_text(path)?;
            parse_graph(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
        }
        (None, Some(spec)) => {
            let spec: CorpusSpec = spec
                .parse()
                .map_err(|e: GeneratorError| Failure::Input(e.to_string()))?;
            spec.build().map_err(Failure::Generator)
        }
        (None, None) => Err(Failure::Input("one of --input or --gen is required".into())),
    }
}

fn load_partition(g: &Graph, path: &PathBuf) -> Result<PathPartition, Failure> {
    let text = read_text(path)?;
    let paths =
        parse_paths(&text).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))?;
    PathPartition::new(g, paths).map_err(|e| Failure::Input(format!("{}: {e}", path.display())))
}

/// JSON through `Value` so keys come out sorted and re-serialization is
/// byte-identical.
fn json(report: &impl serde::Serialize) -> String {
    let v: Value = serde_json::to_value(report).expect("reports serialize");
    serde_json::to_string_pretty(&v).expect("values serialize")
}

fn solve(
    g: &Graph,
    search: &SearchOpts,
) -> Result<(PathPartition, PathPartition, SearchTrace), Failure> {
    let start = match &search.partition {
        Some(path) => load_partition(g, path)?,
        None => PathPartition::greedy_initial(g),
    };
    let budget = search.max_steps.unwrap_or_else(|| default_max_steps(g));
    let (fix, trace) = local_search(g, &start, budget);
    Ok((start, fix, trace))
}

fn claims_text(c: &ClaimReport) -> String {
    let mark = |ok: bool| if ok { "ok" } else { "FAILED" };
    format!(
        "fixpoint: {}\nmin degree >= 2: {}\np1+p2 = 0 branch: {}\nsingleton nbrs {}  pair-end nbrs {}  W classes {}  W order {}  4-path W {}\n",
        c.fixpoint,
        c.min_degree_ok,
        c.n_over_3_branch,
        mark(c.singleton_neighbors.passed),
        mark(c.pair_end_neighbors.passed),
        mark(c.w_classes.passed),
        mark(c.w_order.passed),
        mark(c.four_path_w.passed),
    )
}

fn cmd_exact(src: &Source, limit: usize) -> Outcome {
    let g = load_graph(src)?;
    let r = exact_mu(&g, limit).map_err(|e| match e {
        ExactError::TooLarge { .. } => Failure::Oversize(e),
        ExactError::Empty => Failure::Input(e.to_string()),
    })?;
    match src.format {
        Format::Text => print!("mu = {}\n{}", r.mu, write_paths(r.witness.paths())),
        Format::Json => println!(
            "{}",
            json(&serde_json::json!({
                "mu": r.mu,
                "witness": r.witness.paths(),
                "explored_states": r.explored_states,
            }))
        ),
    }
    Ok(())
}

fn cmd_solve(src: &Source, search: &SearchOpts) -> Outcome {
    let g = load_graph(src)?;
    let (start, fix, trace) = solve(&g, search)?;
    let l = Layering::build(&g, &fix);
    let claims = assert_fixpoint_claims(&g, &fix, &l).expect("layering is current");
    let claims_fail = claims.min_degree_ok && claims.fixpoint && !claims.all_passed();
    match src.format {
        Format::Text => {
            let mut out = format!(
                "paths: {}\npotential: {}\nstart potential: {}\nmoves: {}\n",
                fix.len(),
                fix.potential(),
                start.potential(),
                trace.iterations
            );
            out += &claims_text(&claims);
            out += &write_paths(fix.paths());
            print!("{out}");
        }
        Format::Json => println!(
            "{}",
            json(&serde_json::json!({
                "paths": fix.paths(),
                "potential": fix.potential(),
                "start_potential": start.potential(),
                "moves": trace.iterations,
                "fixpoint_reached": trace.fixpoint_reached,
                "claims": claims,
            }))
        ),
    }
    if !trace.fixpoint_reached || claims_fail {
        return Err(Failure::Check);
    }
    Ok(())
}

fn cmd_verify(src: &Source, search: &SearchOpts, limit: usize) -> Outcome {
    let g = load_graph(src)?;
    // A provided partition is checked as is; otherwise solve first.
    let (p, fixpoint) = match &search.partition {
        Some(path) => {
            let p = load_partition(&g, path)?;
            let l = Layering::build(&g, &p);
            let fixpoint = assert_fixpoint_claims(&g, &p, &l)
                .expect("current")
                .fixpoint;
            (p, fixpoint)
        }
        None => {
            let (_, fix, trace) = solve(&g, search)?;
            (fix, trace.fixpoint_reached)
        }
    };
    let bound = check_bound(&g, p.len());
    let l = Layering::build(&g, &p);
    let counting = counting_chain(&g, &p, &l);
    let sandwich = epsilon_sandwich(&g, &p, &l);
    let mu = exact_mu(&g, limit).ok().map(|r| r.mu);
    let counting_required = fixpoint && counting.preconditions_met;
    let ok = bound.verdict != Verdict::Fail
        && (!counting_required || (counting.all_ok() && sandwich.holds()))
        && mu.is_none_or(|mu| check_bound(&g, mu).verdict != Verdict::Fail);
    match src.format {
        Format::Text => {
            let mut out = String::new();
            let _ = writeln!(
                out,
                "n = {}, delta = {}, Delta = {}",
                bound.n, bound.delta, bound.max_delta
            );
            match bound.theorem_value {
                Some(v) => {
                    let _ = writeln!(out, "theorem bound = {v}");
                }
                None => {
                    let _ = writeln!(
                        out,
                        "theorem bound: not applicable ({:?})",
                        bound.not_applicable.unwrap()
                    );
                }
            }
            let _ = writeln!(
                out,
                "conjecture bound = {} ({:?})",
                bound.conjecture_value, bound.conjecture_status
            );
            let _ = writeln!(
                out,
                "partition size = {} (fixpoint: {fixpoint})",
                bound.partition_size
            );
            if let Some(mu) = mu {
                let _ = writeln!(out, "mu = {mu}");
            }
            let verdict = match bound.verdict {
                Verdict::Pass if bound.tight => "pass (tight)",
                Verdict::Pass => "pass",
                Verdict::Fail => "FAIL",
                Verdict::NotApplicable => "not applicable",
            };
            let _ = writeln!(out, "verdict: {verdict}");
            let _ = writeln!(
                out,
                "epsilon(X,W): lower {} <= actual {} <= upper {}",
                sandwich.lower, sandwich.actual, sandwich.upper
            );
            let _ = writeln!(
                out,
                "counting ({:?}): r = {}, epsilon lower {}, excess bound {}, p bound {}, final {}",
                counting.branch,
                counting.r.map_or("-".to_string(), |r| r.to_string()),
                counting.epsilon_lower_ok,
                counting.excess_bound_ok,
                counting.p_bound_ok,
                counting.final_ok
            );
            print!("{out}");
        }
        Format::Json => println!(
            "{}",
            json(&serde_json::json!({
                "bound": bound,
                "counting": counting,
                "epsilon": sandwich,
                "fixpoint": fixpoint,
                "mu": mu,
                "paths": p.paths(),
                "passed": ok,
            }))
        ),
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_layer(src: &Source, search: &SearchOpts) -> Outcome {
    let g = load_graph(src)?;
    let p = match &search.partition {
        Some(path) => load_partition(&g, path)?,
        None => solve(&g, search)?.1,
    };
    let l = Layering::build(&g, &p);
    let t = l.trace(&p);
    match src.format {
        Format::Text => {
            let mut out = String::new();
            for (i, x) in t.x_layers.iter().enumerate() {
                let _ = writeln!(out, "X_{} = {x:?}", i + 1);
                if let Some(w) = t.w_layers.get(i) {
                    let _ = writeln!(out, "W_{} = {w:?}", i + 1);
                }
            }
            for (w, seq) in &t.alpha {
                let chain: Vec<String> = seq.iter().map(|[x, w]| format!("{x}-{w}")).collect();
                let _ = writeln!(out, "alpha({w}) = {}", chain.join(", "));
            }
            let _ = writeln!(
                out,
                "W_a = {:?}\nW_b = {:?}\nP' = {:?}",
                t.good_order, t.bad, t.prime_paths
            );
            print!("{out}");
        }
        Format::Json => println!("{}", json(&t)),
    }
    Ok(())
}

fn cmd_trace(src: &Source, search: &SearchOpts) -> Outcome {
    let g = load_graph(src)?;
    let (_, _, trace) = solve(&g, search)?;
    print!("{}", trace.to_json_lines());
    if trace.fixpoint_reached {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn cmd_generate(spec: &[String]) -> Outcome {
    let spec: CorpusSpec = spec
        .join(" ")
        .parse()
        .map_err(|e: GeneratorError| Failure::Input(e.to_string()))?;
    let g = spec.build().map_err(Failure::Generator)?;
    print!("# {spec}\n{}", write_edge_list(&g));
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_sweep(
    manifest: &Option<PathBuf>,
    family: &Option<String>,
    params: [(&str, &Option<String>); 5],
    exact_limit: usize,
    max_steps: Option<usize>,
    format: Format,
) -> Outcome {
    let text = match (manifest, family) {
        (Some(path), _) => read_text(path)?,
        (None, Some(f)) => {
            let mut line = f.clone();
            for (k, v) in params {
                if let Some(v) = v {
                    line += &format!(" {k}={v}");
                }
            }
            line
        }
        (None, None) => {
            return Err(Failure::Input(
                "one of --manifest or --family is required".into(),
            ))
        }
    };
    let specs = parse_manifest(&text).map_err(|e| Failure::Input(e.to_string()))?;
    let summary = run_sweep(
        &specs,
        &SweepOptions {
            exact_limit,
            max_steps,
        },
    );
    match format {
        Format::Text => print!("{}", summary.to_text()),
        Format::Json => println!("{}", json(&summary)),
    }
    if summary.all_passed() {
        Ok(())
    } else {
        Err(Failure::Check)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Exact { src, exact_limit } => cmd_exact(src, *exact_limit),
        Command::Solve { src, search } => cmd_solve(src, search),
        Command::Verify {
            src,
            search,
            exact_limit,
        } => cmd_verify(src, search, *exact_limit),
        Command::Layer { src, search } => cmd_layer(src, search),
        Command::Trace { src, search } => cmd_trace(src, search),
        Command::Generate { spec } => cmd_generate(spec),
        Command::Sweep {
            manifest,
            family,
            n,
            delta,
            max_delta,
            m,
            seeds,
            exact_limit,
            max_steps,
            format,
        } => cmd_sweep(
            manifest,
            family,
            [
                ("n", n),
                ("delta", delta),
                ("Delta", max_delta),
                ("m", m),
                ("seeds", seeds),
            ],
            *exact_limit,
            *max_steps,
            *format,
        ),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            match &f {
                Failure::Check => eprintln!("pathpart: check failed"),
                Failure::Input(msg) => eprintln!("pathpart: input error: {msg}"),
                Failure::Generator(e) => eprintln!("pathpart: generator error: {e}"),
                Failure::Oversize(e) => eprintln!("pathpart: {e}"),
            }
            ExitCode::from(f.code())
        }
    }
}
