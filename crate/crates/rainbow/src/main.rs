//! Command-line surface for the rainbow one-factor toolkit.
//!
//! Subcommands: `gen` writes proper colorings, `solve` searches them,
//! `verify` checks colorings and factors, `enumerate` counts one-factors
//! exhaustively, `fuzz` stress-tests the guarantees over seeded corpora, and
//! `bench` times the large-graph path.
//!
//! Exit codes, kept strict so scripts can branch on them:
//! - 0: success (factor found, artifact verified, clean fuzz run).
//! - 1: a verified negative or failed verification (absence proven, improper
//!   coloring or broken factor in `verify`, undecided searches).
//! - 2: usage, parse, or capacity errors.
//! - 3: a theorem contradiction (a guarantee the search machinery promises
//!   was violated; fuzz runs with any contradiction event).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use rainbow::bench::{run_bench, BenchConfig};
use rainbow::error::Error;
use rainbow::files::{read_coloring, read_factor, write_coloring, write_factor, write_traces, FactorFile};
use rainbow::fuzz::{run_fuzz, FuzzConfig, FuzzMode, FuzzSummary};
use rainbow::gen::{gen_fixture, generate, FixtureName, GenSpec, GreedyStrategy};
use rainbow::model::{verify_one_factor, Edge};
use rainbow::solver::{oracle_enumerate, solve, Outcome, SolveMethod, SolveOptions};
use rainbow::Result;

const SEED_ENV: &str = "RAINBOW_SEED";

#[derive(Parser)]
#[command(
    name = "rainbow",
    version,
    about = "Rainbow one-factors of properly edge-colored complete graphs and hypergraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a proper coloring and write it to a file.
    Gen(GenArgs),
    /// Search a coloring file for a rainbow one-factor.
    Solve(SolveArgs),
    /// Check that a coloring is proper, and optionally that a factor file is
    /// a rainbow one-factor of it.
    Verify(VerifyArgs),
    /// Enumerate every one-factor of a small instance and count rainbows.
    Enumerate(EnumerateArgs),
    /// Run many seeded generate-solve-verify rounds and report invariants.
    Fuzz(FuzzArgs),
    /// Time the large-graph generate-solve-verify path.
    Bench(BenchArgs),
}

// ==================================================================
// Flag vocabularies
// ==================================================================

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GenKind {
    /// Circle-method one-factorization of a complete graph (r = 2).
    RoundRobin,
    /// Backtracking one-factorization of a complete hypergraph.
    BacktrackFactorization,
    /// Seeded greedy proper coloring.
    RandomGreedy,
    /// A named fixed coloring.
    Fixture,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FixtureArg {
    /// K_4 colored so no two disjoint edges get distinct colors.
    #[value(name = "k4-no-rainbow-2k2")]
    K4NoRainbow2k2,
    /// The unique one-factorization of K_4 (same color pattern).
    #[value(name = "k4-factorization")]
    K4Factorization,
    /// Every edge its own color.
    #[value(name = "all-distinct")]
    AllDistinct,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum StrategyArg {
    /// Lowest feasible color id at each edge.
    LeastColor,
    /// Uniform draw among feasible colors plus one fresh color.
    RandomFeasible,
}

impl From<StrategyArg> for GreedyStrategy {
    fn from(value: StrategyArg) -> Self {
        match value {
            StrategyArg::LeastColor => GreedyStrategy::LeastColor,
            StrategyArg::RandomFeasible => GreedyStrategy::RandomFeasible,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum MethodArg {
    #[default]
    Auto,
    Augment,
    Exhaustive,
    K3r,
}

impl From<MethodArg> for SolveMethod {
    fn from(value: MethodArg) -> Self {
        match value {
            MethodArg::Auto => SolveMethod::Auto,
            MethodArg::Augment => SolveMethod::Augment,
            MethodArg::Exhaustive => SolveMethod::Exhaustive,
            MethodArg::K3r => SolveMethod::K3r,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
enum ModeArg {
    Greedy,
    Factorization,
    #[default]
    Mixed,
}

impl From<ModeArg> for FuzzMode {
    fn from(value: ModeArg) -> Self {
        match value {
            ModeArg::Greedy => FuzzMode::Greedy,
            ModeArg::Factorization => FuzzMode::Factorization,
            ModeArg::Mixed => FuzzMode::Mixed,
        }
    }
}

// ==================================================================
// Per-command arguments
// ==================================================================

#[derive(Args)]
struct GenArgs {
    #[arg(long, value_enum)]
    kind: GenKind,
    /// Edge size; defaults to 2 (graphs).
    #[arg(long)]
    r: Option<usize>,
    /// Number of edges in a one-factor (vertex count = r * n).
    #[arg(long)]
    n: Option<usize>,
    /// Seed for random-greedy; defaults to RAINBOW_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t = StrategyArg::RandomFeasible)]
    strategy: StrategyArg,
    /// Fixture name (kind = fixture only).
    #[arg(long, value_enum)]
    name: Option<FixtureArg>,
    /// Output path; .csv writes the compact form, anything else JSON.
    #[arg(long)]
    out: PathBuf,
    /// Overwrite an existing output file.
    #[arg(long)]
    force: bool,
}

#[derive(Args)]
struct SolveArgs {
    /// Coloring file to solve.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
    method: MethodArg,
    /// Where to write the factor file.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Record full per-pair search inventories and write them as JSON lines
    /// next to the output (or input) path.
    #[arg(long)]
    trace: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Coloring file to check.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Factor file to check against the coloring.
    #[arg(long)]
    factor: Option<PathBuf>,
}

#[derive(Args)]
struct EnumerateArgs {
    /// Coloring file to enumerate.
    #[arg(long = "in", value_name = "PATH")]
    input: PathBuf,
    /// Print the report as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct FuzzArgs {
    #[arg(long, default_value_t = 2)]
    r: usize,
    #[arg(long)]
    n: usize,
    /// Number of seeded instances.
    #[arg(long)]
    iters: usize,
    /// Master seed; defaults to RAINBOW_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Worker threads; the summary is identical for any value.
    #[arg(long, default_value_t = 4)]
    workers: usize,
    #[arg(long, value_enum, default_value_t = ModeArg::Mixed)]
    mode: ModeArg,
    /// Directory for evidence files when a guarantee is contradicted.
    #[arg(long)]
    artifacts: Option<PathBuf>,
    /// Print the summary as JSON.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct BenchArgs {
    /// Half the vertex count; the graph is K_{2n}.
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    reps: usize,
    /// Master seed; defaults to RAINBOW_SEED, then 0.
    #[arg(long)]
    seed: Option<u64>,
    /// Also write the JSON report to a file.
    #[arg(long)]
    out: Option<PathBuf>,
}

// ==================================================================
// Entry
// ==================================================================

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::GuaranteeViolated(_) => 3,
                _ => 2,
            }
        }
    };
    ExitCode::from(code)
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Gen(args) => cmd_gen(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Verify(args) => cmd_verify(args),
        Command::Enumerate(args) => cmd_enumerate(args),
        Command::Fuzz(args) => cmd_fuzz(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

fn usage(message: String) -> Error {
    Error::Precondition(message)
}

/// Explicit flag, then the RAINBOW_SEED environment variable, then 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var(SEED_ENV) {
        Ok(text) => text.trim().parse().map_err(|_| {
            usage(format!("{SEED_ENV} must be an unsigned 64-bit integer, got {text:?}"))
        }),
        Err(_) => Ok(0),
    }
}

fn require_n(n: Option<usize>, kind: &str) -> Result<usize> {
    n.ok_or_else(|| usage(format!("--n is required for kind {kind}")))
}

// ==================================================================
// gen
// ==================================================================

fn cmd_gen(args: GenArgs) -> Result<u8> {
    let r = args.r.unwrap_or(2);
    let mut expectation = None;
    let spec = match args.kind {
        GenKind::RoundRobin => {
            if r != 2 {
                return Err(usage(format!(
                    "round-robin colorings exist only for r = 2, got r = {r}"
                )));
            }
            GenSpec::RoundRobin {
                n: require_n(args.n, "round-robin")?,
            }
        }
        GenKind::BacktrackFactorization => GenSpec::BacktrackFactorization {
            r,
            n: require_n(args.n, "backtrack-factorization")?,
        },
        GenKind::RandomGreedy => GenSpec::RandomGreedy {
            r,
            n: require_n(args.n, "random-greedy")?,
            seed: resolve_seed(args.seed)?,
            strategy: args.strategy.into(),
        },
        GenKind::Fixture => {
            let name = args
                .name
                .ok_or_else(|| usage("--name is required for kind fixture".into()))?;
            let fixture_name = match name {
                FixtureArg::K4NoRainbow2k2 | FixtureArg::K4Factorization => {
                    if args.r.is_some_and(|r| r != 2) || args.n.is_some_and(|n| n != 2) {
                        return Err(usage(
                            "the K_4 fixtures pin r = 2 and n = 2; drop --r/--n or pass those \
                             values"
                                .into(),
                        ));
                    }
                    if name == FixtureArg::K4NoRainbow2k2 {
                        FixtureName::K4NoRainbowPair
                    } else {
                        FixtureName::K4Factorization
                    }
                }
                FixtureArg::AllDistinct => FixtureName::AllDistinct {
                    r,
                    n: require_n(args.n, "fixture all-distinct")?,
                },
            };
            let fixture = gen_fixture(&fixture_name)?;
            expectation = fixture.expected_rainbow_factor;
            GenSpec::Fixture { name: fixture_name }
        }
    };

    let coloring = generate(&spec)?;
    if args.out.exists() && !args.force {
        return Err(usage(format!(
            "refusing to overwrite {}; pass --force to replace it",
            args.out.display()
        )));
    }
    write_coloring(&args.out, &coloring)?;
    let params = coloring.params();
    println!(
        "wrote {} (r = {}, n = {}, {} colors)",
        args.out.display(),
        params.r(),
        params.n(),
        coloring.color_count()
    );
    if let Some(expected) = expectation {
        println!("expected rainbow one-factor: {expected}");
    }
    Ok(0)
}

// ==================================================================
// solve
// ==================================================================

fn cmd_solve(args: SolveArgs) -> Result<u8> {
    let coloring = read_coloring(&args.input)?;
    let options = SolveOptions {
        method: args.method.into(),
        record_traces: args.trace,
    };
    let solution = solve(&coloring, &options)?;

    if args.trace {
        let trace_path = args
            .out
            .as_deref()
            .unwrap_or(&args.input)
            .with_extension("traces.jsonl");
        write_traces(&trace_path, &solution.traces)?;
        println!(
            "wrote {} trace(s) to {}",
            solution.traces.len(),
            trace_path.display()
        );
    }

    match &solution.outcome {
        Outcome::Found(factor) => {
            let mode = solution.certificate.as_ref().map(|c| c.mode);
            let file =
                FactorFile::from_factor(&coloring, factor, mode, solution.certificate.clone());
            println!("rainbow one-factor found (method {})", solution.method);
            match &args.out {
                Some(path) => {
                    write_factor(path, &file)?;
                    println!("wrote {}", path.display());
                }
                None => {
                    println!(
                        "factor: {} colors: {}",
                        serde_json::to_string(&file.edges).expect("edges serialize"),
                        serde_json::to_string(&file.colors).expect("colors serialize")
                    );
                }
            }
            if solution.augmentations > 0 {
                println!(
                    "augmentations: {} (rotation routes: {})",
                    solution.augmentations, solution.rotation_routes
                );
            }
            if let Some(mode) = mode {
                println!("certificate mode: {mode:?}");
            }
            if solution.exhausted_events > 0 {
                // A factor emerged from the sweep, but the pair search ran
                // dry where the counting argument says it cannot: report the
                // contradiction loudly and use its exit code.
                eprintln!(
                    "theorem contradiction: the pair search was exhausted {} time(s) before \
                     the fallback sweep found a factor",
                    solution.exhausted_events
                );
                return Ok(3);
            }
            Ok(0)
        }
        Outcome::AbsentVerified { total_factors } => {
            println!("0 of {total_factors} factors rainbow");
            Ok(1)
        }
        Outcome::Undecided { reason } => {
            println!("undecided: {reason}");
            Ok(1)
        }
    }
}

// ==================================================================
// verify
// ==================================================================

fn cmd_verify(args: VerifyArgs) -> Result<u8> {
    let coloring = match read_coloring(&args.input) {
        Ok(coloring) => coloring,
        Err(Error::NotProper(w)) => {
            println!(
                "improper coloring: edges #{} and #{} share vertex {} with color {}",
                w.first_rank, w.second_rank, w.vertex, w.color
            );
            return Ok(1);
        }
        Err(other) => return Err(other),
    };
    let params = coloring.params();

    let Some(factor_path) = &args.factor else {
        println!(
            "proper coloring: r = {}, n = {}, {} colors",
            params.r(),
            params.n(),
            coloring.color_count()
        );
        return Ok(0);
    };

    let file = read_factor(factor_path)?;
    if file.r != params.r() || file.n != params.n() {
        println!(
            "factor is for r = {}, n = {} but the coloring has r = {}, n = {}",
            file.r,
            file.n,
            params.r(),
            params.n()
        );
        return Ok(1);
    }
    if file.edges.len() != params.n() || file.colors.len() != file.edges.len() {
        return Err(Error::Parse {
            path: factor_path.display().to_string(),
            message: format!(
                "expected {} edges with parallel colors, found {} edges and {} colors",
                params.n(),
                file.edges.len(),
                file.colors.len()
            ),
        });
    }
    let edges = file
        .edges
        .iter()
        .map(|e| Edge::new(&params, e.vertices().to_vec()))
        .collect::<Result<Vec<_>>>()
        .map_err(|e| Error::Parse {
            path: factor_path.display().to_string(),
            message: e.to_string(),
        })?;

    if let Some(defect) = one_factor_defect(params.vertex_count(), &edges) {
        println!("not a one-factor: {defect}");
        return Ok(1);
    }
    debug_assert!(verify_one_factor(&params, &edges));

    for (i, edge) in edges.iter().enumerate() {
        let actual = coloring.color_of(edge);
        if actual != file.colors[i] {
            println!(
                "declared color {} on edge {:?} but the coloring gives {}",
                file.colors[i],
                edge.vertices(),
                actual
            );
            return Ok(1);
        }
    }
    for i in 0..edges.len() {
        for j in i + 1..edges.len() {
            if file.colors[i] == file.colors[j] {
                println!(
                    "not rainbow: edges {:?} and {:?} share color {}",
                    edges[i].vertices(),
                    edges[j].vertices(),
                    file.colors[i]
                );
                return Ok(1);
            }
        }
    }
    println!(
        "rainbow one-factor verified: {} edges, {} distinct colors",
        edges.len(),
        edges.len()
    );
    Ok(0)
}

/// First coverage defect of an edge set claimed to be a one-factor, if any.
fn one_factor_defect(vertex_count: usize, edges: &[Edge]) -> Option<String> {
    let mut covered = vec![0usize; vertex_count];
    for edge in edges {
        for &v in edge.vertices() {
            covered[v] += 1;
        }
    }
    covered.iter().enumerate().find_map(|(v, &count)| match count {
        1 => None,
        0 => Some(format!("vertex {v} is uncovered")),
        _ => Some(format!("vertex {v} is covered {count} times")),
    })
}

// ==================================================================
// enumerate
// ==================================================================

fn cmd_enumerate(args: EnumerateArgs) -> Result<u8> {
    let coloring = read_coloring(&args.input)?;
    let report = oracle_enumerate(&coloring)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&report).expect("reports serialize")
        );
    } else {
        println!("one-factors: {}", report.total_factors);
        println!("rainbow factors: {}", report.rainbow_factors);
        if let Some(factor) = &report.witness {
            println!(
                "first rainbow factor: {}",
                serde_json::to_string(factor.edges()).expect("edges serialize")
            );
        }
    }
    Ok(0)
}

// ==================================================================
// fuzz
// ==================================================================

fn cmd_fuzz(args: FuzzArgs) -> Result<u8> {
    let config = FuzzConfig {
        r: args.r,
        n: args.n,
        iters: args.iters,
        master_seed: resolve_seed(args.seed)?,
        workers: args.workers,
        mode: args.mode.into(),
        artifact_dir: args.artifacts.clone(),
    };
    let summary = run_fuzz(&config)?;
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&summary).expect("summaries serialize")
        );
    } else {
        print_fuzz_summary(&summary);
    }
    if summary.contradiction_total() > 0 {
        if args.artifacts.is_none() {
            eprintln!("note: rerun with --artifacts DIR to capture evidence files");
        }
        return Ok(3);
    }
    if summary.undecided > 0 {
        return Ok(1);
    }
    Ok(0)
}

fn print_fuzz_summary(summary: &FuzzSummary) {
    println!(
        "instances: {} (greedy {}, factorization {}) at r = {}, n = {}",
        summary.instances,
        summary.greedy_instances,
        summary.factorization_instances,
        summary.r,
        summary.n
    );
    println!(
        "successes: {}  expected-negative: {}  undecided: {}",
        summary.found, summary.expected_negative, summary.undecided
    );
    println!(
        "augmentations: {} (rotation routes: {})",
        summary.augmentations, summary.rotation_routes
    );
    println!(
        "exhausted-count: {}  graph-fallbacks: {}  generic-fallbacks: {}",
        summary.exhausted_events, summary.graph_fallbacks, summary.generic_fallbacks
    );
    println!(
        "oracle-checked: {}  oracle disagreements: {}",
        summary.oracle_checked, summary.oracle_disagreements
    );
    println!(
        "traces audited: {}  trace-invariant violations: {}",
        summary.traces_audited, summary.trace_violations
    );
    println!("contradictions: {}", summary.contradictions);
    let k3r_total = summary.k3r_all_distinct + summary.k3r_direct + summary.k3r_fallback;
    if k3r_total > 0 {
        println!(
            "construction modes: all-distinct {}, direct {}, fallback {}",
            summary.k3r_all_distinct, summary.k3r_direct, summary.k3r_fallback
        );
    }
    for artifact in &summary.artifacts {
        println!("evidence: {artifact}");
    }
}

// ==================================================================
// bench
// ==================================================================

fn cmd_bench(args: BenchArgs) -> Result<u8> {
    let config = BenchConfig {
        n: args.n,
        reps: args.reps,
        master_seed: resolve_seed(args.seed)?,
    };
    let report = run_bench(&config)?;
    let body = serde_json::to_string_pretty(&report).expect("reports serialize");
    println!("{body}");
    if let Some(path) = &args.out {
        std::fs::write(path, format!("{body}\n")).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })?;
        eprintln!("wrote {}", path.display());
    }
    Ok(0)
}
