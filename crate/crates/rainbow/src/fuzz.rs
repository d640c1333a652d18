//! Seeded stress harness: many generate-solve-verify rounds, a deterministic
//! summary, and evidence files for anything that contradicts the guarantees.
//!
//! Each instance index derives its own seed from the master seed, so a run is
//! reproducible instance by instance and the merged summary is identical for
//! any worker count. Greedy instances come from the seeded greedy generator;
//! factorization instances are seeded vertex relabelings of one cached
//! factorization (relabeling preserves properness and the color-class
//! structure while changing everything the solver's scan order sees).
//!
//! Every solve runs with trace recording on. Traces are audited and dropped;
//! instances with at most [`ORACLE_VERTEX_CAP`] vertices are cross-checked
//! against exhaustive enumeration. Four counters must stay zero on shapes
//! where a rainbow one-factor is guaranteed: pair-search exhaustions, graph
//! sweep fallbacks, oracle disagreements, and trace audit violations. When
//! one fires and an artifact directory is configured, the harness writes the
//! offending coloring, its traces, and a note sufficient to replay it.

use std::path::PathBuf;
use std::thread;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::files::{write_coloring, write_traces};
use crate::gen::{generate, GenSpec, GreedyStrategy};
use crate::model::{Params, ProperColoring};
use crate::rng::{stream_seed, Rng};
use crate::solver::{
    oracle_enumerate, solve, K3rMode, Outcome, SolveMethod, SolveOptions, Solution,
    ORACLE_VERTEX_CAP,
};
use crate::trace::audit_trace;

// ==================================================================
// Configuration
// ==================================================================

/// How fuzz instances are produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FuzzMode {
    /// Seeded greedy colorings only.
    Greedy,
    /// Seeded relabelings of one factorization only.
    Factorization,
    /// Alternate between the two by instance parity.
    #[default]
    Mixed,
}

/// One fuzz campaign over a single instance shape.
#[derive(Debug, Clone)]
pub struct FuzzConfig {
    pub r: usize,
    pub n: usize,
    pub iters: usize,
    pub master_seed: u64,
    /// Worker threads; clamped to at least 1 and at most `iters`.
    pub workers: usize,
    pub mode: FuzzMode,
    /// Where to write evidence when a guarantee is contradicted. `None`
    /// keeps the counters but skips the files.
    pub artifact_dir: Option<PathBuf>,
}

// ==================================================================
// Summary
// ==================================================================

/// Merged counters for a fuzz run. Additive across workers, so the totals
/// are independent of the worker count.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct FuzzSummary {
    pub r: usize,
    pub n: usize,
    pub instances: usize,
    pub greedy_instances: usize,
    pub factorization_instances: usize,
    /// Instances with a verified rainbow one-factor.
    pub found: usize,
    /// Verified-absent outcomes on shapes with no existence guarantee.
    pub expected_negative: usize,
    /// Instances the solver could not decide either way.
    pub undecided: usize,
    pub augmentations: usize,
    pub rotation_routes: usize,
    /// Pair searches that came up empty on a maximal matching. Must be 0.
    pub exhausted_events: usize,
    /// Augmentation runs rescued by the bounded one-factor sweep. Must be 0.
    pub graph_fallbacks: usize,
    /// Local-search runs settled by enumeration. Legitimate; informational.
    pub generic_fallbacks: usize,
    pub k3r_all_distinct: usize,
    pub k3r_direct: usize,
    pub k3r_fallback: usize,
    /// Instances small enough for the enumeration cross-check.
    pub oracle_checked: usize,
    /// Existence answers that differ from enumeration. Must be 0.
    pub oracle_disagreements: usize,
    pub traces_audited: usize,
    /// Traces failing at least one counting audit. Must be 0.
    pub trace_violations: usize,
    /// Hard guarantee violations reported by the solver, plus any failed
    /// re-verification of a returned factor. Must be 0.
    pub contradictions: usize,
    /// Evidence files written, in instance order.
    pub artifacts: Vec<String>,
}

impl FuzzSummary {
    /// Total events that contradict a proven guarantee.
    pub fn contradiction_total(&self) -> usize {
        self.exhausted_events
            + self.graph_fallbacks
            + self.oracle_disagreements
            + self.trace_violations
            + self.contradictions
    }

    /// True when nothing contradicted a guarantee and nothing was left
    /// undecided.
    pub fn is_clean(&self) -> bool {
        self.contradiction_total() == 0 && self.undecided == 0
    }

    fn absorb(&mut self, other: FuzzSummary) {
        self.instances += other.instances;
        self.greedy_instances += other.greedy_instances;
        self.factorization_instances += other.factorization_instances;
        self.found += other.found;
        self.expected_negative += other.expected_negative;
        self.undecided += other.undecided;
        self.augmentations += other.augmentations;
        self.rotation_routes += other.rotation_routes;
        self.exhausted_events += other.exhausted_events;
        self.graph_fallbacks += other.graph_fallbacks;
        self.generic_fallbacks += other.generic_fallbacks;
        self.k3r_all_distinct += other.k3r_all_distinct;
        self.k3r_direct += other.k3r_direct;
        self.k3r_fallback += other.k3r_fallback;
        self.oracle_checked += other.oracle_checked;
        self.oracle_disagreements += other.oracle_disagreements;
        self.traces_audited += other.traces_audited;
        self.trace_violations += other.trace_violations;
        self.contradictions += other.contradictions;
    }
}

// ==================================================================
// Campaign driver
// ==================================================================

/// Runs a fuzz campaign and merges the per-worker tallies.
///
/// Instance `i` is always processed with seed `stream_seed(master_seed, i)`
/// by worker `i % workers`, so identical configurations produce identical
/// summaries for every worker count.
pub fn run_fuzz(config: &FuzzConfig) -> Result<FuzzSummary> {
    let params = Params::new(config.r, config.n)?;
    if let Some(dir) = &config.artifact_dir {
        std::fs::create_dir_all(dir).map_err(|source| Error::Io {
            path: dir.display().to_string(),
            source,
        })?;
    }
    let base = match config.mode {
        FuzzMode::Greedy => None,
        FuzzMode::Factorization | FuzzMode::Mixed => Some(base_factorization(&params)?),
    };
    let workers = config.workers.clamp(1, config.iters.max(1));

    let mut tallies: Vec<WorkerTally> = Vec::with_capacity(workers);
    thread::scope(|scope| -> Result<()> {
        let base = base.as_ref();
        let mut handles = Vec::with_capacity(workers);
        for worker in 0..workers {
            handles.push(scope.spawn(move || -> Result<WorkerTally> {
                let mut tally = WorkerTally::default();
                let mut index = worker;
                while index < config.iters {
                    run_instance(config, params, base, index, &mut tally)?;
                    index += workers;
                }
                Ok(tally)
            }));
        }
        for handle in handles {
            let tally = handle.join().expect("fuzz worker panicked")?;
            tallies.push(tally);
        }
        Ok(())
    })?;

    let mut summary = FuzzSummary {
        r: config.r,
        n: config.n,
        ..FuzzSummary::default()
    };
    let mut artifacts: Vec<(usize, String)> = Vec::new();
    for tally in tallies {
        summary.absorb(tally.summary);
        artifacts.extend(tally.artifacts);
    }
    artifacts.sort();
    summary.artifacts = artifacts.into_iter().map(|(_, path)| path).collect();
    Ok(summary)
}

/// The deterministic factorization every relabeled instance starts from.
fn base_factorization(params: &Params) -> Result<ProperColoring> {
    let spec = if params.r() == 2 {
        GenSpec::RoundRobin { n: params.n() }
    } else {
        GenSpec::BacktrackFactorization {
            r: params.r(),
            n: params.n(),
        }
    };
    generate(&spec)
}

#[derive(Default)]
struct WorkerTally {
    summary: FuzzSummary,
    artifacts: Vec<(usize, String)>,
}

// ==================================================================
// One instance
// ==================================================================

fn run_instance(
    config: &FuzzConfig,
    params: Params,
    base: Option<&ProperColoring>,
    index: usize,
    tally: &mut WorkerTally,
) -> Result<()> {
    let seed = stream_seed(config.master_seed, index as u64);
    let use_factorization = match config.mode {
        FuzzMode::Greedy => false,
        FuzzMode::Factorization => true,
        FuzzMode::Mixed => index % 2 == 1,
    };

    let coloring = if use_factorization {
        tally.summary.factorization_instances += 1;
        let base = base.expect("factorization modes cache a base coloring");
        let mut rng = Rng::new(seed);
        let mut perm: Vec<usize> = (0..params.vertex_count()).collect();
        rng.shuffle(&mut perm);
        base.permuted(&perm)?
    } else {
        tally.summary.greedy_instances += 1;
        let strategy = if seed & 1 == 0 {
            GreedyStrategy::LeastColor
        } else {
            GreedyStrategy::RandomFeasible
        };
        generate(&GenSpec::RandomGreedy {
            r: params.r(),
            n: params.n(),
            seed,
            strategy,
        })?
    };

    tally.summary.instances += 1;
    let options = SolveOptions {
        method: SolveMethod::Auto,
        record_traces: true,
    };
    match solve(&coloring, &options) {
        Ok(solution) => record_solution(config, &coloring, index, seed, solution, tally),
        Err(Error::GuaranteeViolated(message)) => {
            tally.summary.contradictions += 1;
            write_artifact(
                config,
                index,
                "contradiction",
                &coloring,
                &[],
                &format!("seed {seed}\nsolver reported: {message}"),
                tally,
            )
        }
        Err(other) => Err(other),
    }
}

fn record_solution(
    config: &FuzzConfig,
    coloring: &ProperColoring,
    index: usize,
    seed: u64,
    solution: Solution,
    tally: &mut WorkerTally,
) -> Result<()> {
    let params = coloring.params();
    let theorem_scope = (params.r() == 2 && params.n() >= 3) || params.n() == 3;

    tally.summary.augmentations += solution.augmentations;
    tally.summary.rotation_routes += solution.rotation_routes;
    tally.summary.exhausted_events += solution.exhausted_events;
    if solution.used_exhaustive_fallback {
        if solution.method == "augment" {
            tally.summary.graph_fallbacks += 1;
        } else {
            tally.summary.generic_fallbacks += 1;
        }
    }
    match solution.certificate.as_ref().map(|c| &c.mode) {
        Some(K3rMode::AllIndependentDistinct) => tally.summary.k3r_all_distinct += 1,
        Some(K3rMode::DirectTriple) => tally.summary.k3r_direct += 1,
        Some(K3rMode::FallbackTriple) => tally.summary.k3r_fallback += 1,
        None => {}
    }

    let mut audit_report = String::new();
    let mut violating = 0usize;
    for trace in &solution.traces {
        tally.summary.traces_audited += 1;
        let violations = audit_trace(trace);
        if !violations.is_empty() {
            violating += 1;
            audit_report.push_str(&format!(
                "pair (s={}, t={}) at k={}:\n",
                trace.s, trace.t, trace.k
            ));
            for v in violations {
                audit_report.push_str(&format!("  {v}\n"));
            }
        }
    }
    tally.summary.trace_violations += violating;

    match &solution.outcome {
        Outcome::Found(factor) => {
            if factor.is_rainbow_under(coloring) {
                tally.summary.found += 1;
            } else {
                // The solver re-verifies before returning, so reaching this
                // arm means internal state went inconsistent; treat it as a
                // hard contradiction with evidence.
                tally.summary.contradictions += 1;
                write_artifact(
                    config,
                    index,
                    "contradiction",
                    coloring,
                    &solution.traces,
                    &format!("seed {seed}\nreturned factor is not rainbow on re-verification"),
                    tally,
                )?;
            }
        }
        Outcome::AbsentVerified { total_factors } => {
            if theorem_scope {
                tally.summary.contradictions += 1;
                write_artifact(
                    config,
                    index,
                    "contradiction",
                    coloring,
                    &solution.traces,
                    &format!(
                        "seed {seed}\nverified absence over {total_factors} one-factors on a \
                         shape where existence is guaranteed"
                    ),
                    tally,
                )?;
            } else {
                tally.summary.expected_negative += 1;
            }
        }
        Outcome::Undecided { .. } => tally.summary.undecided += 1,
    }

    if solution.exhausted_events > 0 || (solution.used_exhaustive_fallback && theorem_scope) {
        write_artifact(
            config,
            index,
            "exhausted",
            coloring,
            &solution.traces,
            &format!(
                "seed {seed}\npair search exhausted {} time(s); sweep fallback used: {}",
                solution.exhausted_events, solution.used_exhaustive_fallback
            ),
            tally,
        )?;
    }
    if violating > 0 {
        write_artifact(
            config,
            index,
            "trace-violation",
            coloring,
            &solution.traces,
            &format!("seed {seed}\n{audit_report}"),
            tally,
        )?;
    }

    if params.vertex_count() <= ORACLE_VERTEX_CAP {
        cross_check(config, coloring, index, seed, &solution, tally)?;
    }
    Ok(())
}

fn cross_check(
    config: &FuzzConfig,
    coloring: &ProperColoring,
    index: usize,
    seed: u64,
    solution: &Solution,
    tally: &mut WorkerTally,
) -> Result<()> {
    let report = oracle_enumerate(coloring)?;
    let disagreement = match &solution.outcome {
        Outcome::Found(_) => (report.rainbow_factors == 0).then(|| {
            format!(
                "solver found a factor but enumeration sees 0 rainbow factors among {}",
                report.total_factors
            )
        }),
        Outcome::AbsentVerified { total_factors } => {
            if report.rainbow_factors != 0 {
                Some(format!(
                    "solver verified absence but enumeration sees {} rainbow factors",
                    report.rainbow_factors
                ))
            } else if *total_factors != report.total_factors {
                Some(format!(
                    "absence verified over {total_factors} one-factors but enumeration \
                     visits {}",
                    report.total_factors
                ))
            } else {
                None
            }
        }
        // An undecided answer makes no existence claim to disagree with,
        // and cannot occur at enumerable sizes anyway.
        Outcome::Undecided { .. } => None,
    };
    tally.summary.oracle_checked += 1;
    if let Some(reason) = disagreement {
        tally.summary.oracle_disagreements += 1;
        write_artifact(
            config,
            index,
            "oracle-disagreement",
            coloring,
            &solution.traces,
            &format!("seed {seed}\n{reason}"),
            tally,
        )?;
    }
    Ok(())
}

// ==================================================================
// Evidence files
// ==================================================================

fn write_artifact(
    config: &FuzzConfig,
    index: usize,
    kind: &str,
    coloring: &ProperColoring,
    traces: &[crate::trace::AugmentationTrace],
    note: &str,
    tally: &mut WorkerTally,
) -> Result<()> {
    let Some(dir) = &config.artifact_dir else {
        return Ok(());
    };
    let stem = format!("fuzz-{index:06}-{kind}");
    let coloring_path = dir.join(format!("{stem}.coloring.json"));
    write_coloring(&coloring_path, coloring)?;
    if !traces.is_empty() {
        write_traces(&dir.join(format!("{stem}.traces.jsonl")), traces)?;
    }
    let note_path = dir.join(format!("{stem}.note.txt"));
    let body = format!(
        "kind: {kind}\ninstance: {index}\nr: {}\nn: {}\n{note}\n",
        config.r, config.n
    );
    std::fs::write(&note_path, body).map_err(|source| Error::Io {
        path: note_path.display().to_string(),
        source,
    })?;
    tally
        .artifacts
        .push((index, coloring_path.display().to_string()));
    Ok(())
}

// ==================================================================

#[cfg(test)]
mod tests {
    use super::*;
    use std::path::Path;

    fn config(r: usize, n: usize, iters: usize, seed: u64, workers: usize) -> FuzzConfig {
        FuzzConfig {
            r,
            n,
            iters,
            master_seed: seed,
            workers,
            mode: FuzzMode::Mixed,
            artifact_dir: None,
        }
    }

    #[test]
    fn summaries_are_identical_across_worker_counts() {
        let one = run_fuzz(&config(2, 5, 40, 42, 1)).unwrap();
        let three = run_fuzz(&config(2, 5, 40, 42, 3)).unwrap();
        let many = run_fuzz(&config(2, 5, 40, 42, 64)).unwrap();
        assert_eq!(one, three);
        assert_eq!(one, many);
        assert_eq!(one.instances, 40);
        assert_eq!(one.greedy_instances, 20);
        assert_eq!(one.factorization_instances, 20);
        assert_eq!(one.found, 40);
        assert_eq!(one.exhausted_events, 0);
        assert_eq!(one.graph_fallbacks, 0);
        assert!(one.traces_audited > 0, "maximal-stall pairs should record traces");
        assert!(one.is_clean());
    }

    #[test]
    fn enumerable_instances_are_cross_checked() {
        let summary = run_fuzz(&config(2, 3, 30, 7, 4)).unwrap();
        assert_eq!(summary.oracle_checked, 30);
        assert_eq!(summary.oracle_disagreements, 0);
        assert_eq!(summary.found, 30);
        assert!(summary.is_clean());
    }

    #[test]
    fn unguaranteed_boundary_shapes_report_expected_negatives() {
        let mut cfg = config(2, 2, 20, 7, 2);
        cfg.mode = FuzzMode::Greedy;
        let summary = run_fuzz(&cfg).unwrap();
        assert_eq!(summary.found + summary.expected_negative, 20);
        assert!(
            summary.expected_negative > 0,
            "least-color greedy colorings of K_4 use three colors and block every factor"
        );
        assert_eq!(summary.undecided, 0);
        assert_eq!(summary.contradiction_total(), 0);
    }

    #[test]
    fn construction_certificates_are_tallied() {
        let summary = run_fuzz(&config(3, 3, 24, 11, 3)).unwrap();
        assert_eq!(summary.found, 24);
        assert_eq!(
            summary.k3r_all_distinct + summary.k3r_direct + summary.k3r_fallback,
            24
        );
        assert_eq!(summary.oracle_checked, 24);
        assert!(summary.is_clean());
    }

    #[test]
    fn artifact_files_carry_the_replay_seed() {
        let dir = std::env::temp_dir().join(format!(
            "rainbow-fuzz-artifact-{}",
            std::process::id()
        ));
        std::fs::create_dir_all(&dir).unwrap();
        let cfg = FuzzConfig {
            artifact_dir: Some(dir.clone()),
            ..config(2, 5, 1, 3, 1)
        };
        let coloring = generate(&GenSpec::RandomGreedy {
            r: 2,
            n: 5,
            seed: 99,
            strategy: GreedyStrategy::LeastColor,
        })
        .unwrap();
        let mut tally = WorkerTally::default();
        write_artifact(&cfg, 17, "exhausted", &coloring, &[], "seed 99\nsynthetic", &mut tally)
            .unwrap();
        assert_eq!(tally.artifacts.len(), 1);
        let reread = crate::files::read_coloring(Path::new(&tally.artifacts[0].1)).unwrap();
        assert_eq!(reread.colors(), coloring.colors());
        let note = std::fs::read_to_string(dir.join("fuzz-000017-exhausted.note.txt")).unwrap();
        assert!(note.contains("kind: exhausted"));
        assert!(note.contains("seed 99"));
        std::fs::remove_dir_all(&dir).unwrap();
    }

    #[test]
    fn clean_runs_write_no_artifacts() {
        let dir = std::env::temp_dir().join(format!(
            "rainbow-fuzz-clean-{}",
            std::process::id()
        ));
        let cfg = FuzzConfig {
            artifact_dir: Some(dir.clone()),
            ..config(2, 4, 10, 5, 2)
        };
        let summary = run_fuzz(&cfg).unwrap();
        assert!(summary.is_clean());
        assert!(summary.artifacts.is_empty());
        assert_eq!(std::fs::read_dir(&dir).unwrap().count(), 0);
        std::fs::remove_dir_all(&dir).unwrap();
    }
}
