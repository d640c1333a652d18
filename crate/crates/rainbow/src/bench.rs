//! Wall-clock measurement of full generate-solve-verify rounds on complete
//! graphs, reported as simple percentiles in a machine-readable shape.
//!
//! This measures the production path end to end: seeded greedy coloring of
//! K_{2n}, the augmentation solve (traces off, the fast configuration), and
//! an independent rainbow re-verification of the returned factor. Reps use
//! consecutive derived seeds so runs are reproducible.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gen::{generate, GenSpec, GreedyStrategy};
use crate::model::Params;
use crate::rng::stream_seed;
use crate::solver::{solve, Outcome, SolveMethod, SolveOptions};

/// One benchmark campaign: `reps` rounds at a fixed graph size.
#[derive(Debug, Clone)]
pub struct BenchConfig {
    /// Half the vertex count of the complete graph (r = 2 only).
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
}

/// Timing for one round, all in milliseconds.
#[derive(Debug, Clone, Serialize)]
pub struct BenchSample {
    pub seed: u64,
    pub generate_ms: f64,
    pub solve_ms: f64,
    pub verify_ms: f64,
    pub total_ms: f64,
    pub augmentations: usize,
    pub rotation_routes: usize,
}

/// Merged timing report across all reps.
#[derive(Debug, Clone, Serialize)]
pub struct BenchReport {
    pub n: usize,
    pub vertex_count: usize,
    pub reps: usize,
    pub min_ms: f64,
    pub p50_ms: f64,
    pub p90_ms: f64,
    pub max_ms: f64,
    pub samples: Vec<BenchSample>,
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1_000.0
}

/// Times `reps` generate-solve-verify rounds on K_{2n}.
///
/// Every returned factor is re-verified against its coloring; a verification
/// failure aborts the run with a hard error rather than reporting a timing
/// for a wrong answer.
pub fn run_bench(config: &BenchConfig) -> Result<BenchReport> {
    if config.reps == 0 {
        return Err(Error::Precondition(
            "benchmark needs at least one rep".into(),
        ));
    }
    let params = Params::new(2, config.n)?;
    if params.n() < 3 {
        return Err(Error::Precondition(format!(
            "benchmark exercises the augmentation path, which needs n >= 3, got n = {}",
            params.n()
        )));
    }

    let options = SolveOptions {
        method: SolveMethod::Auto,
        record_traces: false,
    };
    let mut samples = Vec::with_capacity(config.reps);
    for rep in 0..config.reps {
        let seed = stream_seed(config.master_seed, rep as u64);

        let start = Instant::now();
        let coloring = generate(&GenSpec::RandomGreedy {
            r: 2,
            n: config.n,
            seed,
            strategy: GreedyStrategy::RandomFeasible,
        })?;
        let generate_ms = millis(start);

        let start = Instant::now();
        let solution = solve(&coloring, &options)?;
        let solve_ms = millis(start);

        let start = Instant::now();
        let Outcome::Found(factor) = &solution.outcome else {
            return Err(Error::GuaranteeViolated(format!(
                "benchmark round with seed {seed} did not produce a factor"
            )));
        };
        if !factor.is_rainbow_under(&coloring) {
            return Err(Error::GuaranteeViolated(format!(
                "benchmark round with seed {seed} produced a non-rainbow factor"
            )));
        }
        let verify_ms = millis(start);

        samples.push(BenchSample {
            seed,
            generate_ms,
            solve_ms,
            verify_ms,
            total_ms: generate_ms + solve_ms + verify_ms,
            augmentations: solution.augmentations,
            rotation_routes: solution.rotation_routes,
        });
    }

    let mut totals: Vec<f64> = samples.iter().map(|s| s.total_ms).collect();
    totals.sort_by(|a, b| a.partial_cmp(b).expect("timings are finite"));
    let pick = |q: f64| {
        let idx = ((totals.len() - 1) as f64 * q).round() as usize;
        totals[idx]
    };
    Ok(BenchReport {
        n: config.n,
        vertex_count: params.vertex_count(),
        reps: config.reps,
        min_ms: totals[0],
        p50_ms: pick(0.5),
        p90_ms: pick(0.9),
        max_ms: *totals.last().expect("at least one rep"),
        samples,
    })
}

// ==================================================================

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reports_cover_every_rep_with_ordered_percentiles() {
        let report = run_bench(&BenchConfig {
            n: 20,
            reps: 5,
            master_seed: 42,
        })
        .unwrap();
        assert_eq!(report.reps, 5);
        assert_eq!(report.samples.len(), 5);
        assert_eq!(report.vertex_count, 40);
        assert!(report.min_ms <= report.p50_ms);
        assert!(report.p50_ms <= report.p90_ms);
        assert!(report.p90_ms <= report.max_ms);
        for sample in &report.samples {
            assert!(sample.total_ms > 0.0);
        }
    }

    #[test]
    fn zero_reps_and_tiny_sizes_are_rejected() {
        let err = run_bench(&BenchConfig {
            n: 10,
            reps: 0,
            master_seed: 1,
        })
        .unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
        let err = run_bench(&BenchConfig {
            n: 2,
            reps: 1,
            master_seed: 1,
        })
        .unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }
}
