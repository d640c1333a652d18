//! Generates a random proper edge coloring of K_10, finds a rainbow one
//! factor, and checks it back against the coloring.
//!
//! Run with `cargo run --example round_trip`.

use rainbow::gen::{gen_random_greedy, GreedyStrategy};
use rainbow::model::Params;
use rainbow::solver::{solve, Outcome, SolveMethod, SolveOptions};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = Params::new(2, 5)?;
    let coloring = gen_random_greedy(&params, 2026, GreedyStrategy::RandomFeasible)?;
    println!(
        "colored K_{} with {} colors",
        params.vertex_count(),
        coloring.color_count()
    );

    let options = SolveOptions { method: SolveMethod::Auto, record_traces: true };
    let solution = solve(&coloring, &options)?;
    match &solution.outcome {
        Outcome::Found(factor) => {
            assert!(factor.is_rainbow_under(&coloring));
            println!("rainbow one factor after {} augmentations:", solution.augmentations);
            for edge in factor.edges() {
                println!("  {:?} color {}", edge.vertices(), coloring.color_of(edge));
            }
        }
        Outcome::AbsentVerified { total_factors } => {
            println!("no rainbow one factor among {total_factors} candidates");
        }
        Outcome::Undecided { reason } => println!("undecided: {reason}"),
    }
    Ok(())
}
