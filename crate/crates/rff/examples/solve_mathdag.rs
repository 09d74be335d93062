//! Solve a synthetic multi-step arithmetic problem with the accumulation
//! engine: backward steps name the next needed variable, forward steps
//! bind one fact each, and the run stops when the goal is established.
//!
//! ```bash
//! cargo run --example solve_mathdag
//! ```

use rff::core::EngineConfig;
use rff::engines::run_rff_g;
use rff::mathdag::{generate_problem, DagOracle, FactSet, MathTarget};

fn main() {
    let problem = generate_problem(7, 5, 3);
    println!("problem: {}", problem.surface_text.as_deref().unwrap_or(""));
    println!("goal chain depth: {}", problem.depth);

    let oracle = DagOracle::new(problem.clone());
    let cfg = EngineConfig::new(32, 4);
    let trace = run_rff_g(
        &oracle,
        FactSet::empty(),
        MathTarget::goal_of(&problem),
        &cfg,
    )
    .expect("config is valid");

    println!("outcome: {:?}", trace.outcome);
    println!("facts derived: {}", trace.visited_states);
    println!();
    for line in trace.serialize().lines() {
        println!("  {line}");
    }
}
