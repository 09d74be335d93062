//! Solve one Game of 24 puzzle with the tree-search engine and walk
//! through the trace it leaves behind.
//!
//! ```bash
//! cargo run --example solve_game24
//! ```

use rff::core::EngineConfig;
use rff::engines::run_rff_t;
use rff::game24::{rat, Game24Oracle, Game24State, Game24Target, NumberSet};

fn main() {
    let puzzle = NumberSet::parse("1 2 12 12").expect("valid puzzle");
    let cfg = EngineConfig::new(20, 13);
    let oracle = Game24Oracle::standard(cfg.width);

    let trace = run_rff_t(
        &oracle,
        Game24State::initial(puzzle.clone()),
        Game24Target::root(rat(24)),
        &cfg,
    )
    .expect("config is valid");

    println!("puzzle: {puzzle}");
    println!("outcome: {:?}", trace.outcome);
    println!("visited states: {}", trace.visited_states);
    println!();
    println!("event log:");
    for line in trace.serialize().lines() {
        println!("  {line}");
    }
}
