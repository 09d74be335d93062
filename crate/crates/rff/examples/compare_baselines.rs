//! The same puzzle through three methods under one accounting rule: every
//! forward expansion is one visited state, so search costs compare like
//! for like.
//!
//! ```bash
//! cargo run --example compare_baselines
//! ```

use rff::baselines::{run_cot, run_forward_tree};
use rff::core::EngineConfig;
use rff::engines::run_rff_t;
use rff::game24::{rat, Game24Oracle, Game24State, Game24Target, NumberSet};

fn main() {
    let puzzle = NumberSet::parse("3 3 8 8").expect("valid puzzle");
    let cfg = EngineConfig::new(20, 13);
    println!("puzzle: {puzzle}   goal: 24");
    println!();

    let oracle = Game24Oracle::standard(cfg.width);
    let rff = run_rff_t(
        &oracle,
        Game24State::initial(puzzle.clone()),
        Game24Target::root(rat(24)),
        &cfg,
    )
    .expect("config is valid");

    let oracle = Game24Oracle::standard(cfg.width);
    let cot = run_cot(
        &oracle,
        Game24State::initial(puzzle.clone()),
        Game24Target::root(rat(24)),
        &cfg,
    )
    .expect("config is valid");

    let oracle = Game24Oracle::standard(cfg.width);
    let tree = run_forward_tree(
        &oracle,
        Game24State::initial(puzzle.clone()),
        Game24Target::root(rat(24)),
        &cfg,
        5,
    )
    .expect("config is valid");

    for (name, trace) in [("rff-t", rff), ("cot", cot), ("forward-tree(b=5)", tree)] {
        println!(
            "{name:<18} visited {:>4}   {:?}",
            trace.visited_states, trace.outcome
        );
    }
}
