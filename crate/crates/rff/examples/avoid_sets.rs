//! How backtracking steers retries: condemned (state, target) attempts are
//! recorded per depth, consulted by the re-derivation, and cleared when
//! the search backtracks above them.
//!
//! ```bash
//! cargo run --example avoid_sets
//! ```

use rff::core::{EngineConfig, EventDetail, EventKind};
use rff::engines::run_rff_t;
use rff::game24::{rat, Game24Oracle, Game24State, Game24Target, NumberSet};

fn main() {
    // a puzzle whose first few attempts fail, so the trace shows the
    // avoid-set machinery at work
    let puzzle = NumberSet::parse("8 9 11 11").expect("valid puzzle");
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
    println!();
    for event in &trace.events {
        match (&event.kind, &event.detail) {
            (EventKind::Backtrack, EventDetail::Backtrack { to, state, target }) => {
                println!(
                    "backtrack to depth {to}: condemned numbers {state} toward target {target}"
                );
            }
            (EventKind::ForwardStep, EventDetail::Forward { state, avoid_len, .. }) => {
                println!(
                    "forward at depth {} -> {state} (steering around {avoid_len} avoided attempts)",
                    event.depth
                );
            }
            _ => {}
        }
    }
}
