//! Traces are replayable artifacts: serialization is byte-stable for a
//! fixed seed and deterministic adapter, and parses back to the same
//! structure.
//!
//! ```bash
//! cargo run --example trace_replay
//! ```

use rff::core::{EngineConfig, SearchTrace};
use rff::engines::run_rff_t;
use rff::game24::{rat, Game24Oracle, Game24State, Game24Target, NumberSet};

fn run_once() -> SearchTrace {
    let cfg = EngineConfig::new(20, 13).with_seed(7);
    let oracle = Game24Oracle::standard(cfg.width);
    run_rff_t(
        &oracle,
        Game24State::initial(NumberSet::parse("2 3 8 13").expect("valid puzzle")),
        Game24Target::root(rat(24)),
        &cfg,
    )
    .expect("config is valid")
}

fn main() {
    let first = run_once().serialize();
    let second = run_once().serialize();
    assert_eq!(first, second, "two runs serialize byte-identically");

    let parsed = SearchTrace::parse(&first).expect("own output parses");
    assert_eq!(parsed.serialize(), first, "parse then serialize round-trips");

    println!("byte-identical across runs: {} bytes", first.len());
    println!("events: {}", parsed.events.len());
    println!("visited states: {}", parsed.visited_states);
    println!();
    for line in first.lines().take(12) {
        println!("  {line}");
    }
    println!("  ...");
}
