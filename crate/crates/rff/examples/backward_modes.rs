//! Pair mode interleaves one backward step per forward step; single mode
//! freezes the whole backward chain first and then replays forward. Both
//! reach the same answer on deterministic problems; the event order
//! differs.
//!
//! ```bash
//! cargo run --example backward_modes
//! ```

use rff::core::{BackwardMode, EngineConfig, EventKind};
use rff::engines::{run_rff_g, set_backward_mode};
use rff::mathdag::{generate_problem, DagOracle, FactSet, MathTarget};

fn kinds(trace: &rff::core::SearchTrace) -> String {
    trace
        .events
        .iter()
        .filter_map(|e| match e.kind {
            EventKind::BackwardStep => Some('B'),
            EventKind::ForwardStep => Some('F'),
            _ => None,
        })
        .collect()
}

fn main() {
    let problem = generate_problem(3, 4, 2);
    println!("problem: {}", problem.surface_text.as_deref().unwrap_or(""));
    let oracle = DagOracle::new(problem.clone());
    let cfg = EngineConfig::new(32, 4);

    let pair = run_rff_g(
        &oracle,
        FactSet::empty(),
        MathTarget::goal_of(&problem),
        &cfg,
    )
    .expect("config is valid");
    let single_cfg = set_backward_mode(&cfg, BackwardMode::Single);
    let single = run_rff_g(
        &oracle,
        FactSet::empty(),
        MathTarget::goal_of(&problem),
        &single_cfg,
    )
    .expect("config is valid");

    println!("pair   outcome: {:?}  step pattern: {}", pair.outcome, kinds(&pair));
    println!("single outcome: {:?}  step pattern: {}", single.outcome, kinds(&single));
    assert_eq!(pair.outcome, single.outcome, "modes agree on the answer");
}
