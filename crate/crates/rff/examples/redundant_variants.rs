//! The redundant five-number variant: appending the constant 1 preserves
//! solvability but widens the search, so the same method pays more
//! visited states for the same answers.
//!
//! ```bash
//! cargo run --example redundant_variants
//! ```

use rff::core::EngineConfig;
use rff::engines::run_rff_t;
use rff::game24::{
    add_redundant_one, brute_force_solvable, rat, sample_multisets, Game24Oracle, Game24State,
    Game24Target,
};

fn main() {
    let cfg = EngineConfig::new(20, 13);
    let sample: Vec<_> = sample_multisets(24, 40, 4, 1, 13)
        .into_iter()
        .filter(|s| brute_force_solvable(s, &rat(24)))
        .collect();

    let mut four = 0u64;
    let mut five = 0u64;
    for set in &sample {
        let oracle = Game24Oracle::standard(cfg.width);
        let a = run_rff_t(
            &oracle,
            Game24State::initial(set.clone()),
            Game24Target::root(rat(24)),
            &cfg,
        )
        .expect("config is valid");
        let variant = add_redundant_one(set);
        assert!(brute_force_solvable(&variant, &rat(24)), "preserved");
        let oracle = Game24Oracle::standard(cfg.width);
        let b = run_rff_t(
            &oracle,
            Game24State::initial(variant),
            Game24Target::root(rat(24)),
            &cfg,
        )
        .expect("config is valid");
        println!(
            "{:<12} visited {}   with extra 1: visited {}",
            set.key(),
            a.visited_states,
            b.visited_states
        );
        four += a.visited_states;
        five += b.visited_states;
    }
    let n = sample.len() as f64;
    println!();
    println!(
        "mean visited: four-number {:.2}, five-number {:.2}",
        four as f64 / n,
        five as f64 / n
    );
}
