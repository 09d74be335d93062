//! A small benchmark batch: a slice of the canonical puzzle corpus through
//! two methods, aggregated into the summary table and the per-run CSV.
//!
//! ```bash
//! cargo run --example bench_dataset
//! ```

use rff::bench::{run_batch, Method, RunSpec};
use rff::core::EngineConfig;

fn main() {
    let dataset = std::path::PathBuf::from(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/data/game24_puzzles.txt"
    ));
    let out = std::env::temp_dir().join("rff-bench-example");

    for method in [Method::RffT, Method::Cot] {
        let mut spec = RunSpec::oracle(method, dataset.clone(), EngineConfig::new(20, 13));
        // the classic middle-hard slice
        spec.range = Some((901, 920));
        spec.jobs = 4;
        spec.out_dir = Some(out.join(method.tag()));
        let batch = run_batch(&spec).expect("batch runs");
        print!("{}", batch.table.render());
        println!();
    }
    println!("traces and results.csv under {}", out.display());
}
