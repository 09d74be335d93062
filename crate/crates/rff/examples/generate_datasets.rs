//! Dataset tooling: a slice of the canonical puzzle corpus, generated
//! math problems with stored ground truth, and the GSM8K-format loader.
//!
//! ```bash
//! cargo run --example generate_datasets
//! ```

use rff::bench::canonical_puzzles;
use rff::mathdag::{generate_problem, load_problems, save_problems, MathRecord};

fn main() {
    let puzzles = canonical_puzzles();
    println!("canonical corpus: {} solvable puzzles", puzzles.len());
    println!("easiest: {}", puzzles[0]);
    println!("middle-hard (index 901): {}", puzzles[900]);
    println!("hardest: {}", puzzles[puzzles.len() - 1]);
    println!();

    let dir = std::env::temp_dir().join("rff-datasets-example");
    std::fs::create_dir_all(&dir).expect("temp dir");
    let problems: Vec<_> = (0..5).map(|i| generate_problem(i, 1 + i as usize, 3)).collect();
    let path = dir.join("problems.jsonl");
    save_problems(&path, &problems).expect("written");
    println!("wrote {} math problems to {}", problems.len(), path.display());

    // the loader also accepts GSM8K-format records
    let gsm = dir.join("gsm.jsonl");
    std::fs::write(
        &gsm,
        "{\"question\":\"A box holds 6 eggs. How many eggs are in 7 boxes?\",\"answer\":\"6*7=42\\n#### 42\"}\n",
    )
    .expect("written");
    for record in load_problems(&gsm).expect("loads") {
        match record {
            MathRecord::Text { question, answer } => {
                println!("text record: {question} -> {answer}");
            }
            MathRecord::Dag(p) => println!("structured record with goal {}", p.goal),
        }
    }
}
