//! Benchmark harness: load datasets, run any method over them with a
//! bounded worker pool, and aggregate accuracy and visited-state
//! statistics into tables, CSV, and per-run trace files.

mod dataset;
mod report;
mod runner;
mod variants;

pub use dataset::{canonical_puzzles, load_workload, save_puzzles, select_range, Workload};
pub use report::{aggregate, write_csv, MethodRow, ResultTable};
pub use runner::{run_batch, AdapterKind, BatchResult, Method, RunRecord, RunSpec};
pub use variants::{add_one_variants, VariantReport};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum BenchError {
    #[error("io error: {0}")]
    Io(String),
    #[error("dataset error: {0}")]
    Dataset(String),
    #[error("invalid run spec: {0}")]
    Spec(String),
}
