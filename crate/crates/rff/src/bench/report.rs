//! Aggregation and stable output formats.
//!
//! CSV schema, one row per run, stable and documented:
//! `run_id,index,repeat,method,outcome,visited_states,duration_ms,answer,correct`.
//! Aggregate accuracy is the mean of the `correct` column, so every number
//! in the summary is recomputable from the CSV alone.

use std::path::Path;

use crate::core::EngineConfig;

use super::runner::RunRecord;
use super::BenchError;

#[derive(Clone, Debug)]
pub struct MethodRow {
    pub method: String,
    pub runs: usize,
    pub accuracy: f64,
    pub mean_visited: f64,
    pub mean_wall_ms: f64,
}

/// Per-method aggregate with the configuration echoed alongside.
#[derive(Clone, Debug)]
pub struct ResultTable {
    pub rows: Vec<MethodRow>,
    pub config_echo: String,
}

impl ResultTable {
    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("config: {}\n", self.config_echo));
        out.push_str(&format!(
            "{:<20} {:>6} {:>10} {:>14} {:>14}\n",
            "method", "runs", "accuracy", "mean visited", "mean wall ms"
        ));
        for row in &self.rows {
            out.push_str(&format!(
                "{:<20} {:>6} {:>10.3} {:>14.2} {:>14.2}\n",
                row.method, row.runs, row.accuracy, row.mean_visited, row.mean_wall_ms
            ));
        }
        out
    }
}

pub fn aggregate(records: &[RunRecord], cfg: &EngineConfig) -> ResultTable {
    let mut methods: Vec<String> = Vec::new();
    for r in records {
        if !methods.contains(&r.method) {
            methods.push(r.method.clone());
        }
    }
    let rows = methods
        .into_iter()
        .map(|method| {
            let group: Vec<&RunRecord> = records.iter().filter(|r| r.method == method).collect();
            let runs = group.len();
            let accuracy =
                group.iter().filter(|r| r.correct).count() as f64 / runs.max(1) as f64;
            let mean_visited =
                group.iter().map(|r| r.visited as f64).sum::<f64>() / runs.max(1) as f64;
            let mean_wall_ms =
                group.iter().map(|r| r.duration_ms as f64).sum::<f64>() / runs.max(1) as f64;
            MethodRow {
                method,
                runs,
                accuracy,
                mean_visited,
                mean_wall_ms,
            }
        })
        .collect();
    ResultTable {
        rows,
        config_echo: cfg.echo(),
    }
}

pub fn write_csv(path: &Path, records: &[RunRecord]) -> Result<(), BenchError> {
    let mut writer = csv::Writer::from_path(path)
        .map_err(|e| BenchError::Io(format!("open {}: {e}", path.display())))?;
    writer
        .write_record([
            "run_id",
            "index",
            "repeat",
            "method",
            "outcome",
            "visited_states",
            "duration_ms",
            "answer",
            "correct",
        ])
        .map_err(|e| BenchError::Io(e.to_string()))?;
    for r in records {
        writer
            .write_record([
                r.run_id.to_string(),
                r.index.to_string(),
                r.repeat.to_string(),
                r.method.clone(),
                r.outcome.clone(),
                r.visited.to_string(),
                r.duration_ms.to_string(),
                r.answer.clone(),
                r.correct.to_string(),
            ])
            .map_err(|e| BenchError::Io(e.to_string()))?;
    }
    writer.flush().map_err(|e| BenchError::Io(e.to_string()))
}
