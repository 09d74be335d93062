//! Dataset files. Puzzles are plain text, one per line, four (or five)
//! space-separated integers, addressable by 1-based line index so a range
//! like 901..=1000 selects those lines of the canonical ordering. Math
//! problems are JSONL records handled by the mathdag loaders.

use std::path::Path;

use crate::game24::{
    all_multisets, brute_force_solvable, combination_count, rat, NumberSet,
};
use crate::mathdag::MathRecord;

use super::BenchError;

/// A loaded dataset, either puzzles or math records, keeping original
/// 1-based indices.
pub enum Workload {
    Puzzles(Vec<(usize, NumberSet)>),
    Math(Vec<(usize, MathRecord)>),
}

impl Workload {
    pub fn len(&self) -> usize {
        match self {
            Workload::Puzzles(v) => v.len(),
            Workload::Math(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Loads a dataset, sniffing the format: JSON records are math problems,
/// anything else is parsed as puzzle lines.
pub fn load_workload(path: &Path) -> Result<Workload, BenchError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| BenchError::Io(format!("read {}: {e}", path.display())))?;
    let first = text.lines().find(|l| !l.trim().is_empty());
    if first.is_some_and(|l| l.trim_start().starts_with('{')) {
        let records = crate::mathdag::load_problems(path).map_err(BenchError::Dataset)?;
        return Ok(Workload::Math(
            records.into_iter().enumerate().map(|(i, r)| (i + 1, r)).collect(),
        ));
    }
    let mut puzzles = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let set = NumberSet::parse(line).ok_or_else(|| {
            BenchError::Dataset(format!("line {}: not a puzzle: {line:?}", i + 1))
        })?;
        puzzles.push((i + 1, set));
    }
    Ok(Workload::Puzzles(puzzles))
}

/// Restricts a workload to 1-based inclusive indices.
pub fn select_range(workload: Workload, range: Option<(usize, usize)>) -> Workload {
    let Some((lo, hi)) = range else {
        return workload;
    };
    match workload {
        Workload::Puzzles(v) => Workload::Puzzles(
            v.into_iter().filter(|(i, _)| *i >= lo && *i <= hi).collect(),
        ),
        Workload::Math(v) => Workload::Math(
            v.into_iter().filter(|(i, _)| *i >= lo && *i <= hi).collect(),
        ),
    }
}

/// The canonical puzzle corpus: every solvable four-card multiset over
/// 1..=13, ordered easiest first by a deterministic difficulty proxy (the
/// count of successful combine sequences, descending). The classic corpus
/// this mirrors is ordered by human solve statistics, which are not
/// reproducible from first principles; this ordering is a documented
/// best-effort stand-in with the same size and difficulty direction.
pub fn canonical_puzzles() -> Vec<NumberSet> {
    let goal = rat(24);
    let mut scored: Vec<(u64, NumberSet)> = all_multisets(4, 1, 13)
        .into_iter()
        .filter(|s| brute_force_solvable(s, &goal))
        .map(|s| (combination_count(&s, &goal), s))
        .collect();
    scored.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.key().cmp(&b.1.key())));
    scored.into_iter().map(|(_, s)| s).collect()
}

/// Writes puzzles one per line.
pub fn save_puzzles(path: &Path, puzzles: &[NumberSet]) -> Result<(), BenchError> {
    let mut out = String::new();
    for p in puzzles {
        out.push_str(&p.key());
        out.push('\n');
    }
    std::fs::write(path, out).map_err(|e| BenchError::Io(format!("write {}: {e}", path.display())))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn puzzle_files_round_trip_with_indices() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("puzzles.txt");
        std::fs::write(&path, "1 2 3 4\n5 5 5 5\n1 1 12 12\n").unwrap();
        let loaded = load_workload(&path).unwrap();
        let Workload::Puzzles(puzzles) = select_range(loaded, Some((2, 3))) else {
            panic!("expected puzzles")
        };
        assert_eq!(puzzles.len(), 2);
        assert_eq!(puzzles[0].0, 2);
        assert_eq!(puzzles[1].1.key(), "1 1 12 12");
    }

    #[test]
    fn math_files_are_sniffed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("problems.jsonl");
        let problems = vec![crate::mathdag::generate_problem(0, 3, 2)];
        crate::mathdag::save_problems(&path, &problems).unwrap();
        match load_workload(&path).unwrap() {
            Workload::Math(v) => assert_eq!(v.len(), 1),
            Workload::Puzzles(_) => panic!("expected math records"),
        }
    }
}
