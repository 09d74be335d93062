//! Dataset transforms: the redundant five-number variant.

use std::path::Path;

use crate::game24::{add_redundant_one, brute_force_solvable, rat, NumberSet};

use super::dataset::{load_workload, save_puzzles, Workload};
use super::BenchError;

#[derive(Clone, Debug, Default)]
pub struct VariantReport {
    pub total: usize,
    /// 1-based indices of puzzles whose solvability was not preserved;
    /// expected empty.
    pub violations: Vec<usize>,
    /// Inputs already bigger than four numbers (applying the transform
    /// again is allowed, but worth a warning).
    pub oversized_inputs: usize,
}

/// Appends the constant 1 to every puzzle and writes the new dataset,
/// verifying with the brute-force oracle that every solvable input stays
/// solvable.
pub fn add_one_variants(input: &Path, output: &Path) -> Result<VariantReport, BenchError> {
    let workload = load_workload(input)?;
    let Workload::Puzzles(puzzles) = workload else {
        return Err(BenchError::Dataset(
            "variants apply to puzzle datasets only".to_string(),
        ));
    };
    let goal = rat(24);
    let mut report = VariantReport::default();
    let mut out: Vec<NumberSet> = Vec::new();
    for (index, set) in puzzles {
        if set.len() > 4 {
            report.oversized_inputs += 1;
        }
        let variant = add_redundant_one(&set);
        if brute_force_solvable(&set, &goal) && !brute_force_solvable(&variant, &goal) {
            report.violations.push(index);
        }
        out.push(variant);
        report.total += 1;
    }
    save_puzzles(output, &out)?;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variants_preserve_solvability_and_warn_on_reapplication() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.txt");
        let mid = dir.path().join("mid.txt");
        let out = dir.path().join("out.txt");
        std::fs::write(&input, "4 7 8 8\n1 1 1 1\n").unwrap();
        let report = add_one_variants(&input, &mid).unwrap();
        assert_eq!(report.total, 2);
        assert!(report.violations.is_empty());
        assert_eq!(report.oversized_inputs, 0);
        let text = std::fs::read_to_string(&mid).unwrap();
        assert_eq!(text, "1 4 7 8 8\n1 1 1 1 1\n");
        // applying twice yields six-number puzzles, allowed but flagged
        let report = add_one_variants(&mid, &out).unwrap();
        assert_eq!(report.oversized_inputs, 2);
    }

    #[test]
    fn empty_datasets_produce_empty_outputs() {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("in.txt");
        let out = dir.path().join("out.txt");
        std::fs::write(&input, "").unwrap();
        let report = add_one_variants(&input, &out).unwrap();
        assert_eq!(report.total, 0);
        assert_eq!(std::fs::read_to_string(&out).unwrap(), "");
    }
}
