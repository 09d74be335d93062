//! Independent solvability oracle: exhaustive enumeration over all ways to
//! combine the multiset two values at a time, in exact arithmetic. Used by
//! tests and dataset tooling; the search engines never call into it.

use std::collections::HashMap;

use super::chain::ExprPiece;
use super::moves::{legal_moves, Op};
use super::set::NumberSet;
use super::value::Rat;

/// True iff some expression over the multiset, using each value exactly
/// once with `+ - * /`, evaluates to `goal`.
pub fn brute_force_solvable(set: &NumberSet, goal: &Rat) -> bool {
    fn rec(set: &NumberSet, goal: &Rat, memo: &mut HashMap<String, bool>) -> bool {
        if set.len() == 1 {
            return set.values()[0] == *goal;
        }
        let key = set.key();
        if let Some(&known) = memo.get(&key) {
            return known;
        }
        let found = legal_moves(set)
            .into_iter()
            .any(|(_, new)| rec(&new, goal, memo));
        memo.insert(key, found);
        found
    }
    if set.is_empty() {
        return false;
    }
    rec(set, goal, &mut HashMap::new())
}

/// Like [`brute_force_solvable`], but returns one witness expression, found
/// by the same fixed enumeration order as `legal_moves`, so it is
/// deterministic across runs.
pub fn brute_force_witness(set: &NumberSet, goal: &Rat) -> Option<String> {
    fn rec(pieces: &[ExprPiece], goal: &Rat) -> Option<String> {
        if pieces.len() == 1 {
            return (pieces[0].value == *goal).then(|| pieces[0].text.clone());
        }
        for i in 0..pieces.len() {
            for j in (i + 1)..pieces.len() {
                let rest: Vec<ExprPiece> = pieces
                    .iter()
                    .enumerate()
                    .filter(|(k, _)| *k != i && *k != j)
                    .map(|(_, p)| p.clone())
                    .collect();
                let (a, b) = (&pieces[i], &pieces[j]);
                for (lhs, op, rhs) in [
                    (a, Op::Add, b),
                    (b, Op::Sub, a),
                    (a, Op::Sub, b),
                    (a, Op::Mul, b),
                    (b, Op::Div, a),
                    (a, Op::Div, b),
                ] {
                    let Some(piece) = ExprPiece::combine(lhs, op, rhs) else {
                        continue;
                    };
                    let mut next = rest.clone();
                    next.push(piece);
                    if let Some(found) = rec(&next, goal) {
                        return Some(found);
                    }
                }
            }
        }
        None
    }
    let pieces: Vec<ExprPiece> = set.values().iter().map(ExprPiece::leaf).collect();
    rec(&pieces, goal)
}

/// Number of successful combine sequences reaching `goal`, used as a
/// deterministic difficulty proxy when ordering the puzzle corpus (more
/// sequences, easier puzzle).
pub fn combination_count(set: &NumberSet, goal: &Rat) -> u64 {
    fn rec(set: &NumberSet, goal: &Rat) -> u64 {
        if set.len() == 1 {
            return u64::from(set.values()[0] == *goal);
        }
        legal_moves(set)
            .into_iter()
            .map(|(_, new)| rec(&new, goal))
            .sum()
    }
    if set.is_empty() {
        return 0;
    }
    rec(set, goal)
}

/// Every proper, non-empty sub-multiset of `set`, canonical keys deduped.
pub fn proper_submultisets(set: &NumberSet) -> Vec<NumberSet> {
    let values = set.values();
    let n = values.len();
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for mask in 1..((1usize << n) - 1) {
        let subset: Vec<Rat> = (0..n)
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| values[i].clone())
            .collect();
        let subset = NumberSet::from_values(subset);
        if seen.insert(subset.key()) {
            out.push(subset);
        }
    }
    out
}

/// Appends the constant 1 to a puzzle, the redundant five-number variant.
/// Multiplying by the extra 1 preserves any witness, so solvable inputs
/// stay solvable.
pub fn add_redundant_one(set: &NumberSet) -> NumberSet {
    set.insert(super::value::rat(1))
}
