//! Puzzle multiset enumeration and seeded sampling.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::set::NumberSet;

/// Every multiset of `size` values drawn from `lo..=hi`, in canonical
/// (non-decreasing) order.
pub fn all_multisets(size: usize, lo: i64, hi: i64) -> Vec<NumberSet> {
    fn rec(size: usize, lo: i64, hi: i64, prefix: &mut Vec<i64>, out: &mut Vec<NumberSet>) {
        if size == 0 {
            out.push(NumberSet::from_ints(prefix));
            return;
        }
        for v in lo..=hi {
            prefix.push(v);
            rec(size - 1, v, hi, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(size, lo, hi, &mut Vec::new(), &mut out);
    out
}

/// `count` distinct multisets of `size` values from `lo..=hi`, drawn with a
/// seeded generator; deterministic in all arguments, returned in draw
/// order.
pub fn sample_multisets(seed: u64, count: usize, size: usize, lo: i64, hi: i64) -> Vec<NumberSet> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let values: Vec<i64> = (0..size).map(|_| rng.gen_range(lo..=hi)).collect();
        let set = NumberSet::from_ints(&values);
        if seen.insert(set.key()) {
            out.push(set);
        }
    }
    out
}
