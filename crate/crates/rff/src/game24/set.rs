use super::value::{parse_rat, rat, render_rat, Rat};

/// A multiset of exact rationals, stored sorted so the rendered form is the
/// canonical key.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NumberSet(Vec<Rat>);

impl NumberSet {
    pub fn from_values(mut values: Vec<Rat>) -> Self {
        values.sort();
        NumberSet(values)
    }

    pub fn from_ints(values: &[i64]) -> Self {
        NumberSet::from_values(values.iter().copied().map(rat).collect())
    }

    pub fn singleton(value: Rat) -> Self {
        NumberSet(vec![value])
    }

    /// Parses a whitespace-separated list of integers, one puzzle line.
    pub fn parse(text: &str) -> Option<Self> {
        let values: Option<Vec<Rat>> = text.split_whitespace().map(parse_rat).collect();
        let values = values?;
        if values.is_empty() {
            return None;
        }
        Some(NumberSet::from_values(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn values(&self) -> &[Rat] {
        &self.0
    }

    pub fn contains(&self, v: &Rat) -> bool {
        self.0.binary_search(v).is_ok()
    }

    /// Canonical byte string: sorted values, space-separated.
    pub fn key(&self) -> String {
        self.0
            .iter()
            .map(render_rat)
            .collect::<Vec<_>>()
            .join(" ")
    }

    pub fn insert(&self, v: Rat) -> NumberSet {
        let mut values = self.0.clone();
        let pos = values.partition_point(|x| *x <= v);
        values.insert(pos, v);
        NumberSet(values)
    }

    /// Removes one instance of `v`; None when absent.
    pub fn remove_one(&self, v: &Rat) -> Option<NumberSet> {
        let idx = self.0.binary_search(v).ok()?;
        let mut values = self.0.clone();
        values.remove(idx);
        Some(NumberSet(values))
    }

    /// Removes one instance each of `a` and `b` (two instances when equal).
    pub fn remove_two(&self, a: &Rat, b: &Rat) -> Option<NumberSet> {
        self.remove_one(a)?.remove_one(b)
    }

    /// Multiset intersection size.
    pub fn overlap(&self, other: &NumberSet) -> usize {
        let (mut i, mut j, mut n) = (0, 0, 0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].cmp(&other.0[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    n += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        n
    }

    /// Multiset inclusion.
    pub fn is_subset_of(&self, other: &NumberSet) -> bool {
        self.overlap(other) == self.len()
    }
}

impl std::fmt::Display for NumberSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.key())
    }
}
