use std::collections::BTreeMap;

/// One failed `(state, target)` attempt, keyed by canonical byte strings so
/// that semantically equal attempts always collide. The rendered texts ride
/// along for traces and prompts.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AvoidEntry {
    pub state_key: String,
    pub target_key: String,
    pub state_text: String,
    pub target_text: String,
}

/// Per-depth record of failed attempts that forward reasoning must not
/// repeat.
///
/// Entries accumulate at a depth while the search keeps retrying it. When
/// the engine backtracks to depth `j`, every entry deeper than `j` is
/// cleared; the entries at `j` itself are kept, since they are exactly the
/// attempts the retry has to steer around.
#[derive(Clone, Debug, Default)]
pub struct AvoidSet {
    by_depth: BTreeMap<usize, Vec<AvoidEntry>>,
}

impl AvoidSet {
    pub fn new() -> Self {
        AvoidSet::default()
    }

    /// Records an entry at `depth`. Returns false if an identical pair was
    /// already present (the set stores distinct attempts only).
    pub fn record(&mut self, depth: usize, entry: AvoidEntry) -> bool {
        let slot = self.by_depth.entry(depth).or_default();
        if slot
            .iter()
            .any(|e| e.state_key == entry.state_key && e.target_key == entry.target_key)
        {
            return false;
        }
        slot.push(entry);
        true
    }

    /// Exact membership test on canonical keys.
    pub fn contains(&self, depth: usize, state_key: &str, target_key: &str) -> bool {
        self.by_depth.get(&depth).is_some_and(|slot| {
            slot.iter()
                .any(|e| e.state_key == state_key && e.target_key == target_key)
        })
    }

    pub fn len_at(&self, depth: usize) -> usize {
        self.by_depth.get(&depth).map_or(0, Vec::len)
    }

    /// Drops every entry recorded deeper than `depth`.
    pub fn clear_deeper(&mut self, depth: usize) {
        self.by_depth.retain(|d, _| *d <= depth);
    }

    pub fn view(&self, depth: usize) -> AvoidView<'_> {
        AvoidView {
            depth,
            entries: self.by_depth.get(&depth).map_or(&[], Vec::as_slice),
        }
    }

    pub fn total_len(&self) -> usize {
        self.by_depth.values().map(Vec::len).sum()
    }
}

/// The slice of an [`AvoidSet`] an adapter consults while producing one
/// depth: the failed attempts recorded at that same depth.
#[derive(Clone, Copy, Debug)]
pub struct AvoidView<'a> {
    depth: usize,
    entries: &'a [AvoidEntry],
}

impl<'a> AvoidView<'a> {
    /// A view with no entries, for calls that do not consult avoid sets.
    pub fn empty() -> AvoidView<'static> {
        AvoidView {
            depth: 0,
            entries: &[],
        }
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn contains(&self, state_key: &str, target_key: &str) -> bool {
        self.entries
            .iter()
            .any(|e| e.state_key == state_key && e.target_key == target_key)
    }

    pub fn iter(&self) -> impl Iterator<Item = &'a AvoidEntry> {
        self.entries.iter()
    }
}
