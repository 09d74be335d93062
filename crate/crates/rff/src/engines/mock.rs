//! Scripted adapters used by engine unit tests.

use std::cell::RefCell;
use std::collections::{BTreeMap, VecDeque};

use crate::core::{
    AdapterError, AvoidView, BackwardOutcome, Capability, DomainAdapter, ForwardOutcome,
    SearchPath, Verdict,
};

/// Integer tree domain: targets count down, forward candidates count up,
/// the state check fires when the state reaches the target, and the
/// verifier verdicts are scripted.
pub(crate) struct MockTree {
    verdicts: RefCell<VecDeque<Verdict>>,
    branching: i64,
    empty_notes: bool,
}

impl MockTree {
    pub(crate) fn with_verdicts(verdicts: Vec<Verdict>) -> Self {
        MockTree {
            verdicts: RefCell::new(verdicts.into()),
            branching: 3,
            empty_notes: false,
        }
    }

    pub(crate) fn with_branching(mut self, branching: i64) -> Self {
        self.branching = branching;
        self
    }

    pub(crate) fn with_empty_notes(mut self) -> Self {
        self.empty_notes = true;
        self
    }
}

impl DomainAdapter for MockTree {
    type State = i64;
    type Target = i64;

    fn capability(&self) -> Capability {
        Capability::TreeSearch
    }

    fn domain(&self) -> &'static str {
        "mock-tree"
    }

    fn canonicalize_state(&self, state: i64) -> i64 {
        state
    }

    fn canonicalize_target(&self, target: i64) -> i64 {
        target
    }

    fn state_key(&self, state: &i64) -> String {
        state.to_string()
    }

    fn target_key(&self, target: &i64) -> String {
        target.to_string()
    }

    fn render_state(&self, state: &i64) -> String {
        state.to_string()
    }

    fn render_target(&self, target: &i64) -> String {
        target.to_string()
    }

    fn last_step(
        &self,
        state: &i64,
        target: &i64,
        _avoid: &AvoidView<'_>,
    ) -> Result<BackwardOutcome<i64>, AdapterError> {
        let pre = target - 1;
        let note = if self.empty_notes {
            String::new()
        } else {
            format!("{target} follows from {pre} by +1")
        };
        Ok(BackwardOutcome {
            target: pre,
            note,
            grounded: pre <= *state,
            req: None,
            raw: None,
        })
    }

    fn forward_step(
        &self,
        state: &i64,
        target: &i64,
        avoid: &AvoidView<'_>,
    ) -> Result<ForwardOutcome<i64>, AdapterError> {
        for next in (state + 1)..=(state + self.branching) {
            if !avoid.contains(&next.to_string(), &target.to_string()) {
                return Ok(ForwardOutcome::new(next, format!("{state}+{}", next - state)));
            }
        }
        Err(AdapterError::exhausted("all forward candidates avoided"))
    }

    fn state_check(&self, state: &i64, target: &i64) -> Result<bool, AdapterError> {
        Ok(state >= target)
    }

    fn verify(&self, _path: &SearchPath<'_, i64, i64>) -> Result<Verdict, AdapterError> {
        Ok(self
            .verdicts
            .borrow_mut()
            .pop_front()
            .unwrap_or(Verdict::Valid))
    }

    fn output(&self, path: &SearchPath<'_, i64, i64>) -> Result<String, AdapterError> {
        Ok(path.frontier().state.payload.to_string())
    }

    fn target_attained(&self, state: &i64, target: &i64) -> Result<bool, AdapterError> {
        Ok(state >= target)
    }
}

/// Fact-accumulation domain over named integers with a fixed derivation
/// order.
pub(crate) struct MockDag {
    defs: Vec<(String, i64)>,
    goal: String,
    never_grounded: bool,
    conflicting: bool,
}

impl MockDag {
    pub(crate) fn new(defs: Vec<(&str, i64)>, goal: &str) -> Self {
        MockDag {
            defs: defs
                .into_iter()
                .map(|(n, v)| (n.to_string(), v))
                .collect(),
            goal: goal.to_string(),
            never_grounded: false,
            conflicting: false,
        }
    }

    pub(crate) fn never_grounded(mut self) -> Self {
        self.never_grounded = true;
        self
    }

    /// Forward steps re-derive the first definition even when a fact with a
    /// different value already exists, to exercise merge conflicts.
    pub(crate) fn conflicting(mut self) -> Self {
        self.conflicting = true;
        self
    }

    pub(crate) fn no_facts() -> BTreeMap<String, i64> {
        BTreeMap::new()
    }

    pub(crate) fn facts(entries: &[(&str, i64)]) -> BTreeMap<String, i64> {
        entries
            .iter()
            .map(|(n, v)| (n.to_string(), *v))
            .collect()
    }

    fn first_missing(&self, facts: &BTreeMap<String, i64>) -> Option<(String, i64)> {
        self.defs
            .iter()
            .find(|(n, _)| !facts.contains_key(n))
            .cloned()
    }
}

impl DomainAdapter for MockDag {
    type State = BTreeMap<String, i64>;
    type Target = String;

    fn capability(&self) -> Capability {
        Capability::DagAccumulation
    }

    fn domain(&self) -> &'static str {
        "mock-dag"
    }

    fn canonicalize_state(&self, state: Self::State) -> Self::State {
        state
    }

    fn canonicalize_target(&self, target: String) -> String {
        target
    }

    fn state_key(&self, state: &Self::State) -> String {
        self.render_state(state)
    }

    fn target_key(&self, target: &String) -> String {
        target.clone()
    }

    fn render_state(&self, state: &Self::State) -> String {
        state
            .iter()
            .map(|(n, v)| format!("{n}={v}"))
            .collect::<Vec<_>>()
            .join(";")
    }

    fn render_target(&self, target: &String) -> String {
        target.clone()
    }

    fn last_step(
        &self,
        facts: &Self::State,
        _target: &String,
        _avoid: &AvoidView<'_>,
    ) -> Result<BackwardOutcome<String>, AdapterError> {
        let (name, _) = self
            .first_missing(facts)
            .ok_or_else(|| AdapterError::failed("no fact left to derive"))?;
        Ok(BackwardOutcome {
            target: name.clone(),
            note: format!("need {name}"),
            grounded: !self.never_grounded,
            req: None,
            raw: None,
        })
    }

    fn forward_step(
        &self,
        facts: &Self::State,
        _target: &String,
        _avoid: &AvoidView<'_>,
    ) -> Result<ForwardOutcome<Self::State>, AdapterError> {
        let (name, value) = if self.conflicting {
            self.defs[0].clone()
        } else {
            self.first_missing(facts)
                .ok_or_else(|| AdapterError::failed("nothing to derive"))?
        };
        let mut delta = BTreeMap::new();
        delta.insert(name.clone(), value);
        Ok(ForwardOutcome::new(delta, format!("{name}={value}")))
    }

    fn state_check(&self, facts: &Self::State, _target: &String) -> Result<bool, AdapterError> {
        Ok(facts.contains_key(&self.goal))
    }

    fn output(&self, path: &SearchPath<'_, Self::State, String>) -> Result<String, AdapterError> {
        path.frontier()
            .state
            .payload
            .get(&self.goal)
            .map(|v| v.to_string())
            .ok_or_else(|| AdapterError::failed("goal missing at output time"))
    }

    fn merge_facts(
        &self,
        base: &Self::State,
        delta: &Self::State,
    ) -> Result<Self::State, AdapterError> {
        let mut merged = base.clone();
        for (name, value) in delta {
            match merged.get(name) {
                Some(existing) if existing != value => {
                    return Err(AdapterError::failed(format!(
                        "conflicting value for {name}: {existing} vs {value}"
                    )));
                }
                _ => {
                    merged.insert(name.clone(), *value);
                }
            }
        }
        Ok(merged)
    }

    fn target_attained(&self, facts: &Self::State, target: &String) -> Result<bool, AdapterError> {
        Ok(facts.contains_key(target))
    }
}
