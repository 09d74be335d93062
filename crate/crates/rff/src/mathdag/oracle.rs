//! Deterministic DAG adapter: backward steps name the next variable worth
//! pursuing, forward steps bind exactly one variable, and the state check
//! fires once the goal is bound.

use std::collections::BTreeMap;

use crate::baselines::{CotAdapter, ForwardSearchAdapter};
use crate::core::{
    AdapterError, AvoidView, BackwardOutcome, Capability, DomainAdapter, ForwardOutcome,
    SearchPath,
};
use crate::game24::{render_rat, Rat};

use super::problem::{DagProblem, VarDef};

/// Accumulated bindings; the RFF-G state. Keys and rendering are sorted, so
/// semantically equal fact sets collide.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FactSet {
    bindings: BTreeMap<String, Rat>,
}

impl FactSet {
    pub fn empty() -> Self {
        FactSet::default()
    }

    pub fn from_pairs(pairs: Vec<(String, Rat)>) -> Self {
        FactSet {
            bindings: pairs.into_iter().collect(),
        }
    }

    pub fn bind(&self, name: &str, value: Rat) -> FactSet {
        let mut bindings = self.bindings.clone();
        bindings.insert(name.to_string(), value);
        FactSet { bindings }
    }

    pub fn get(&self, name: &str) -> Option<&Rat> {
        self.bindings.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.bindings.contains_key(name)
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&String, &Rat)> {
        self.bindings.iter()
    }

    pub fn key(&self) -> String {
        self.bindings
            .iter()
            .map(|(n, v)| format!("{n}={}", render_rat(v)))
            .collect::<Vec<_>>()
            .join("; ")
    }
}

/// What must be established next, with the explicit reason.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MathTarget {
    pub needed: String,
    pub rationale: String,
}

impl MathTarget {
    pub fn goal_of(problem: &DagProblem) -> Self {
        MathTarget {
            needed: problem.goal.clone(),
            rationale: String::new(),
        }
    }
}

/// True iff the goal variable is bound.
pub fn dag_state_check(facts: &FactSet, goal: &str) -> bool {
    facts.contains(goal)
}

/// Oracle adapter for one DAG problem.
pub struct DagOracle {
    problem: DagProblem,
}

impl DagOracle {
    pub fn new(problem: DagProblem) -> Self {
        DagOracle { problem }
    }

    pub fn problem(&self) -> &DagProblem {
        &self.problem
    }

    fn computable_now(&self, name: &str, facts: &FactSet) -> bool {
        match self.problem.def_of(name) {
            None => false,
            Some(VarDef::Literal(_)) => true,
            Some(VarDef::Op(_, a, b)) => facts.contains(a) && facts.contains(b),
        }
    }

    fn value_of(&self, name: &str, facts: &FactSet) -> Result<Rat, AdapterError> {
        match self.problem.def_of(name) {
            None => Err(AdapterError::failed(format!("{name} is undefined"))),
            Some(VarDef::Literal(v)) => Ok(v.clone()),
            Some(VarDef::Op(op, a, b)) => {
                let va = facts
                    .get(a)
                    .ok_or_else(|| AdapterError::failed(format!("{a} unbound")))?;
                let vb = facts
                    .get(b)
                    .ok_or_else(|| AdapterError::failed(format!("{b} unbound")))?;
                op.apply(va, vb).map_err(AdapterError::Failed)
            }
        }
    }

    /// Unbound variables in the dependency cone of `name`, itself included.
    fn unbound_cone(&self, name: &str, facts: &FactSet) -> usize {
        let mut count = 0;
        if !facts.contains(name) {
            count += 1;
        }
        if let Some(VarDef::Op(_, a, b)) = self.problem.def_of(name) {
            count += self.unbound_cone(a, facts);
            if b != a {
                count += self.unbound_cone(b, facts);
            }
        }
        count
    }

    /// The next variable worth pursuing: the target itself when it is
    /// computable, otherwise its unbound dependency with the fewest unbound
    /// transitive dependencies (ties by definition order). Re-roots at the
    /// goal when the handed-down target is already bound.
    pub fn dag_last_step(&self, facts: &FactSet, target: &MathTarget) -> MathTarget {
        let goal = &self.problem.goal;
        if facts.contains(goal) {
            return MathTarget {
                needed: goal.clone(),
                rationale: format!("{goal} is already established"),
            };
        }
        let start = if facts.contains(&target.needed) {
            goal.clone()
        } else {
            target.needed.clone()
        };
        if self.computable_now(&start, facts) {
            return MathTarget {
                needed: start.clone(),
                rationale: self.problem.render_def(&start),
            };
        }
        let Some(VarDef::Op(_, a, b)) = self.problem.def_of(&start) else {
            // literals are always computable, so this is an undefined name
            return MathTarget {
                needed: start.clone(),
                rationale: format!("{start} is undefined"),
            };
        };
        let mut best: Option<(usize, usize, String)> = None;
        for dep in [a, b] {
            if facts.contains(dep) {
                continue;
            }
            let cone = self.unbound_cone(dep, facts);
            let pos = self.problem.position_of(dep).unwrap_or(usize::MAX);
            if best
                .as_ref()
                .is_none_or(|(bc, bp, _)| (cone, pos) < (*bc, *bp))
            {
                best = Some((cone, pos, dep.clone()));
            }
        }
        let needed = best.map(|(_, _, n)| n).unwrap_or_else(|| start.clone());
        MathTarget {
            rationale: self.problem.render_def(&needed),
            needed,
        }
    }

    /// First bound-ready variable in the dependency cone of `name`,
    /// definition order, depth first.
    fn first_ready(&self, name: &str, facts: &FactSet) -> Option<String> {
        if facts.contains(name) {
            return None;
        }
        if self.computable_now(name, facts) {
            return Some(name.to_string());
        }
        if let Some(VarDef::Op(_, a, b)) = self.problem.def_of(name) {
            for dep in [a, b] {
                if let Some(found) = self.first_ready(dep, facts) {
                    return Some(found);
                }
            }
        }
        None
    }

    /// Binds exactly one variable: the target when ready, otherwise one
    /// bound-ready ancestor of it.
    pub fn dag_forward_step(
        &self,
        facts: &FactSet,
        target: &MathTarget,
    ) -> Result<(String, Rat), AdapterError> {
        let name = self
            .first_ready(&target.needed, facts)
            .ok_or_else(|| AdapterError::failed("nothing computable toward the target"))?;
        let value = self.value_of(&name, facts)?;
        Ok((name, value))
    }
}

impl DomainAdapter for DagOracle {
    type State = FactSet;
    type Target = MathTarget;

    fn capability(&self) -> Capability {
        Capability::DagAccumulation
    }

    fn domain(&self) -> &'static str {
        "mathdag"
    }

    fn canonicalize_state(&self, state: FactSet) -> FactSet {
        state
    }

    fn canonicalize_target(&self, target: MathTarget) -> MathTarget {
        target
    }

    fn state_key(&self, state: &FactSet) -> String {
        state.key()
    }

    fn target_key(&self, target: &MathTarget) -> String {
        target.needed.clone()
    }

    fn render_state(&self, state: &FactSet) -> String {
        state.key()
    }

    fn render_target(&self, target: &MathTarget) -> String {
        target.needed.clone()
    }

    fn last_step(
        &self,
        facts: &FactSet,
        target: &MathTarget,
        _avoid: &AvoidView<'_>,
    ) -> Result<BackwardOutcome<MathTarget>, AdapterError> {
        let next = self.dag_last_step(facts, target);
        let grounded = self.computable_now(&next.needed, facts) || facts.contains(&next.needed);
        let note = next.rationale.clone();
        Ok(BackwardOutcome::new(next, note).grounded(grounded))
    }

    fn forward_step(
        &self,
        facts: &FactSet,
        target: &MathTarget,
        _avoid: &AvoidView<'_>,
    ) -> Result<ForwardOutcome<FactSet>, AdapterError> {
        let (name, value) = self.dag_forward_step(facts, target)?;
        let note = format!("{name} = {}", render_rat(&value));
        let delta = FactSet::from_pairs(vec![(name, value)]);
        Ok(ForwardOutcome::new(delta, note))
    }

    fn state_check(&self, facts: &FactSet, _target: &MathTarget) -> Result<bool, AdapterError> {
        Ok(dag_state_check(facts, &self.problem.goal))
    }

    fn output(&self, path: &SearchPath<'_, FactSet, MathTarget>) -> Result<String, AdapterError> {
        path.frontier()
            .state
            .payload
            .get(&self.problem.goal)
            .map(render_rat)
            .ok_or_else(|| AdapterError::failed("goal unbound at output time"))
    }

    fn merge_facts(&self, base: &FactSet, delta: &FactSet) -> Result<FactSet, AdapterError> {
        let mut merged = base.clone();
        for (name, value) in delta.iter() {
            match merged.get(name) {
                Some(existing) if existing != value => {
                    return Err(AdapterError::failed(format!(
                        "conflicting binding for {name}: {} vs {}",
                        render_rat(existing),
                        render_rat(value)
                    )));
                }
                _ => merged = merged.bind(name, value.clone()),
            }
        }
        Ok(merged)
    }

    fn target_attained(&self, facts: &FactSet, target: &MathTarget) -> Result<bool, AdapterError> {
        Ok(facts.contains(&target.needed))
    }
}

impl CotAdapter for DagOracle {
    /// Topological evaluation in one sweep: the whole derivation is a
    /// single answer attempt.
    fn full_chain(
        &self,
        input: &FactSet,
        _goal: &MathTarget,
    ) -> Result<ForwardOutcome<FactSet>, AdapterError> {
        let mut facts = input.clone();
        let mut notes = Vec::new();
        for (name, _) in &self.problem.vars {
            if facts.contains(name) {
                continue;
            }
            let value = self.value_of(name, &facts)?;
            notes.push(format!("{name} = {}", render_rat(&value)));
            facts = facts.bind(name, value);
        }
        Ok(ForwardOutcome::new(facts, notes.join("; ")))
    }
}

impl ForwardSearchAdapter for DagOracle {
    fn expansions(&self, facts: &FactSet) -> Result<Vec<ForwardOutcome<FactSet>>, AdapterError> {
        let mut out = Vec::new();
        for (name, _) in &self.problem.vars {
            if facts.contains(name) || !self.computable_now(name, facts) {
                continue;
            }
            let value = self.value_of(name, facts)?;
            let note = format!("{name} = {}", render_rat(&value));
            out.push(ForwardOutcome::new(facts.bind(name, value), note));
        }
        Ok(out)
    }

    fn beam_score(&self, facts: &FactSet, _goal: &MathTarget) -> Result<i64, AdapterError> {
        Ok(facts.len() as i64)
    }

    fn is_leaf(&self, facts: &FactSet) -> bool {
        dag_state_check(facts, &self.problem.goal)
    }
}
