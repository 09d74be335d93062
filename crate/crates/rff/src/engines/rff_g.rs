//! Accumulation engine: state only grows, no backtracking.

use crate::core::{
    AvoidView, BackwardMode, Capability, ConfigError, DomainAdapter, EngineConfig, Frame,
    Outcome, ProblemState, SearchPath, SearchTrace, TargetState, TraceBuilder,
};

use super::{backward_chain, body_cap, run_header, ChainResult};

/// Runs the accumulation loop over a [`Capability::DagAccumulation`]
/// adapter.
///
/// Each iteration decomposes the current target one step backward, derives
/// new facts toward it, and merges them into the running state; the merge
/// must only ever add facts. The run ends as soon as the state check reports
/// the goal information established, as `StepLimit` after `max_steps`
/// iterations otherwise. The goal is also checked once before the first
/// backward step, so inputs that already contain it solve without any
/// generator or reasoner call.
pub fn run_rff_g<A: DomainAdapter>(
    adapter: &A,
    input: A::State,
    goal: A::Target,
    cfg: &EngineConfig,
) -> Result<SearchTrace, ConfigError> {
    cfg.validate()?;
    if adapter.capability() != Capability::DagAccumulation {
        return Err(ConfigError::CapabilityMismatch {
            required: Capability::DagAccumulation,
            found: adapter.capability(),
        });
    }
    Ok(match cfg.backward_mode {
        BackwardMode::Pair => pair_mode(adapter, input, goal, cfg),
        BackwardMode::Single => single_mode(adapter, input, goal, cfg),
    })
}

fn fail(tr: TraceBuilder, reason: String) -> SearchTrace {
    tr.finish(Outcome::Unsolved(reason))
}

/// Emits the state-check event; `Ok(true)` means the goal is established.
fn check<A: DomainAdapter>(
    adapter: &A,
    facts: &A::State,
    target: &A::Target,
    tr: &mut TraceBuilder,
    depth: usize,
) -> Result<bool, String> {
    let passed = adapter
        .state_check(facts, target)
        .map_err(|e| format!("state check failed: {e}"))?;
    tr.check(
        depth,
        adapter.render_state(facts),
        adapter.render_target(target),
        passed,
    );
    Ok(passed)
}

fn solved<A: DomainAdapter>(
    adapter: &A,
    input: &A::State,
    goal: &A::Target,
    frames: &[Frame<A::State, A::Target>],
    tr: &mut TraceBuilder,
    depth: usize,
) -> Result<Outcome, String> {
    let path = SearchPath {
        input,
        goal,
        frames,
    };
    let answer = adapter
        .output(&path)
        .map_err(|e| format!("output failed: {e}"))?;
    tr.output(depth, answer.clone());
    Ok(Outcome::Solved(answer))
}

fn pair_mode<A: DomainAdapter>(
    adapter: &A,
    input: A::State,
    goal: A::Target,
    cfg: &EngineConfig,
) -> SearchTrace {
    let mut tr = TraceBuilder::new(run_header(adapter, "rff-g", cfg));
    let input = adapter.canonicalize_state(input);
    let goal = adapter.canonicalize_target(goal);
    let mut facts = input.clone();
    let mut frames: Vec<Frame<A::State, A::Target>> = vec![Frame {
        state: ProblemState::initial(facts.clone()),
        target: TargetState::goal(goal.clone()),
    }];

    match check(adapter, &facts, &goal, &mut tr, 0) {
        Err(reason) => return fail(tr, reason),
        Ok(true) => {
            return match solved(adapter, &input, &goal, &frames, &mut tr, 0) {
                Ok(outcome) => tr.finish(outcome),
                Err(reason) => fail(tr, reason),
            };
        }
        Ok(false) => {}
    }

    for i in 1..=cfg.max_steps {
        let prev_target = frames
            .last()
            .expect("root frame present")
            .target
            .payload
            .clone();

        let bw = match adapter.last_step(&facts, &prev_target, &AvoidView::empty()) {
            Ok(bw) => bw,
            Err(e) => return fail(tr, format!("last step generator failed: {e}")),
        };
        if bw.note.trim().is_empty() {
            return fail(
                tr,
                "last step generator omitted the explicit transition".to_string(),
            );
        }
        let target = adapter.canonicalize_target(bw.target);
        tr.backward(
            i,
            adapter.render_target(&target),
            bw.note.clone(),
            bw.req.clone(),
            bw.raw.clone(),
        );

        let fw = match adapter.forward_step(&facts, &target, &AvoidView::empty()) {
            Ok(fw) => fw,
            Err(e) => return fail(tr, format!("forward reasoner failed: {e}")),
        };
        let merged = match adapter.merge_facts(&facts, &fw.state) {
            Ok(m) => adapter.canonicalize_state(m),
            Err(e) => return fail(tr, format!("fact accumulation failed: {e}")),
        };
        tr.forward(
            i,
            adapter.render_state(&merged),
            fw.note.clone(),
            0,
            fw.req.clone(),
            fw.raw.clone(),
        );
        facts = merged;
        frames.push(Frame {
            state: ProblemState::at_depth(facts.clone(), i, fw.note),
            target: TargetState::at_depth(target.clone(), i, bw.note),
        });

        match check(adapter, &facts, &target, &mut tr, i) {
            Err(reason) => return fail(tr, reason),
            Ok(true) => {
                return match solved(adapter, &input, &goal, &frames, &mut tr, i) {
                    Ok(outcome) => tr.finish(outcome),
                    Err(reason) => fail(tr, reason),
                };
            }
            Ok(false) => {}
        }
    }
    tr.finish(Outcome::StepLimit)
}

fn single_mode<A: DomainAdapter>(
    adapter: &A,
    input: A::State,
    goal: A::Target,
    cfg: &EngineConfig,
) -> SearchTrace {
    let mut tr = TraceBuilder::new(run_header(adapter, "rff-g", cfg));
    let input = adapter.canonicalize_state(input);
    let goal = adapter.canonicalize_target(goal);
    let mut facts = input.clone();
    let mut frames: Vec<Frame<A::State, A::Target>> = vec![Frame {
        state: ProblemState::initial(facts.clone()),
        target: TargetState::goal(goal.clone()),
    }];

    match check(adapter, &facts, &goal, &mut tr, 0) {
        Err(reason) => return fail(tr, reason),
        Ok(true) => {
            return match solved(adapter, &input, &goal, &frames, &mut tr, 0) {
                Ok(outcome) => tr.finish(outcome),
                Err(reason) => fail(tr, reason),
            };
        }
        Ok(false) => {}
    }

    let chain = match backward_chain(adapter, &input, &goal, cfg, &mut tr) {
        ChainResult::Grounded(chain) => chain,
        ChainResult::NotGrounded => {
            return fail(tr, "backward chain not grounded within step budget".to_string())
        }
        ChainResult::Failed(reason) => return fail(tr, reason),
    };

    let cap = body_cap(cfg);
    let mut bodies = 0usize;
    let mut depth = 0usize;
    let mut targets: Vec<TargetState<A::Target>> = chain.into_iter().rev().collect();
    targets.push(TargetState::goal(goal.clone()));
    for tgt in targets {
        loop {
            match adapter.target_attained(&facts, &tgt.payload) {
                Ok(true) => break,
                Ok(false) => {}
                Err(e) => return fail(tr, format!("attainment check failed: {e}")),
            }
            bodies += 1;
            if bodies > cap {
                return tr.finish(Outcome::StepLimit);
            }
            let fw = match adapter.forward_step(&facts, &tgt.payload, &AvoidView::empty()) {
                Ok(fw) => fw,
                Err(e) => return fail(tr, format!("forward reasoner failed: {e}")),
            };
            let merged = match adapter.merge_facts(&facts, &fw.state) {
                Ok(m) => adapter.canonicalize_state(m),
                Err(e) => return fail(tr, format!("fact accumulation failed: {e}")),
            };
            depth += 1;
            tr.forward(
                depth,
                adapter.render_state(&merged),
                fw.note.clone(),
                0,
                fw.req.clone(),
                fw.raw.clone(),
            );
            facts = merged;
            frames.push(Frame {
                state: ProblemState::at_depth(facts.clone(), depth, fw.note),
                target: tgt.clone(),
            });
        }
    }

    match check(adapter, &facts, &goal, &mut tr, depth) {
        Err(reason) => fail(tr, reason),
        Ok(true) => match solved(adapter, &input, &goal, &frames, &mut tr, depth) {
            Ok(outcome) => tr.finish(outcome),
            Err(reason) => fail(tr, reason),
        },
        Ok(false) => fail(
            tr,
            "frozen-chain replay ended short of the goal".to_string(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::{EventDetail, EventKind};
    use crate::engines::mock::MockDag;

    fn cfg(max_steps: usize) -> EngineConfig {
        EngineConfig::new(max_steps, 4)
    }

    fn facts_of(trace: &SearchTrace) -> Vec<Vec<String>> {
        trace
            .events
            .iter()
            .filter_map(|e| match &e.detail {
                EventDetail::Forward { state, .. } => Some(
                    state
                        .split(';')
                        .filter(|s| !s.is_empty())
                        .map(str::to_string)
                        .collect(),
                ),
                _ => None,
            })
            .collect()
    }

    #[test]
    fn accumulates_facts_until_goal_is_established() {
        let adapter = MockDag::new(vec![("a", 2), ("b", 3), ("c", 5)], "c");
        let trace = run_rff_g(&adapter, MockDag::no_facts(), "c".to_string(), &cfg(10)).unwrap();
        assert_eq!(trace.outcome, Outcome::Solved("5".to_string()));
        assert_eq!(trace.visited_states, 3);
        // monotone accumulation: each forward state includes the previous one
        let snapshots = facts_of(&trace);
        for pair in snapshots.windows(2) {
            assert!(pair[0].iter().all(|f| pair[1].contains(f)));
        }
    }

    #[test]
    fn goal_given_in_input_solves_without_generator_calls() {
        let adapter = MockDag::new(vec![("a", 2)], "a");
        let input = MockDag::facts(&[("a", 2)]);
        let trace = run_rff_g(&adapter, input, "a".to_string(), &cfg(10)).unwrap();
        assert_eq!(trace.outcome, Outcome::Solved("2".to_string()));
        assert_eq!(trace.visited_states, 0);
        assert!(!trace
            .events
            .iter()
            .any(|e| matches!(e.kind, EventKind::BackwardStep | EventKind::ForwardStep)));
    }

    #[test]
    fn pair_mode_alternates_backward_and_forward() {
        let adapter = MockDag::new(vec![("a", 1), ("b", 2), ("c", 3)], "c");
        let trace = run_rff_g(&adapter, MockDag::no_facts(), "c".to_string(), &cfg(10)).unwrap();
        let kinds: Vec<EventKind> = trace
            .events
            .iter()
            .filter(|e| matches!(e.kind, EventKind::BackwardStep | EventKind::ForwardStep))
            .map(|e| e.kind)
            .collect();
        for (idx, kind) in kinds.iter().enumerate() {
            let expected = if idx % 2 == 0 {
                EventKind::BackwardStep
            } else {
                EventKind::ForwardStep
            };
            assert_eq!(*kind, expected);
        }
    }

    #[test]
    fn single_mode_front_loads_backward_steps_and_agrees_with_pair() {
        let adapter = MockDag::new(vec![("a", 1), ("b", 2), ("c", 3)], "c");
        let pair = run_rff_g(&adapter, MockDag::no_facts(), "c".to_string(), &cfg(10)).unwrap();
        let single_cfg = cfg(10).with_backward_mode(BackwardMode::Single);
        let single =
            run_rff_g(&adapter, MockDag::no_facts(), "c".to_string(), &single_cfg).unwrap();
        assert_eq!(pair.outcome, single.outcome);
        let last_backward = single
            .events
            .iter()
            .rposition(|e| e.kind == EventKind::BackwardStep)
            .unwrap();
        let first_forward = single
            .events
            .iter()
            .position(|e| e.kind == EventKind::ForwardStep)
            .unwrap();
        assert!(last_backward < first_forward);
    }

    #[test]
    fn ungroundable_backward_chain_is_unsolved() {
        let adapter = MockDag::new(vec![("a", 1), ("b", 2), ("c", 3)], "c").never_grounded();
        let single_cfg = cfg(2).with_backward_mode(BackwardMode::Single);
        let trace =
            run_rff_g(&adapter, MockDag::no_facts(), "c".to_string(), &single_cfg).unwrap();
        match trace.outcome {
            Outcome::Unsolved(reason) => assert!(reason.contains("not grounded")),
            other => panic!("expected unsolved, got {other:?}"),
        }
    }

    #[test]
    fn conflicting_merge_fails_the_run() {
        let adapter = MockDag::new(vec![("a", 1), ("b", 2)], "b").conflicting();
        let input = MockDag::facts(&[("a", 7)]);
        let trace = run_rff_g(&adapter, input, "b".to_string(), &cfg(10)).unwrap();
        match trace.outcome {
            Outcome::Unsolved(reason) => assert!(reason.contains("accumulation")),
            other => panic!("expected unsolved, got {other:?}"),
        }
    }

    #[test]
    fn step_limit_when_budget_is_too_small() {
        let adapter = MockDag::new(vec![("a", 1), ("b", 2), ("c", 3)], "c");
        let trace = run_rff_g(&adapter, MockDag::no_facts(), "c".to_string(), &cfg(2)).unwrap();
        assert_eq!(trace.outcome, Outcome::StepLimit);
    }
}
