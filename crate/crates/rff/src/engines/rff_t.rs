//! Tree-search engine with verification-driven backtracking.

use crate::core::{
    AdapterError, AvoidEntry, AvoidSet, BackwardMode, Capability, ConfigError, DomainAdapter,
    EngineConfig, Frame, Outcome, ProblemState, SearchPath, SearchTrace, TargetState,
    TraceBuilder, Verdict,
};

use super::{backward_chain, body_cap, run_header, ChainResult};

/// Runs the tree-search loop over a [`Capability::TreeSearch`] adapter.
///
/// Starting from the input state and the goal target, each depth is produced
/// by one backward decomposition (the new, nearer target plus its explicit
/// transition) and one forward step aimed at it. When the state check fires,
/// the whole path is verified; a failed verification condemns the
/// `(state, target)` pair at the depth the verifier names, records it in the
/// avoid set, and re-derives that depth. A depth that has seen `width`
/// distinct attempts is exhausted and the backtrack escalates one level
/// shallower; exhausting the root ends the run as `Unsolved`. The depth
/// counter is capped at `max_steps`; exceeding it ends the run as
/// `StepLimit`.
///
/// Adapter failures never panic or abort the caller: they surface as an
/// `Unsolved` outcome carrying the reason.
pub fn run_rff_t<A: DomainAdapter>(
    adapter: &A,
    input: A::State,
    goal: A::Target,
    cfg: &EngineConfig,
) -> Result<SearchTrace, ConfigError> {
    cfg.validate()?;
    if adapter.capability() != Capability::TreeSearch {
        return Err(ConfigError::CapabilityMismatch {
            required: Capability::TreeSearch,
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

/// Condemns the attempt at depth `j`: emits the backtrack event, records the
/// pair in the avoid set, truncates deeper frames, and clears deeper avoid
/// entries. While recording at a depth would reach `width` distinct failures
/// there, the target escalates one level shallower, so no depth ever makes
/// more than `width` attempts. Returns false when escalation reaches the
/// root, i.e. the search space is exhausted.
fn condemn<A: DomainAdapter>(
    adapter: &A,
    frames: &mut Vec<Frame<A::State, A::Target>>,
    avoid: &mut AvoidSet,
    tr: &mut TraceBuilder,
    cfg: &EngineConfig,
    mut j: usize,
) -> bool {
    while j >= 1 && avoid.len_at(j) + 1 >= cfg.width {
        j -= 1;
    }
    if j == 0 {
        return false;
    }
    let condemned = &frames[j];
    let entry = AvoidEntry {
        state_key: adapter.state_key(&condemned.state.payload),
        target_key: adapter.target_key(&condemned.target.payload),
        state_text: adapter.render_state(&condemned.state.payload),
        target_text: adapter.render_target(&condemned.target.payload),
    };
    tr.backtrack(
        frames.len(),
        j,
        entry.state_text.clone(),
        entry.target_text.clone(),
    );
    avoid.record(j, entry);
    frames.truncate(j);
    avoid.clear_deeper(j);
    true
}

fn pair_mode<A: DomainAdapter>(
    adapter: &A,
    input: A::State,
    goal: A::Target,
    cfg: &EngineConfig,
) -> SearchTrace {
    let mut tr = TraceBuilder::new(run_header(adapter, "rff-t", cfg));
    let input = adapter.canonicalize_state(input);
    let goal = adapter.canonicalize_target(goal);
    let mut frames: Vec<Frame<A::State, A::Target>> = vec![Frame {
        state: ProblemState::initial(input.clone()),
        target: TargetState::goal(goal.clone()),
    }];
    let mut avoid = AvoidSet::new();

    // Degenerate inputs are checked before the first backward step.
    match check_and_maybe_finish(adapter, &input, &goal, &frames, &mut tr, 0) {
        CheckOutcome::Finished(trace_outcome) => return tr.finish(trace_outcome),
        CheckOutcome::Failed(reason) => return fail(tr, reason),
        CheckOutcome::Revisit(_) | CheckOutcome::Continue => {}
    }

    let cap = body_cap(cfg);
    let mut bodies = 0usize;
    loop {
        let depth = frames.len();
        if depth > cfg.max_steps {
            return tr.finish(Outcome::StepLimit);
        }
        bodies += 1;
        if bodies > cap {
            return tr.finish(Outcome::StepLimit);
        }

        let (cur_state, cur_target) = {
            let f = frames.last().expect("root frame present");
            (f.state.payload.clone(), f.target.payload.clone())
        };

        // Backward: decompose the current target one step.
        let bw = match adapter.last_step(&cur_state, &cur_target, &avoid.view(depth)) {
            Ok(bw) => bw,
            Err(e) if e.is_exhausted() => {
                if condemn(adapter, &mut frames, &mut avoid, &mut tr, cfg, depth - 1) {
                    continue;
                }
                return fail(tr, "search space exhausted".to_string());
            }
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
            depth,
            adapter.render_target(&target),
            bw.note.clone(),
            bw.req.clone(),
            bw.raw.clone(),
        );

        // Forward: one step toward the fresh target, steering around
        // avoided attempts.
        let fw = match adapter.forward_step(&cur_state, &target, &avoid.view(depth)) {
            Ok(fw) => fw,
            Err(e) if e.is_exhausted() => {
                if condemn(adapter, &mut frames, &mut avoid, &mut tr, cfg, depth - 1) {
                    continue;
                }
                return fail(tr, "search space exhausted".to_string());
            }
            Err(e) => return fail(tr, format!("forward reasoner failed: {e}")),
        };
        let state = adapter.canonicalize_state(fw.state);
        if avoid
            .view(depth)
            .contains(&adapter.state_key(&state), &adapter.target_key(&target))
        {
            return fail(tr, "forward step repeated an avoided attempt".to_string());
        }
        tr.forward(
            depth,
            adapter.render_state(&state),
            fw.note.clone(),
            avoid.len_at(depth),
            fw.req.clone(),
            fw.raw.clone(),
        );
        frames.push(Frame {
            state: ProblemState::at_depth(state, depth, fw.note),
            target: TargetState::at_depth(target, depth, bw.note),
        });

        match check_and_maybe_finish(
            adapter,
            &input,
            &goal,
            &frames,
            &mut tr,
            depth,
        ) {
            CheckOutcome::Finished(outcome) => return tr.finish(outcome),
            CheckOutcome::Failed(reason) => return fail(tr, reason),
            CheckOutcome::Continue => {}
            CheckOutcome::Revisit(j) => {
                let j = j.clamp(1, depth);
                if condemn(adapter, &mut frames, &mut avoid, &mut tr, cfg, j) {
                    continue;
                }
                return fail(tr, "search space exhausted".to_string());
            }
        }
    }
}

enum CheckOutcome {
    /// State check passed and the verifier accepted: run is over.
    Finished(Outcome),
    /// State check passed but the verifier named a depth to revisit.
    Revisit(usize),
    /// State check did not pass; keep searching.
    Continue,
    Failed(String),
}

fn check_and_maybe_finish<A: DomainAdapter>(
    adapter: &A,
    input: &A::State,
    goal: &A::Target,
    frames: &[Frame<A::State, A::Target>],
    tr: &mut TraceBuilder,
    depth: usize,
) -> CheckOutcome {
    let frontier = frames.last().expect("root frame present");
    let passed = match adapter.state_check(&frontier.state.payload, &frontier.target.payload) {
        Ok(p) => p,
        Err(e) => return CheckOutcome::Failed(format!("state check failed: {e}")),
    };
    tr.check(
        depth,
        adapter.render_state(&frontier.state.payload),
        adapter.render_target(&frontier.target.payload),
        passed,
    );
    if !passed {
        return CheckOutcome::Continue;
    }
    let path = SearchPath {
        input,
        goal,
        frames,
    };
    match adapter.verify(&path) {
        Ok(Verdict::Valid) => {
            tr.verify(depth, None);
            match adapter.output(&path) {
                Ok(answer) => {
                    tr.output(depth, answer.clone());
                    CheckOutcome::Finished(Outcome::Solved(answer))
                }
                Err(e) => CheckOutcome::Failed(format!("output failed: {e}")),
            }
        }
        Ok(Verdict::Revisit(j)) => {
            tr.verify(depth, Some(j));
            if depth == 0 {
                // Nothing to condemn before the first step; keep searching.
                return CheckOutcome::Continue;
            }
            CheckOutcome::Revisit(j)
        }
        Err(e) => CheckOutcome::Failed(format!("verifier failed: {e}")),
    }
}

fn single_mode<A: DomainAdapter>(
    adapter: &A,
    input: A::State,
    goal: A::Target,
    cfg: &EngineConfig,
) -> SearchTrace {
    let mut tr = TraceBuilder::new(run_header(adapter, "rff-t", cfg));
    let input = adapter.canonicalize_state(input);
    let goal = adapter.canonicalize_target(goal);
    let mut frames: Vec<Frame<A::State, A::Target>> = vec![Frame {
        state: ProblemState::initial(input.clone()),
        target: TargetState::goal(goal.clone()),
    }];

    match check_and_maybe_finish(adapter, &input, &goal, &frames, &mut tr, 0) {
        CheckOutcome::Finished(outcome) => return tr.finish(outcome),
        CheckOutcome::Failed(reason) => return fail(tr, reason),
        CheckOutcome::Revisit(_) | CheckOutcome::Continue => {}
    }

    let chain = match backward_chain(adapter, &input, &goal, cfg, &mut tr) {
        ChainResult::Grounded(chain) => chain,
        ChainResult::NotGrounded => {
            return fail(tr, "backward chain not grounded within step budget".to_string())
        }
        ChainResult::Failed(reason) => return fail(tr, reason),
    };

    // Forward phase: replay toward each frozen target in turn, ending with
    // the goal itself.
    let cap = body_cap(cfg);
    let mut bodies = 0usize;
    let mut state = input.clone();
    let mut depth = 0usize;
    let mut targets: Vec<TargetState<A::Target>> = chain.into_iter().rev().collect();
    targets.push(TargetState::goal(goal.clone()));
    for tgt in targets {
        loop {
            match adapter.target_attained(&state, &tgt.payload) {
                Ok(true) => break,
                Ok(false) => {}
                Err(e) => return fail(tr, format!("attainment check failed: {e}")),
            }
            bodies += 1;
            if bodies > cap {
                return tr.finish(Outcome::StepLimit);
            }
            let fw = match adapter.forward_step(&state, &tgt.payload, &crate::core::AvoidView::empty())
            {
                Ok(fw) => fw,
                Err(AdapterError::Exhausted(_)) => {
                    return fail(tr, "forward replay stuck against frozen chain".to_string())
                }
                Err(e) => return fail(tr, format!("forward reasoner failed: {e}")),
            };
            state = adapter.canonicalize_state(fw.state);
            depth += 1;
            tr.forward(
                depth,
                adapter.render_state(&state),
                fw.note.clone(),
                0,
                fw.req.clone(),
                fw.raw.clone(),
            );
            frames.push(Frame {
                state: ProblemState::at_depth(state.clone(), depth, fw.note),
                target: tgt.clone(),
            });
        }
    }

    // Replace the frontier target with the goal so the final check and the
    // verifier judge the path against what was originally asked.
    if let Some(last) = frames.last_mut() {
        last.target = TargetState::goal(goal.clone());
    }
    match check_and_maybe_finish(adapter, &input, &goal, &frames, &mut tr, depth) {
        CheckOutcome::Finished(outcome) => tr.finish(outcome),
        CheckOutcome::Failed(reason) => fail(tr, reason),
        CheckOutcome::Revisit(_) => fail(
            tr,
            "frozen-chain replay produced a path the verifier rejected".to_string(),
        ),
        CheckOutcome::Continue => fail(
            tr,
            "frozen-chain replay ended short of the goal".to_string(),
        ),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::core::EventKind;
    use crate::engines::mock::MockTree;

    fn cfg(max_steps: usize, width: usize) -> EngineConfig {
        EngineConfig::new(max_steps, width)
    }

    #[test]
    fn degenerate_input_solves_with_zero_forward_steps() {
        let adapter = MockTree::with_verdicts(vec![Verdict::Valid]);
        let trace = run_rff_t(&adapter, 5, 5, &cfg(5, 3)).unwrap();
        assert!(trace.outcome.is_solved());
        assert_eq!(trace.visited_states, 0);
        assert_eq!(trace.forward_step_count(), 0);
    }

    #[test]
    fn backtrack_records_pair_and_steers_retry() {
        // First meet is condemned at depth 1; the retry must avoid the
        // recorded pair and the second attempt verifies.
        let adapter = MockTree::with_verdicts(vec![Verdict::Revisit(1), Verdict::Valid]);
        let trace = run_rff_t(&adapter, 0, 2, &cfg(5, 5)).unwrap();
        assert!(trace.outcome.is_solved(), "outcome: {:?}", trace.outcome);
        assert_eq!(trace.visited_states, 2);
        let backtracks: Vec<_> = trace
            .events
            .iter()
            .filter(|e| e.kind == EventKind::Backtrack)
            .collect();
        assert_eq!(backtracks.len(), 1);
        // the retry consults an avoid set holding the condemned pair
        let retry_forward = trace
            .events
            .iter()
            .filter(|e| e.kind == EventKind::ForwardStep)
            .nth(1)
            .unwrap();
        match &retry_forward.detail {
            crate::core::EventDetail::Forward {
                avoid_len, state, ..
            } => {
                assert_eq!(*avoid_len, 1);
                assert_eq!(state, "2");
            }
            other => panic!("unexpected detail {other:?}"),
        }
    }

    #[test]
    fn width_bounds_attempts_per_depth() {
        // width 2: two failed attempts at depth 1 exhaust the depth, the
        // escalation reaches the root, and the run is unsolved.
        let adapter =
            MockTree::with_verdicts(vec![Verdict::Revisit(1), Verdict::Revisit(1)]);
        let trace = run_rff_t(&adapter, 0, 2, &cfg(5, 2)).unwrap();
        assert!(matches!(trace.outcome, Outcome::Unsolved(_)));
        assert_eq!(trace.visited_states, 2, "exactly width attempts are made");
    }

    #[test]
    fn verifier_revisit_is_clamped_to_valid_depths() {
        let adapter = MockTree::with_verdicts(vec![Verdict::Revisit(99), Verdict::Valid]);
        let trace = run_rff_t(&adapter, 0, 2, &cfg(5, 5)).unwrap();
        assert!(trace.outcome.is_solved());
        let bt = trace
            .events
            .iter()
            .find(|e| e.kind == EventKind::Backtrack)
            .unwrap();
        match bt.detail {
            crate::core::EventDetail::Backtrack { to, .. } => assert_eq!(to, 1),
            _ => unreachable!(),
        }
    }

    #[test]
    fn step_limit_fires_when_depth_exceeds_max_steps() {
        let adapter = MockTree::with_verdicts(vec![]);
        let trace = run_rff_t(&adapter, 0, 100, &cfg(3, 5)).unwrap();
        assert_eq!(trace.outcome, Outcome::StepLimit);
    }

    #[test]
    fn forward_exhaustion_without_alternatives_is_unsolved() {
        // Only one forward candidate exists; once it is condemned the depth
        // cannot be reproduced and the root is exhausted.
        let adapter = MockTree::with_verdicts(vec![Verdict::Revisit(1)]).with_branching(1);
        let trace = run_rff_t(&adapter, 0, 2, &cfg(5, 5)).unwrap();
        assert!(matches!(trace.outcome, Outcome::Unsolved(_)));
    }

    #[test]
    fn missing_transition_note_fails_the_run() {
        let adapter = MockTree::with_verdicts(vec![]).with_empty_notes();
        let trace = run_rff_t(&adapter, 0, 2, &cfg(5, 5)).unwrap();
        match trace.outcome {
            Outcome::Unsolved(reason) => assert!(reason.contains("transition")),
            other => panic!("expected unsolved, got {other:?}"),
        }
    }

    #[test]
    fn fixed_seed_runs_serialize_identically() {
        let adapter = MockTree::with_verdicts(vec![Verdict::Revisit(1), Verdict::Valid]);
        let a = run_rff_t(&adapter, 0, 2, &cfg(5, 5)).unwrap().serialize();
        let adapter = MockTree::with_verdicts(vec![Verdict::Revisit(1), Verdict::Valid]);
        let b = run_rff_t(&adapter, 0, 2, &cfg(5, 5)).unwrap().serialize();
        assert_eq!(a, b);
    }

    #[test]
    fn config_and_capability_are_validated() {
        let adapter = MockTree::with_verdicts(vec![]);
        assert!(run_rff_t(&adapter, 0, 1, &cfg(0, 5)).is_err());
        // a tree adapter cannot drive the accumulation engine
        let err = crate::engines::run_rff_g(&adapter, 0, 1, &cfg(5, 5));
        assert!(matches!(
            err,
            Err(ConfigError::CapabilityMismatch { .. })
        ));
    }
}
