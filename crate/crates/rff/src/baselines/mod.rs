//! Baselines under the same visited-state accounting as the engines: a
//! single forward chain with no target guidance, and a breadth-limited
//! forward tree search. One visited state is one forward expansion, the
//! rule shared with the engines, so cross-method search-cost comparisons
//! are like for like.

use crate::core::{
    AdapterError, Capability, ConfigError, DomainAdapter, EngineConfig, ForwardOutcome, Frame,
    Outcome, ProblemState, SearchPath, SearchTrace, TargetState, TraceBuilder, Verdict,
};

/// A domain that can produce one complete answer attempt in a single
/// forward chain.
pub trait CotAdapter: DomainAdapter {
    /// The whole chain counts as one forward expansion; its provenance note
    /// should describe every step taken.
    fn full_chain(
        &self,
        input: &Self::State,
        goal: &Self::Target,
    ) -> Result<ForwardOutcome<Self::State>, AdapterError>;
}

/// A domain that can enumerate forward expansions and score states for beam
/// pruning.
pub trait ForwardSearchAdapter: DomainAdapter {
    fn expansions(
        &self,
        state: &Self::State,
    ) -> Result<Vec<ForwardOutcome<Self::State>>, AdapterError>;

    /// Larger scores survive pruning; ties break on canonical state keys.
    fn beam_score(&self, state: &Self::State, goal: &Self::Target)
        -> Result<i64, AdapterError>;

    /// A leaf admits no further expansion.
    fn is_leaf(&self, state: &Self::State) -> bool;
}

/// One forward chain, no target guidance, no backtracking: exactly one
/// forward expansion per run, solved only if the chain verifies.
pub fn run_cot<A: CotAdapter>(
    adapter: &A,
    input: A::State,
    goal: A::Target,
    cfg: &EngineConfig,
) -> Result<SearchTrace, ConfigError> {
    cfg.validate()?;
    let mut tr = TraceBuilder::new(format!(
        "domain={} engine=cot {}",
        adapter.domain(),
        cfg.echo()
    ));
    let input = adapter.canonicalize_state(input);
    let goal = adapter.canonicalize_target(goal);
    let mut frames = vec![Frame {
        state: ProblemState::initial(input.clone()),
        target: TargetState::goal(goal.clone()),
    }];

    let fw = match adapter.full_chain(&input, &goal) {
        Ok(fw) => fw,
        Err(e) => return Ok(tr.finish(Outcome::Unsolved(format!("chain failed: {e}")))),
    };
    let state = adapter.canonicalize_state(fw.state);
    tr.forward(
        1,
        adapter.render_state(&state),
        fw.note.clone(),
        0,
        fw.req.clone(),
        fw.raw.clone(),
    );
    frames.push(Frame {
        state: ProblemState::at_depth(state, 1, fw.note),
        target: TargetState::goal(goal.clone()),
    });

    Ok(finish_if_solved(adapter, &input, &goal, &frames, tr, 1))
}

/// Shared wrap-up: check the frontier, verify when the adapter supports it,
/// and emit the output; anything short of a verified solution is unsolved.
fn finish_if_solved<A: DomainAdapter>(
    adapter: &A,
    input: &A::State,
    goal: &A::Target,
    frames: &[Frame<A::State, A::Target>],
    mut tr: TraceBuilder,
    depth: usize,
) -> SearchTrace {
    let frontier = frames.last().expect("frames never empty");
    let passed = match adapter.state_check(&frontier.state.payload, &frontier.target.payload) {
        Ok(p) => p,
        Err(e) => return tr.finish(Outcome::Unsolved(format!("state check failed: {e}"))),
    };
    tr.check(
        depth,
        adapter.render_state(&frontier.state.payload),
        adapter.render_target(&frontier.target.payload),
        passed,
    );
    if !passed {
        return tr.finish(Outcome::Unsolved("chain missed the goal".to_string()));
    }
    let path = SearchPath {
        input,
        goal,
        frames,
    };
    if adapter.capability() == Capability::TreeSearch {
        match adapter.verify(&path) {
            Ok(Verdict::Valid) => {}
            Ok(Verdict::Revisit(_)) => {
                return tr.finish(Outcome::Unsolved("chain does not verify".to_string()))
            }
            Err(e) => return tr.finish(Outcome::Unsolved(format!("verifier failed: {e}"))),
        }
        tr.verify(depth, None);
    }
    match adapter.output(&path) {
        Ok(answer) => {
            tr.output(depth, answer.clone());
            tr.finish(Outcome::Solved(answer))
        }
        Err(e) => tr.finish(Outcome::Unsolved(format!("output failed: {e}"))),
    }
}

/// Breadth-limited forward search with no backward guidance. Every
/// expansion is one visited state; at most `beam` states survive each
/// layer, ranked by the adapter's beam score. Solved when a leaf passes the
/// state check and (for tree-search adapters) the verifier.
pub fn run_forward_tree<A: ForwardSearchAdapter>(
    adapter: &A,
    input: A::State,
    goal: A::Target,
    cfg: &EngineConfig,
    beam: usize,
) -> Result<SearchTrace, ConfigError> {
    cfg.validate()?;
    if beam == 0 {
        return Err(ConfigError::ZeroWidth);
    }
    let mut tr = TraceBuilder::new(format!(
        "domain={} engine=forward-tree b={} {}",
        adapter.domain(),
        beam,
        cfg.echo()
    ));
    let input = adapter.canonicalize_state(input);
    let goal = adapter.canonicalize_target(goal);
    let root = Frame {
        state: ProblemState::initial(input.clone()),
        target: TargetState::goal(goal.clone()),
    };

    if adapter.is_leaf(&input) {
        let frames = vec![root];
        return Ok(finish_if_solved(adapter, &input, &goal, &frames, tr, 0));
    }

    let mut frontier: Vec<A::State> = vec![input.clone()];
    for layer in 1..=cfg.max_steps {
        // expand every frontier state; each child is one visited state
        let mut children: Vec<(String, A::State, String)> = Vec::new();
        for state in &frontier {
            let expansions = match adapter.expansions(state) {
                Ok(ex) => ex,
                Err(e) => {
                    return Ok(tr.finish(Outcome::Unsolved(format!("expansion failed: {e}"))))
                }
            };
            for fw in expansions {
                let child = adapter.canonicalize_state(fw.state);
                tr.forward(
                    layer,
                    adapter.render_state(&child),
                    fw.note.clone(),
                    0,
                    fw.req,
                    fw.raw,
                );
                children.push((adapter.state_key(&child), child, fw.note));
            }
        }
        // duplicates cost their expansions but are explored once
        children.sort_by(|a, b| a.0.cmp(&b.0));
        children.dedup_by(|a, b| a.0 == b.0);

        let mut survivors: Vec<(i64, String, A::State)> = Vec::new();
        for (key, child, note) in children {
            if adapter.is_leaf(&child) {
                let frames = vec![
                    root.clone(),
                    Frame {
                        state: ProblemState::at_depth(child.clone(), layer, note.clone()),
                        target: TargetState::goal(goal.clone()),
                    },
                ];
                let solved = match adapter.state_check(&child, &goal) {
                    Ok(p) => p,
                    Err(e) => {
                        return Ok(tr.finish(Outcome::Unsolved(format!(
                            "state check failed: {e}"
                        ))))
                    }
                };
                if solved {
                    return Ok(finish_if_solved(adapter, &input, &goal, &frames, tr, layer));
                }
            } else {
                let score = match adapter.beam_score(&child, &goal) {
                    Ok(s) => s,
                    Err(e) => {
                        return Ok(tr.finish(Outcome::Unsolved(format!(
                            "beam scoring failed: {e}"
                        ))))
                    }
                };
                survivors.push((score, key, child));
            }
        }
        if survivors.is_empty() {
            return Ok(tr.finish(Outcome::Unsolved(
                "forward tree exhausted without a solution".to_string(),
            )));
        }
        survivors.sort_by(|a, b| b.0.cmp(&a.0).then_with(|| a.1.cmp(&b.1)));
        survivors.truncate(beam);
        frontier = survivors.into_iter().map(|(_, _, s)| s).collect();
    }
    Ok(tr.finish(Outcome::StepLimit))
}
