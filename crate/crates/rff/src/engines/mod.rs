//! The two generic search loops.
//!
//! [`run_rff_t`] explores a search tree with per-depth avoid sets and
//! verification-driven backtracking. [`run_rff_g`] accumulates facts
//! monotonically until the goal is established. Both support two backward
//! strategies: `Pair` interleaves one backward step per forward step;
//! `Single` freezes the whole backward chain up front and replays forward
//! against it.

mod rff_g;
mod rff_t;

pub use rff_g::run_rff_g;
pub use rff_t::run_rff_t;

use crate::core::{
    AvoidView, BackwardMode, DomainAdapter, EngineConfig, TargetState, TraceBuilder,
};

/// Returns a copy of `cfg` with the backward strategy replaced.
pub fn set_backward_mode(cfg: &EngineConfig, mode: BackwardMode) -> EngineConfig {
    cfg.clone().with_backward_mode(mode)
}

/// Bound on trace growth per (depth, attempt) unit; together with the depth
/// and width limits it caps every run at `max_steps * width * BRANCH_CAP`
/// loop bodies regardless of adapter behavior.
pub(crate) const BRANCH_CAP: usize = 64;

pub(crate) fn run_header<A: DomainAdapter>(adapter: &A, engine: &str, cfg: &EngineConfig) -> String {
    format!("domain={} engine={} {}", adapter.domain(), engine, cfg.echo())
}

pub(crate) fn body_cap(cfg: &EngineConfig) -> usize {
    cfg.max_steps
        .saturating_mul(cfg.width)
        .saturating_mul(BRANCH_CAP)
}

/// Outcome of the up-front decomposition phase in single mode.
pub(crate) enum ChainResult<T> {
    /// The chain reached facts available in the input, deepest target last.
    Grounded(Vec<TargetState<T>>),
    /// The step budget ran out before the chain grounded.
    NotGrounded,
    Failed(String),
}

/// Runs the backward decomposition up front: repeated last-step calls from
/// the initial state, at most `max_steps` of them, until the generator
/// reports a grounded target.
pub(crate) fn backward_chain<A: DomainAdapter>(
    adapter: &A,
    input: &A::State,
    goal: &A::Target,
    cfg: &EngineConfig,
    tr: &mut TraceBuilder,
) -> ChainResult<A::Target> {
    let mut chain: Vec<TargetState<A::Target>> = Vec::new();
    let mut current = goal.clone();
    for k in 1..=cfg.max_steps {
        match adapter.last_step(input, &current, &AvoidView::empty()) {
            Ok(bw) => {
                if bw.note.trim().is_empty() {
                    return ChainResult::Failed(
                        "last step generator omitted the explicit transition".to_string(),
                    );
                }
                let target = adapter.canonicalize_target(bw.target);
                tr.backward(
                    k,
                    adapter.render_target(&target),
                    bw.note.clone(),
                    bw.req.clone(),
                    bw.raw.clone(),
                );
                chain.push(TargetState::at_depth(target.clone(), k, bw.note));
                if bw.grounded {
                    return ChainResult::Grounded(chain);
                }
                current = target;
            }
            Err(e) if e.is_exhausted() => return ChainResult::NotGrounded,
            Err(e) => return ChainResult::Failed(format!("last step generator failed: {e}")),
        }
    }
    ChainResult::NotGrounded
}

#[cfg(test)]
pub(crate) mod mock;
