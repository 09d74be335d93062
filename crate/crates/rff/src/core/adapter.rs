use super::avoid::AvoidView;
use super::error::AdapterError;
use super::state::{ProblemState, TargetState};

/// Which engine family an adapter is built for.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Capability {
    /// The solution is one branch of a search tree; the adapter must provide
    /// `verify` so the engine can validate complete paths and backtrack.
    TreeSearch,
    /// The solution is a DAG of facts that only grows; `verify` is never
    /// called, `merge_facts` must be provided instead.
    DagAccumulation,
}

/// Result of one backward decomposition: the pre-target plus the explicit
/// transition that links it to the target it was derived from.
#[derive(Clone, Debug)]
pub struct BackwardOutcome<T> {
    pub target: T,
    /// The transition, rendered. Must be non-empty below the root.
    pub note: String,
    /// Set when the target is directly establishable from the initial state;
    /// only consulted by single-mode backward chaining.
    pub grounded: bool,
    /// Hash of the request that produced the reply, when LLM-backed.
    pub req: Option<String>,
    /// Raw model reply when LLM-backed.
    pub raw: Option<String>,
}

impl<T> BackwardOutcome<T> {
    pub fn new(target: T, note: impl Into<String>) -> Self {
        BackwardOutcome {
            target,
            note: note.into(),
            grounded: false,
            req: None,
            raw: None,
        }
    }

    pub fn grounded(mut self, grounded: bool) -> Self {
        self.grounded = grounded;
        self
    }
}

/// Result of one forward step. For tree search `state` is the successor
/// state; for DAG accumulation it is the newly derived facts, which the
/// engine merges into the running state.
#[derive(Clone, Debug)]
pub struct ForwardOutcome<S> {
    pub state: S,
    /// Provenance of the step, e.g. the move rendered as text.
    pub note: String,
    /// Hash of the request that produced the reply, when LLM-backed.
    pub req: Option<String>,
    /// Raw model reply when LLM-backed.
    pub raw: Option<String>,
}

impl<S> ForwardOutcome<S> {
    pub fn new(state: S, note: impl Into<String>) -> Self {
        ForwardOutcome {
            state,
            note: note.into(),
            req: None,
            raw: None,
        }
    }
}

/// Verifier decision over a complete path.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    /// The path is correct; the run is solved.
    Valid,
    /// The path is wrong; depth `j` must be revisited. The engine condemns
    /// the `(state, target)` pair at `j` and re-derives that depth.
    Revisit(usize),
}

/// One depth of a run: the state reached and the target in force there.
#[derive(Clone, Debug)]
pub struct Frame<S, T> {
    pub state: ProblemState<S>,
    pub target: TargetState<T>,
}

/// Everything a verifier or output function may look at: the original
/// input, the goal, and the frame stack from depth 0 to the frontier.
#[derive(Clone, Copy, Debug)]
pub struct SearchPath<'a, S, T> {
    pub input: &'a S,
    pub goal: &'a T,
    pub frames: &'a [Frame<S, T>],
}

impl<'a, S, T> SearchPath<'a, S, T> {
    pub fn frontier(&self) -> &'a Frame<S, T> {
        self.frames
            .last()
            .expect("a search path always holds the depth-0 frame")
    }

    pub fn depth(&self) -> usize {
        self.frames.len() - 1
    }
}

/// The five operations a problem family plugs into the engines, plus the
/// canonical-form duties that make avoid sets and traces exact.
///
/// Canonicalization belongs to the adapter because only the domain knows
/// semantic equality; `canonicalize_*` must be idempotent and `*_key` must
/// map equal semantic values to identical byte strings, deterministically
/// across runs.
pub trait DomainAdapter {
    type State: Clone;
    type Target: Clone;

    fn capability(&self) -> Capability;

    /// Short domain name embedded in trace headers.
    fn domain(&self) -> &'static str;

    fn canonicalize_state(&self, state: Self::State) -> Self::State;
    fn canonicalize_target(&self, target: Self::Target) -> Self::Target;

    /// Stable byte string; equal semantic values map to identical keys.
    fn state_key(&self, state: &Self::State) -> String;
    fn target_key(&self, target: &Self::Target) -> String;

    /// Human-readable forms recorded in traces.
    fn render_state(&self, state: &Self::State) -> String;
    fn render_target(&self, target: &Self::Target) -> String;

    /// Backward step: decompose `target` into the state one step before it.
    /// `avoid` holds the failed attempts at the depth being produced, so a
    /// deterministic adapter can steer to fresh candidates; returns
    /// `Exhausted` when no viable pre-target remains.
    fn last_step(
        &self,
        state: &Self::State,
        target: &Self::Target,
        avoid: &AvoidView<'_>,
    ) -> Result<BackwardOutcome<Self::Target>, AdapterError>;

    /// Forward step: advance `state` one step toward `target`, never
    /// reproducing a pair recorded in `avoid`. Returns `Exhausted` when
    /// every legal step is avoided.
    fn forward_step(
        &self,
        state: &Self::State,
        target: &Self::Target,
        avoid: &AvoidView<'_>,
    ) -> Result<ForwardOutcome<Self::State>, AdapterError>;

    /// Termination test: the state coincides with the target or sits one
    /// operation away (tree search), or the goal information is already
    /// established (DAG accumulation).
    fn state_check(&self, state: &Self::State, target: &Self::Target)
        -> Result<bool, AdapterError>;

    /// End-of-path validation for tree search. DAG adapters may leave this
    /// unimplemented; the accumulation engine never calls it.
    fn verify(
        &self,
        _path: &SearchPath<'_, Self::State, Self::Target>,
    ) -> Result<Verdict, AdapterError> {
        Err(AdapterError::Unsupported("verify"))
    }

    /// Renders the final answer from a solved path.
    fn output(&self, path: &SearchPath<'_, Self::State, Self::Target>)
        -> Result<String, AdapterError>;

    /// Merges newly derived facts into the accumulated state (RFF-G only).
    /// Must fail rather than alter an existing fact, so accumulation stays
    /// monotone.
    fn merge_facts(
        &self,
        _base: &Self::State,
        _delta: &Self::State,
    ) -> Result<Self::State, AdapterError> {
        Err(AdapterError::Unsupported("merge_facts"))
    }

    /// Exact attainment test used when replaying a frozen backward chain in
    /// single mode. Defaults to `state_check`.
    fn target_attained(
        &self,
        state: &Self::State,
        target: &Self::Target,
    ) -> Result<bool, AdapterError> {
        self.state_check(state, target)
    }
}
