/// A snapshot of what is established at one depth of a run.
///
/// The payload is an opaque domain value in the owning adapter's canonical
/// form. Depth 0 is the initial state; `provenance` names the transition
/// that produced the snapshot ("given" for the initial one).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ProblemState<S> {
    pub payload: S,
    pub depth: usize,
    pub provenance: String,
}

impl<S> ProblemState<S> {
    pub fn initial(payload: S) -> Self {
        ProblemState {
            payload,
            depth: 0,
            provenance: "given".to_string(),
        }
    }

    pub fn at_depth(payload: S, depth: usize, provenance: impl Into<String>) -> Self {
        ProblemState {
            payload,
            depth,
            provenance: provenance.into(),
        }
    }
}

/// A snapshot of what must be reached, one depth of backward decomposition.
///
/// Every target below the root must carry a non-empty `transition_note`
/// describing the step that links it to its parent target; engines reject
/// adapters that omit it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TargetState<T> {
    pub payload: T,
    pub depth: usize,
    pub transition_note: String,
}

impl<T> TargetState<T> {
    pub fn goal(payload: T) -> Self {
        TargetState {
            payload,
            depth: 0,
            transition_note: String::new(),
        }
    }

    pub fn at_depth(payload: T, depth: usize, transition_note: impl Into<String>) -> Self {
        TargetState {
            payload,
            depth,
            transition_note: transition_note.into(),
        }
    }
}
