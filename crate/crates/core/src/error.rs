use thiserror::Error;

use crate::automaton::{StateId, Transition};

/// Errors raised by structural operations on an [`Automaton`](crate::Automaton).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AutomatonError {
    #[error("unknown state {0}")]
    UnknownState(StateId),
    #[error("state {0} is the source or the sink and cannot be removed")]
    ProtectedState(StateId),
    #[error("transition {0} would create a cycle")]
    Cycle(Transition),
    #[error("the empty word is not allowed")]
    EmptyWord,
}

/// A violated structural invariant, reported by [`Automaton::check_structure`](crate::Automaton::check_structure).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("the source has incoming transitions")]
    SourceHasFanIn,
    #[error("the sink has outgoing transitions")]
    SinkHasFanOut,
    #[error("the transition graph contains a cycle through state {0}")]
    Cyclic(StateId),
    #[error("state {0} is not reachable from the source")]
    Unreachable(StateId),
    #[error("state {0} does not reach the sink")]
    Dead(StateId),
}
