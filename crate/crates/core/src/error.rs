use alloc::string::String;

use thiserror::Error;

use crate::automaton::Counter;

/// Errors raised by the automaton, word and compiler operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("letter symbol {symbol} is not in the alphabet")]
    UnknownSymbolIndex { symbol: usize },

    #[error("letter carries {found} annotation tracks, automaton expects {expected}")]
    TrackMismatch { expected: usize, found: usize },

    #[error("no truth value given for atom B({0:?})")]
    MissingAtom(Counter),

    #[error("alphabets differ ({left} vs {right})")]
    AlphabetMismatch { left: String, right: String },

    #[error("track {index} out of range (automaton has {tracks} tracks)")]
    TrackOutOfRange { index: usize, tracks: usize },

    #[error("guarded output is not supported here")]
    GuardedOp,

    #[error("counter sets differ ({left} vs {right} counters)")]
    CounterMismatch { left: usize, right: usize },

    #[error("automaton is not deterministic and complete: {0}")]
    NotDeterministic(String),

    #[error("automaton is malformed: {0}")]
    Malformed(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unbound variable `{name}` at {line}:{column}")]
    UnboundVariable {
        name: String,
        line: usize,
        column: usize,
    },

    #[error("word spec: {0}")]
    WordSpec(String),

    #[error("position {position} out of range for a prefix of length {length}")]
    PositionOutOfRange { position: usize, length: usize },

    #[error("a d-trace needs at least one loop position")]
    EmptyTrace,

    #[error("state budget of {budget} exceeded while building {stage}")]
    StateBudget { budget: usize, stage: &'static str },

    #[error("{count} guard ids exceed the limit of {limit}")]
    TooManyGuards { count: usize, limit: usize },
}

pub type Result<T> = core::result::Result<T, Error>;
