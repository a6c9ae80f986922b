//! Deterministic max-automata: counter automata over infinite words whose
//! acceptance is a boolean combination of "the output stream of counter `c`
//! is bounded".
//!
//! The crate provides the automaton model and its boolean closure, exact
//! membership on lasso words, sound three-valued membership on ramp words,
//! the transfer-relation machinery behind emptiness, and a compiler from weak
//! MSO with the unbounding quantifier to max-automata.
//!
//! Everything here is `no_std` (with `alloc`); file formats and the command
//! line live in the `maxreg` crate.

#![no_std]

extern crate alloc;

pub mod acceptance;
pub mod automaton;
pub mod compiler;
pub mod corpus;
pub mod error;
pub mod effect;
pub mod emptiness;
pub mod fixtures;
pub mod graph;
pub mod logic;
pub mod membership;
pub mod muller;
pub mod ops;
pub mod transfer;
pub mod uauto;
pub mod word;

pub use acceptance::{Acceptance, Connective};
pub use automaton::{Configuration, Counter, CounterOp, Letter, MaxAutomaton, StateId, Transition};
pub use error::{Error, Result};
pub use word::{FiniteWord, InfiniteWord, LassoWord, RampWord};
