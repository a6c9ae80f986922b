//! Small hand-built automata used by tests, the acceptance suite and the CLI.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::acceptance::Acceptance;
use crate::automaton::{Counter, CounterOp, MaxAutomaton, Transition};

/// The one-state automaton for "the distance between consecutive b's is
/// unbounded": `a` increments `c`, `b` outputs and resets it, and the run is
/// accepted when the outputs of `c` are unbounded.
pub fn gap() -> MaxAutomaton {
    let c = Counter(0);
    MaxAutomaton {
        alphabet: vec!['a', 'b'],
        tracks: 0,
        state_names: vec![String::from("s")],
        initial: 0,
        counter_names: vec![String::from("c")],
        delta: vec![
            Some(Transition::new(0, vec![CounterOp::Increment(c)])),
            Some(Transition::new(0, vec![CounterOp::Output(c), CounterOp::Reset(c)])),
        ],
        acceptance: Acceptance::unbounded(c),
    }
}

/// Accepts the words over {a, b} containing at least one `b`.
pub fn contains_b() -> MaxAutomaton {
    // state 0: no b yet, state 1: seen b; counter `hit` is visited in state 1
    let hit = Counter(0);
    let visit = vec![CounterOp::Increment(hit), CounterOp::Output(hit)];
    MaxAutomaton {
        alphabet: vec!['a', 'b'],
        tracks: 0,
        state_names: vec![String::from("none"), String::from("seen")],
        initial: 0,
        counter_names: vec![String::from("hit")],
        delta: vec![
            Some(Transition::new(0, Vec::new())),
            Some(Transition::new(1, visit.clone())),
            Some(Transition::new(1, visit.clone())),
            Some(Transition::new(1, visit)),
        ],
        acceptance: Acceptance::unbounded(hit),
    }
}

/// Accepts exactly `a^ω`.
pub fn all_a() -> MaxAutomaton {
    let dead = Counter(0);
    let visit = vec![CounterOp::Increment(dead), CounterOp::Output(dead)];
    MaxAutomaton {
        alphabet: vec!['a', 'b'],
        tracks: 0,
        state_names: vec![String::from("ok"), String::from("dead")],
        initial: 0,
        counter_names: vec![String::from("dead")],
        delta: vec![
            Some(Transition::new(0, Vec::new())),
            Some(Transition::new(1, visit.clone())),
            Some(Transition::new(1, visit.clone())),
            Some(Transition::new(1, visit)),
        ],
        acceptance: Acceptance::Bounded(dead),
    }
}

/// Single state, no counters, constant acceptance.
pub fn constant(accept: bool) -> MaxAutomaton {
    MaxAutomaton::trivial(
        vec!['a', 'b'],
        0,
        if accept { Acceptance::True } else { Acceptance::False },
    )
}
