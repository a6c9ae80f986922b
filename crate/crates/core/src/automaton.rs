//! Deterministic max-automata and their finite-prefix semantics.
//!
//! A max-automaton is a complete deterministic automaton whose transitions
//! carry sequences of counter operations. Counters are never read by the
//! control; they only feed the output streams that the acceptance formula
//! inspects ("the stream of counter `c` is bounded").

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::acceptance::Acceptance;
use crate::error::{Error, Result};

pub type StateId = usize;

/// A counter of a max-automaton, identified by its index.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Counter(pub u32);

impl Counter {
    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn from_index(index: usize) -> Self {
        Counter(index as u32)
    }
}

/// Identifier of a guard language in a guarded max-automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GuardId(pub u32);

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CounterOp {
    Increment(Counter),
    Reset(Counter),
    Output(Counter),
    /// `c := max(c, d)`.
    MaxInto(Counter, Counter),
    /// `if L then output(c)`; only legal inside a guarded automaton.
    GuardedOutput(Counter, GuardId),
}

impl CounterOp {
    /// Counters read or written by this operation.
    pub fn counters(&self) -> impl Iterator<Item = Counter> {
        let (a, b) = match *self {
            CounterOp::Increment(c)
            | CounterOp::Reset(c)
            | CounterOp::Output(c)
            | CounterOp::GuardedOutput(c, _) => (c, None),
            CounterOp::MaxInto(c, d) => (c, Some(d)),
        };
        core::iter::once(a).chain(b)
    }

    pub fn map_counters(&self, mut f: impl FnMut(Counter) -> Counter) -> CounterOp {
        match *self {
            CounterOp::Increment(c) => CounterOp::Increment(f(c)),
            CounterOp::Reset(c) => CounterOp::Reset(f(c)),
            CounterOp::Output(c) => CounterOp::Output(f(c)),
            CounterOp::MaxInto(c, d) => CounterOp::MaxInto(f(c), f(d)),
            CounterOp::GuardedOutput(c, g) => CounterOp::GuardedOutput(f(c), g),
        }
    }
}

/// An input letter: a base symbol (index into the alphabet) plus one bit per
/// annotation track. Bit `i` of `bits` belongs to track `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub symbol: u16,
    pub bits: u32,
}

impl Letter {
    pub const fn new(symbol: u16, bits: u32) -> Self {
        Letter { symbol, bits }
    }

    pub const fn plain(symbol: u16) -> Self {
        Letter { symbol, bits: 0 }
    }

    pub fn bit(self, track: usize) -> bool {
        self.bits >> track & 1 == 1
    }

    pub fn with_bit(self, track: usize, value: bool) -> Self {
        let bits = if value {
            self.bits | 1 << track
        } else {
            self.bits & !(1 << track)
        };
        Letter { bits, ..self }
    }

    /// Removes track `track`, shifting the higher tracks down by one.
    pub fn without_track(self, track: usize) -> Self {
        let low = self.bits & ((1 << track) - 1);
        let high = (self.bits >> (track + 1)) << track;
        Letter {
            bits: low | high,
            ..self
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Transition {
    pub target: StateId,
    pub ops: Vec<CounterOp>,
}

impl Transition {
    pub fn new(target: StateId, ops: Vec<CounterOp>) -> Self {
        Transition { target, ops }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxAutomaton {
    pub alphabet: Vec<char>,
    pub tracks: usize,
    pub state_names: Vec<String>,
    pub initial: StateId,
    pub counter_names: Vec<String>,
    /// Indexed by `state * letter_count + letter_index`.
    pub delta: Vec<Option<Transition>>,
    pub acceptance: Acceptance,
}

/// One problem found by [`MaxAutomaton::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Issue {
    EmptyAlphabet,
    TooManyTracks(usize),
    TableSize { expected: usize, found: usize },
    InitialOutOfRange(StateId),
    MissingTransition { state: String, letter: String },
    DanglingTarget { state: String, letter: String, target: StateId },
    UnknownCounter(String),
    GuardedOutput { state: String, letter: String },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::EmptyAlphabet => write!(f, "alphabet is empty"),
            Issue::TooManyTracks(n) => write!(f, "{n} tracks exceed the supported maximum of 16"),
            Issue::TableSize { expected, found } => {
                write!(f, "transition table has {found} entries, expected {expected}")
            }
            Issue::InitialOutOfRange(s) => write!(f, "initial state {s} does not exist"),
            Issue::MissingTransition { state, letter } => {
                write!(f, "delta undefined at ({state},{letter})")
            }
            Issue::DanglingTarget {
                state,
                letter,
                target,
            } => write!(f, "transition ({state},{letter}) targets unknown state {target}"),
            Issue::UnknownCounter(name) => write!(f, "unknown counter {name}"),
            Issue::GuardedOutput { state, letter } => {
                write!(f, "guarded output at ({state},{letter}) in an unguarded automaton")
            }
        }
    }
}

pub const MAX_TRACKS: usize = 16;

/// A run configuration: control state, counter valuation and the log of
/// output events per counter.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Configuration {
    pub state: StateId,
    pub values: Vec<u64>,
    pub outputs: Vec<Vec<u64>>,
}

impl MaxAutomaton {
    /// An automaton with every transition a self-loop on state 0 without
    /// counter operations. Useful as a starting point for builders.
    pub fn trivial(alphabet: Vec<char>, tracks: usize, acceptance: Acceptance) -> Self {
        let letters = alphabet.len() << tracks;
        MaxAutomaton {
            alphabet,
            tracks,
            state_names: vec![String::from("q0")],
            initial: 0,
            counter_names: Vec::new(),
            delta: vec![Some(Transition::new(0, Vec::new())); letters],
            acceptance,
        }
    }

    pub fn state_count(&self) -> usize {
        self.state_names.len()
    }

    pub fn counter_count(&self) -> usize {
        self.counter_names.len()
    }

    pub fn letter_count(&self) -> usize {
        self.alphabet.len() << self.tracks
    }

    pub fn letter_index(&self, letter: Letter) -> usize {
        ((letter.symbol as usize) << self.tracks) | letter.bits as usize
    }

    pub fn letter_at(&self, index: usize) -> Letter {
        Letter {
            symbol: (index >> self.tracks) as u16,
            bits: (index & ((1 << self.tracks) - 1)) as u32,
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.letter_count()).map(move |i| self.letter_at(i))
    }

    pub fn counters(&self) -> impl Iterator<Item = Counter> {
        (0..self.counter_count()).map(Counter::from_index)
    }

    /// The transition out of `state` on `letter`. Panics on a missing entry;
    /// call [`validate`](Self::validate) first for untrusted automata.
    pub fn transition(&self, state: StateId, letter: Letter) -> &Transition {
        self.transition_at(state, self.letter_index(letter))
    }

    pub fn transition_at(&self, state: StateId, letter_index: usize) -> &Transition {
        self.delta[state * self.letter_count() + letter_index]
            .as_ref()
            .expect("transition table is total after validation")
    }

    pub fn counter_name(&self, c: Counter) -> String {
        self.counter_names
            .get(c.index())
            .cloned()
            .unwrap_or_else(|| format!("#{}", c.0))
    }

    pub fn state_name(&self, q: StateId) -> String {
        self.state_names
            .get(q)
            .cloned()
            .unwrap_or_else(|| format!("#{q}"))
    }

    pub fn letter_name(&self, letter: Letter) -> String {
        let symbol = self
            .alphabet
            .get(letter.symbol as usize)
            .copied()
            .unwrap_or('?');
        if self.tracks == 0 {
            format!("{symbol}")
        } else {
            let mut s = format!("{symbol}|");
            for t in 0..self.tracks {
                s.push(if letter.bit(t) { '1' } else { '0' });
            }
            s
        }
    }

    pub fn counter_by_name(&self, name: &str) -> Option<Counter> {
        self.counter_names
            .iter()
            .position(|n| n == name)
            .map(Counter::from_index)
    }

    /// Reports every structural defect; an empty report means the automaton
    /// is deterministic, complete and all references resolve.
    pub fn validate(&self) -> Vec<Issue> {
        let mut issues = Vec::new();
        if self.alphabet.is_empty() {
            issues.push(Issue::EmptyAlphabet);
        }
        if self.tracks > MAX_TRACKS {
            issues.push(Issue::TooManyTracks(self.tracks));
            return issues;
        }
        let n = self.state_count();
        let expected = n * self.letter_count();
        if self.delta.len() != expected {
            issues.push(Issue::TableSize {
                expected,
                found: self.delta.len(),
            });
            return issues;
        }
        if self.initial >= n {
            issues.push(Issue::InitialOutOfRange(self.initial));
        }
        let counters = self.counter_count();
        let mut unknown: Vec<Counter> = Vec::new();
        let note_counter = |c: Counter, unknown: &mut Vec<Counter>| {
            if c.index() >= counters && !unknown.contains(&c) {
                unknown.push(c);
            }
        };
        for q in 0..n {
            for l in 0..self.letter_count() {
                let letter = self.letter_at(l);
                match &self.delta[q * self.letter_count() + l] {
                    None => issues.push(Issue::MissingTransition {
                        state: self.state_name(q),
                        letter: self.letter_name(letter),
                    }),
                    Some(t) => {
                        if t.target >= n {
                            issues.push(Issue::DanglingTarget {
                                state: self.state_name(q),
                                letter: self.letter_name(letter),
                                target: t.target,
                            });
                        }
                        for op in &t.ops {
                            if matches!(op, CounterOp::GuardedOutput(..)) {
                                issues.push(Issue::GuardedOutput {
                                    state: self.state_name(q),
                                    letter: self.letter_name(letter),
                                });
                            }
                            for c in op.counters() {
                                note_counter(c, &mut unknown);
                            }
                        }
                    }
                }
            }
        }
        for c in self.acceptance.atoms() {
            note_counter(c, &mut unknown);
        }
        for c in unknown {
            issues.push(Issue::UnknownCounter(self.counter_name(c)));
        }
        issues
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let issues = self.validate();
        match issues.first() {
            None => Ok(()),
            Some(_) => {
                let text: Vec<String> = issues.iter().map(|i| format!("{i}")).collect();
                Err(Error::Malformed(text.join("; ")))
            }
        }
    }

    pub fn check_letter(&self, letter: Letter) -> Result<()> {
        if letter.symbol as usize >= self.alphabet.len() {
            return Err(Error::UnknownSymbolIndex {
                symbol: letter.symbol as usize,
            });
        }
        if self.tracks < 32 && letter.bits >> self.tracks != 0 {
            return Err(Error::TrackMismatch {
                expected: self.tracks,
                found: 32 - letter.bits.leading_zeros() as usize,
            });
        }
        Ok(())
    }

    pub fn initial_configuration(&self) -> Configuration {
        Configuration {
            state: self.initial,
            values: vec![0; self.counter_count()],
            outputs: vec![Vec::new(); self.counter_count()],
        }
    }

    /// Reads one letter: moves to the transition target and applies its
    /// operations left to right.
    pub fn step(&self, cfg: &Configuration, letter: Letter) -> Result<Configuration> {
        let mut next = cfg.clone();
        self.step_in_place(&mut next, letter)?;
        Ok(next)
    }

    pub fn step_in_place(&self, cfg: &mut Configuration, letter: Letter) -> Result<()> {
        self.check_letter(letter)?;
        let t = self.transition(cfg.state, letter);
        apply_ops(&t.ops, &mut cfg.values, |c, v| cfg.outputs[c.index()].push(v))?;
        cfg.state = t.target;
        Ok(())
    }

    /// Folds [`step`](Self::step) over `word` from the initial configuration.
    pub fn run_finite(&self, word: &[Letter]) -> Result<Configuration> {
        let mut cfg = self.initial_configuration();
        for &l in word {
            self.step_in_place(&mut cfg, l)?;
        }
        Ok(cfg)
    }

    /// The state reached after reading `word` from `from`, ignoring counters.
    pub fn state_after(&self, from: StateId, word: &[Letter]) -> StateId {
        word.iter()
            .fold(from, |q, &l| self.transition(q, l).target)
    }

    /// Same automaton started in another state.
    pub fn with_initial(&self, initial: StateId) -> MaxAutomaton {
        MaxAutomaton {
            initial,
            ..self.clone()
        }
    }

    /// True when every transition op list is free of guarded outputs.
    pub fn is_unguarded(&self) -> bool {
        self.delta
            .iter()
            .flatten()
            .all(|t| t.ops.iter().all(|op| !matches!(op, CounterOp::GuardedOutput(..))))
    }

    pub fn same_input_alphabet(&self, other: &MaxAutomaton) -> Result<()> {
        if self.alphabet != other.alphabet || self.tracks != other.tracks {
            return Err(Error::AlphabetMismatch {
                left: alphabet_label(&self.alphabet, self.tracks),
                right: alphabet_label(&other.alphabet, other.tracks),
            });
        }
        Ok(())
    }
}

pub(crate) fn alphabet_label(alphabet: &[char], tracks: usize) -> String {
    let symbols: String = alphabet.iter().collect();
    format!("{{{symbols}}}x{tracks} tracks")
}

/// Applies an op sequence to a valuation, reporting each output event.
pub fn apply_ops(
    ops: &[CounterOp],
    values: &mut [u64],
    mut on_output: impl FnMut(Counter, u64),
) -> Result<()> {
    for op in ops {
        match *op {
            CounterOp::Increment(c) => values[c.index()] += 1,
            CounterOp::Reset(c) => values[c.index()] = 0,
            CounterOp::Output(c) => on_output(c, values[c.index()]),
            CounterOp::MaxInto(c, d) => {
                let v = values[d.index()];
                let slot = &mut values[c.index()];
                if v > *slot {
                    *slot = v;
                }
            }
            CounterOp::GuardedOutput(..) => return Err(Error::GuardedOp),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::gap;

    const A: Letter = Letter::plain(0);
    const B: Letter = Letter::plain(1);

    fn word(s: &str) -> Vec<Letter> {
        s.chars()
            .map(|ch| if ch == 'a' { A } else { B })
            .collect()
    }

    #[test]
    fn gap_is_well_formed() {
        assert!(gap().validate().is_empty());
    }

    #[test]
    fn missing_transition_is_reported() {
        let mut g = gap();
        let idx = g.letter_index(B);
        g.delta[idx] = None;
        let report = g.validate();
        assert_eq!(report.len(), 1);
        assert_eq!(format!("{}", report[0]), "delta undefined at (s,b)");
    }

    #[test]
    fn unknown_acceptance_counter_is_reported() {
        let mut g = gap();
        g.acceptance = Acceptance::Bounded(Counter(1));
        let report = g.validate();
        assert_eq!(report.len(), 1);
        assert_eq!(format!("{}", report[0]), "unknown counter #1");
    }

    #[test]
    fn step_outputs_then_resets() {
        let g = gap();
        let cfg = Configuration {
            state: 0,
            values: vec![3],
            outputs: vec![Vec::new()],
        };
        let next = g.step(&cfg, B).unwrap();
        assert_eq!(next.values, vec![0]);
        assert_eq!(next.outputs, vec![vec![3]]);
        let next = g.step(&next, A).unwrap();
        assert_eq!(next.values, vec![1]);
        assert_eq!(next.outputs, vec![vec![3]]);
    }

    #[test]
    fn max_into_takes_the_larger_value() {
        let mut values = vec![2, 5];
        apply_ops(&[CounterOp::MaxInto(Counter(0), Counter(1))], &mut values, |_, _| {}).unwrap();
        assert_eq!(values, vec![5, 5]);
    }

    #[test]
    fn run_finite_on_gap() {
        let g = gap();
        let cfg = g.run_finite(&word("aab")).unwrap();
        assert_eq!((cfg.values[0], cfg.outputs[0].clone()), (0, vec![2]));
        let cfg = g.run_finite(&[]).unwrap();
        assert_eq!((cfg.values[0], cfg.outputs[0].clone()), (0, vec![]));
        let cfg = g.run_finite(&word("abaaab")).unwrap();
        assert_eq!(cfg.outputs[0], vec![1, 3]);
    }

    #[test]
    fn letters_outside_the_alphabet_are_rejected() {
        let g = gap();
        let cfg = g.initial_configuration();
        assert!(matches!(
            g.step(&cfg, Letter::plain(7)),
            Err(Error::UnknownSymbolIndex { symbol: 7 })
        ));
        assert!(matches!(
            g.step(&cfg, Letter::new(0, 1)),
            Err(Error::TrackMismatch { .. })
        ));
    }

    #[test]
    fn without_track_shifts_higher_bits() {
        let l = Letter::new(0, 0b1011);
        assert_eq!(l.without_track(1).bits, 0b101);
        assert_eq!(l.without_track(0).bits, 0b101);
        assert_eq!(l.without_track(3).bits, 0b011);
    }
}
