//! Letter-to-letter transducers, the spanning-runs transducer, and
//! composition of a transducer with a deterministic checker.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::acceptance::{Acceptance, Connective};
use crate::automaton::{alphabet_label, Counter, CounterOp, Letter, MaxAutomaton, StateId, Transition};
use crate::error::{Error, Result};

/// A deterministic, complete, letter-to-letter transducer reading letters of
/// `alphabet × {0,1}^tracks`. There is no acceptance condition.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Transducer<G> {
    pub alphabet: Vec<char>,
    pub tracks: usize,
    pub initial: usize,
    pub state_count: usize,
    /// Indexed by `state * letter_count + letter_index`: target and output.
    pub delta: Vec<(usize, G)>,
    /// Describes the output alphabet; compared against a checker's input.
    pub output_label: String,
}

impl<G> Transducer<G> {
    pub fn letter_count(&self) -> usize {
        self.alphabet.len() << self.tracks
    }

    pub fn letter_at(&self, index: usize) -> Letter {
        Letter::new((index >> self.tracks) as u16, (index & ((1 << self.tracks) - 1)) as u32)
    }

    fn letter_index(&self, l: Letter) -> usize {
        ((l.symbol as usize) << self.tracks) | l.bits as usize
    }

    pub fn step(&self, state: usize, letter: Letter) -> (usize, &G) {
        let (t, ref g) = self.delta[state * self.letter_count() + self.letter_index(letter)];
        (t, g)
    }

    /// Output sequence on a finite word.
    pub fn run<'a>(&'a self, word: &[Letter]) -> Vec<&'a G> {
        let mut s = self.initial;
        word.iter()
            .map(|&l| {
                let (t, g) = self.step(s, l);
                s = t;
                g
            })
            .collect()
    }
}

/// The transducer that copies its input.
pub fn identity_transducer(alphabet: &[char], tracks: usize) -> Transducer<Letter> {
    let letters = alphabet.len() << tracks;
    let delta = (0..letters)
        .map(|l| (0, Letter::new((l >> tracks) as u16, (l & ((1 << tracks) - 1)) as u32)))
        .collect();
    Transducer {
        alphabet: alphabet.to_vec(),
        tracks,
        initial: 0,
        state_count: 1,
        delta,
        output_label: alphabet_label(alphabet, tracks),
    }
}

/// One output letter of the spanning transducer: the input letter, the
/// permutations before and after it, and which coordinates restarted
/// (bit 0 in the encoding).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpanLetter {
    pub input: Letter,
    pub before: Arc<[StateId]>,
    pub after: Arc<[StateId]>,
    pub restarted: u64,
}

impl SpanLetter {
    pub fn restarted(&self, track: usize) -> bool {
        self.restarted >> track & 1 == 1
    }
}

/// Coordinates are limited by the restart mask.
pub const MAX_SPANNING_STATES: usize = 64;

/// Advances a permutation of the states by one letter. Coordinates whose
/// new state already occurs at a smaller coordinate are refilled with the
/// states missing from the tuple, in ascending order, and flagged.
pub fn advance_permutation(a: &MaxAutomaton, perm: &[StateId], letter: Letter) -> (Vec<StateId>, u64) {
    let n = perm.len();
    let mut next: Vec<StateId> = perm.iter().map(|&q| a.transition(q, letter).target).collect();
    let mut used = vec![false; n];
    let mut collided = Vec::new();
    for (i, &q) in next.iter().enumerate() {
        if used[q] {
            collided.push(i);
        } else {
            used[q] = true;
        }
    }
    let mut missing = (0..n).filter(|&q| !used[q]);
    let mut restarted = 0u64;
    for &i in &collided {
        next[i] = missing.next().expect("as many missing states as collisions");
        restarted |= 1 << i;
    }
    (next, restarted)
}

/// The transducer over permutations of `a`'s states that outputs `|Q|`
/// spanning partial runs. The initial permutation is the identity.
pub fn spanning_transducer(a: &MaxAutomaton, budget: usize) -> Result<Transducer<SpanLetter>> {
    a.ensure_valid()?;
    let n = a.state_count();
    if n > MAX_SPANNING_STATES {
        return Err(Error::StateBudget {
            budget: MAX_SPANNING_STATES,
            stage: "spanning transducer coordinates",
        });
    }
    let letters = a.letter_count();
    let identity: Arc<[StateId]> = (0..n).collect();
    let mut perms: Vec<Arc<[StateId]>> = vec![identity.clone()];
    let mut index: HashMap<Arc<[StateId]>, usize> = HashMap::new();
    index.insert(identity, 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < perms.len() {
        let before = perms[i].clone();
        for l in 0..letters {
            let letter = a.letter_at(l);
            let (next, restarted) = advance_permutation(a, &before, letter);
            let next: Arc<[StateId]> = next.into();
            let target = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if perms.len() >= budget {
                        return Err(Error::StateBudget {
                            budget,
                            stage: "spanning transducer",
                        });
                    }
                    index.insert(next.clone(), perms.len());
                    perms.push(next.clone());
                    perms.len() - 1
                }
            };
            delta.push((
                target,
                SpanLetter {
                    input: letter,
                    before: before.clone(),
                    after: perms[target].clone(),
                    restarted,
                },
            ));
        }
        i += 1;
    }
    Ok(Transducer {
        alphabet: a.alphabet.clone(),
        tracks: a.tracks,
        initial: 0,
        state_count: perms.len(),
        delta,
        output_label: format!("spanning runs over {n} states"),
    })
}

/// A deterministic machine with counters reading letters of type `G`; its
/// control state is an opaque word vector.
pub trait Checker<G> {
    /// Description of the letters read, matched against a transducer's
    /// output label.
    fn input_label(&self) -> String;
    fn counter_names(&self) -> Vec<String>;
    fn acceptance(&self) -> Acceptance;
    fn initial(&self) -> Vec<u32>;
    /// Next state; counter operations are appended to `ops`.
    fn step(&self, state: &[u32], letter: &G, ops: &mut Vec<CounterOp>) -> Vec<u32>;
}

impl Checker<Letter> for MaxAutomaton {
    fn input_label(&self) -> String {
        alphabet_label(&self.alphabet, self.tracks)
    }

    fn counter_names(&self) -> Vec<String> {
        self.counter_names.clone()
    }

    fn acceptance(&self) -> Acceptance {
        self.acceptance.clone()
    }

    fn initial(&self) -> Vec<u32> {
        vec![self.initial as u32]
    }

    fn step(&self, state: &[u32], letter: &Letter, ops: &mut Vec<CounterOp>) -> Vec<u32> {
        let t = self.transition(state[0] as usize, *letter);
        ops.extend_from_slice(&t.ops);
        vec![t.target as u32]
    }
}

/// Several checkers run in parallel on the same letters; counters are laid
/// out part after part and the acceptance formulas are joined.
pub struct Parallel<'a, G> {
    pub parts: Vec<&'a dyn Checker<G>>,
    /// Must be `And` or `Or`.
    pub join: Connective,
}

impl<G> Parallel<'_, G> {
    fn offsets(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.parts.len());
        let mut k = 0;
        for p in &self.parts {
            out.push(k);
            k += p.counter_names().len();
        }
        out
    }
}

impl<G> Checker<G> for Parallel<'_, G> {
    fn input_label(&self) -> String {
        self.parts.first().map(|p| p.input_label()).unwrap_or_default()
    }

    fn counter_names(&self) -> Vec<String> {
        self.parts.iter().flat_map(|p| p.counter_names()).collect()
    }

    fn acceptance(&self) -> Acceptance {
        let parts = self.parts.iter().zip(self.offsets()).map(|(p, off)| {
            p.acceptance()
                .map_counters(|c| Counter::from_index(c.index() + off))
        });
        match self.join {
            Connective::And => Acceptance::and(parts),
            Connective::Or => Acceptance::or(parts),
            other => {
                let parts: Vec<Acceptance> = parts.collect();
                parts
                    .into_iter()
                    .reduce(|x, y| other.apply(x, y))
                    .unwrap_or(Acceptance::True)
            }
        }
    }

    fn initial(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for p in &self.parts {
            let s = p.initial();
            out.push(s.len() as u32);
            out.extend(s);
        }
        out
    }

    fn step(&self, state: &[u32], letter: &G, ops: &mut Vec<CounterOp>) -> Vec<u32> {
        let mut out = Vec::with_capacity(state.len());
        let mut rest = state;
        let mut local = Vec::new();
        for (p, off) in self.parts.iter().zip(self.offsets()) {
            let len = rest[0] as usize;
            let (mine, tail) = rest[1..].split_at(len);
            rest = tail;
            local.clear();
            let next = p.step(mine, letter, &mut local);
            ops.extend(
                local
                    .iter()
                    .map(|op| op.map_counters(|c| Counter::from_index(c.index() + off))),
            );
            out.push(next.len() as u32);
            out.extend(next);
        }
        out
    }
}

/// Runs `checker` on the output of `t`: the result reads `t`'s input and
/// accepts `w` iff the checker accepts `t(w)`.
pub fn compose_with_transducer<G>(
    checker: &dyn Checker<G>,
    t: &Transducer<G>,
    budget: usize,
) -> Result<MaxAutomaton> {
    if checker.input_label() != t.output_label {
        return Err(Error::AlphabetMismatch {
            left: checker.input_label(),
            right: t.output_label.clone(),
        });
    }
    let letters = t.letter_count();
    let start = (t.initial, checker.initial());
    let mut states = vec![start.clone()];
    let mut index: HashMap<(usize, Vec<u32>), StateId> = HashMap::new();
    index.insert(start, 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let (ts, cs) = states[i].clone();
        for l in 0..letters {
            let (tt, g) = t.step(ts, t.letter_at(l));
            let mut ops = Vec::new();
            let next = checker.step(&cs, g, &mut ops);
            let key = (tt, next);
            let target = match index.get(&key) {
                Some(&s) => s,
                None => {
                    if states.len() >= budget {
                        return Err(Error::StateBudget {
                            budget,
                            stage: "transducer composition",
                        });
                    }
                    index.insert(key.clone(), states.len());
                    states.push(key);
                    states.len() - 1
                }
            };
            delta.push(Some(Transition::new(target, ops)));
        }
        i += 1;
    }
    Ok(MaxAutomaton {
        alphabet: t.alphabet.clone(),
        tracks: t.tracks,
        state_names: (0..states.len()).map(|s| format!("s{s}")).collect(),
        initial: 0,
        counter_names: crate::ops::unique_names(checker.counter_names()),
        delta,
        acceptance: checker.acceptance().simplify(),
    })
}
