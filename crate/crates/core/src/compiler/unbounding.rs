//! The unbounding quantifier: `w` is accepted iff `w[X]` is accepted for
//! arbitrarily large finite sets `X`.
//!
//! For every state `q`, counter `c_q` holds the largest `|X|` with which the
//! automaton reaches `q` on the prefix read so far. The word is accepted iff
//! for some `q` these values are unbounded over the positions from which
//! the zero-annotated suffix is accepted starting in `q`. That side condition
//! is a guard on the output of `c_q`, removed afterwards.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;
use hashbrown::HashMap;

use crate::acceptance::Acceptance;
use crate::automaton::{Counter, CounterOp, GuardId, Letter, MaxAutomaton, StateId, Transition};
use crate::compiler::guards::{remove_guards, Guard, GuardedMaxAutomaton};
use crate::error::{Error, Result};
use crate::ops::{fix_track_zero, trim};

/// The result of [`maxcount_augment`]: an automaton over the input without
/// the last track, whose state is the set of states of the original
/// automaton reachable under some annotation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MaxCount {
    pub automaton: MaxAutomaton,
    /// Reachable set represented by each state.
    pub sets: Vec<FixedBitSet>,
    /// Number of states of the original automaton; counter `q` is `c_q`.
    pub width: usize,
}

impl MaxCount {
    pub fn value_counter(&self, q: StateId) -> Counter {
        Counter::from_index(q)
    }

    /// `max(q, w)` for every state `q`, `None` when `q` is unreachable on `w`.
    pub fn values(&self, word: &[Letter]) -> Result<Vec<Option<u64>>> {
        let cfg = self.automaton.run_finite(word)?;
        let set = &self.sets[cfg.state];
        Ok((0..self.width)
            .map(|q| set.contains(q).then(|| cfg.values[q]))
            .collect())
    }
}

/// Adds counters `c_q` holding `max(q, prefix)`. Each step computes the new
/// values into buffers `c'_q` as the maximum over predecessor pairs
/// `(p, bit)` of `c_p + bit`, then copies them back.
pub fn maxcount_augment(a: &MaxAutomaton, budget: usize) -> Result<MaxCount> {
    a.ensure_valid()?;
    if a.tracks == 0 {
        return Err(Error::TrackOutOfRange { index: 0, tracks: 0 });
    }
    let n = a.state_count();
    let x = a.tracks - 1;
    let tracks = a.tracks - 1;
    let value = |q: usize| Counter::from_index(q);
    let buffer = |q: usize| Counter::from_index(n + q);
    let tmp = Counter::from_index(2 * n);
    let letters = a.alphabet.len() << tracks;

    let mut start = FixedBitSet::with_capacity(n);
    start.insert(a.initial);
    let mut sets = vec![start.clone()];
    let mut index: HashMap<FixedBitSet, StateId> = HashMap::new();
    index.insert(start, 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < sets.len() {
        let set = sets[i].clone();
        for l in 0..letters {
            let input = Letter::new((l >> tracks) as u16, (l & ((1 << tracks) - 1)) as u32);
            let mut next = FixedBitSet::with_capacity(n);
            let mut preds: Vec<Vec<(usize, bool)>> = vec![Vec::new(); n];
            for p in set.ones() {
                for bit in [false, true] {
                    let q = a.transition(p, widen(input, x, bit)).target;
                    next.insert(q);
                    preds[q].push((p, bit));
                }
            }
            let mut ops = Vec::new();
            for q in next.ones() {
                ops.push(CounterOp::Reset(buffer(q)));
                for &(p, bit) in &preds[q] {
                    if bit {
                        ops.extend([
                            CounterOp::Reset(tmp),
                            CounterOp::MaxInto(tmp, value(p)),
                            CounterOp::Increment(tmp),
                            CounterOp::MaxInto(buffer(q), tmp),
                        ]);
                    } else {
                        ops.push(CounterOp::MaxInto(buffer(q), value(p)));
                    }
                }
            }
            for q in 0..n {
                ops.push(CounterOp::Reset(value(q)));
                if next.contains(q) {
                    ops.push(CounterOp::MaxInto(value(q), buffer(q)));
                }
            }
            let target = match index.get(&next) {
                Some(&t) => t,
                None => {
                    if sets.len() >= budget {
                        return Err(Error::StateBudget {
                            budget,
                            stage: "max-count augmentation",
                        });
                    }
                    index.insert(next.clone(), sets.len());
                    sets.push(next);
                    sets.len() - 1
                }
            };
            delta.push(Some(Transition::new(target, ops)));
        }
        i += 1;
    }
    let mut counter_names: Vec<String> = (0..n).map(|q| format!("max_{}", a.state_name(q))).collect();
    counter_names.extend((0..n).map(|q| format!("next_{}", a.state_name(q))));
    counter_names.push(String::from("tmp"));
    let state_names = sets
        .iter()
        .map(|s| {
            let names: Vec<String> = s.ones().map(|q| a.state_name(q)).collect();
            format!("{{{}}}", names.join(","))
        })
        .collect();
    Ok(MaxCount {
        automaton: MaxAutomaton {
            alphabet: a.alphabet.clone(),
            tracks,
            state_names,
            initial: 0,
            counter_names: crate::ops::unique_names(counter_names),
            delta,
            acceptance: Acceptance::True,
        },
        sets,
        width: n,
    })
}

/// Inserts a bit for track `x` (the new last track) into a letter.
fn widen(l: Letter, x: usize, bit: bool) -> Letter {
    Letter::new(l.symbol, l.bits | (bit as u32) << x)
}

/// The guarded automaton for the unbounding quantifier. After each letter
/// every reachable `c_q` is copied into one output counter `o` and emitted
/// under the guard "the zero-annotated suffix is accepted from `q`"; the
/// word is accepted iff the passing outputs of `o` are unbounded.
pub fn unbounding_guarded(a: &MaxAutomaton, budget: usize) -> Result<GuardedMaxAutomaton> {
    let a = trim(a);
    let zero = fix_track_zero(&a, a.tracks.checked_sub(1).ok_or(Error::TrackOutOfRange { index: 0, tracks: 0 })?)?;
    let mc = maxcount_augment(&a, budget)?;
    let mut g = mc.automaton.clone();
    let o = Counter::from_index(g.counter_count());
    g.counter_names.push(String::from("out"));
    for t in g.delta.iter_mut() {
        let t = t.as_mut().expect("complete");
        for q in mc.sets[t.target].ones() {
            t.ops.extend([
                CounterOp::Reset(o),
                CounterOp::MaxInto(o, mc.value_counter(q)),
                CounterOp::GuardedOutput(o, GuardId(q as u32)),
            ]);
        }
    }
    g.acceptance = Acceptance::unbounded(o);
    let guards = (0..a.state_count())
        .map(|q| Guard {
            automaton: zero.clone(),
            start: q,
        })
        .collect();
    Ok(GuardedMaxAutomaton { automaton: g, guards })
}

/// Projects away the last track under the unbounding quantifier.
pub fn u_quantifier(a: &MaxAutomaton, budget: usize, guard_limit: usize) -> Result<MaxAutomaton> {
    remove_guards(&unbounding_guarded(a, budget)?, budget, guard_limit)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::atoms::atomic_automaton;
    use crate::logic::Core;

    /// One track X; accepts iff every element of X carries `a`.
    fn marks_only_a() -> MaxAutomaton {
        atomic_automaton(&Core::LetterAll("X".into(), 'a'), &[String::from("X")], &['a', 'b']).unwrap()
    }

    fn word(s: &str) -> Vec<Letter> {
        s.chars().map(|c| Letter::plain(if c == 'a' { 0 } else { 1 })).collect()
    }

    #[test]
    fn empty_prefix_has_only_the_initial_state() {
        let mc = maxcount_augment(&marks_only_a(), 1000).unwrap();
        assert_eq!(mc.values(&[]).unwrap(), vec![Some(0), None]);
    }

    #[test]
    fn counts_marked_a_positions() {
        let mc = maxcount_augment(&marks_only_a(), 1000).unwrap();
        assert_eq!(mc.values(&word("aaa")).unwrap()[0], Some(3));
        assert_eq!(mc.values(&word("ab")).unwrap()[0], Some(1));
        // the dead state is reached by marking the b
        assert_eq!(mc.values(&word("ab")).unwrap()[1], Some(2));
    }

    #[test]
    fn guarded_form_has_one_guard_per_state() {
        let g = unbounding_guarded(&marks_only_a(), 1000).unwrap();
        assert_eq!(g.guards.len(), 2);
        assert!(!g.automaton.is_unguarded());
    }
}
