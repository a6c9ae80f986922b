//! Weak existential quantification: `w` is accepted iff `w[X]` is accepted
//! for some finite set `X`.
//!
//! The automaton reads the spanning runs of the zero-annotated automaton
//! and accepts iff some track `i` is eventually stable (A) with an
//! accepting run, and converges (B) with a run on some finitely annotated
//! input.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use fixedbitset::FixedBitSet;

use crate::acceptance::{Acceptance, Connective};
use crate::automaton::{Counter, CounterOp, Letter, MaxAutomaton, StateId};
use crate::compiler::spanning::{compose_with_transducer, spanning_transducer, Checker, Parallel, SpanLetter, Transducer};
use crate::error::{Error, Result};
use crate::ops::{fix_track_zero, trim};

fn span_label(a: &MaxAutomaton) -> String {
    format!("spanning runs over {} states", a.state_count())
}

/// Condition (A) for track `i`: replays the zero-annotated automaton's
/// counter ops along the track, and counts restarts in a counter `z` that
/// must stay bounded (finitely many restarts).
///
/// Counter values at a restart are finite, and boundedness of an output
/// stream does not change when the initial valuation is shifted by a finite
/// amount, so the replayed counters are not reset at restarts.
pub struct ConditionA<'a> {
    zero: &'a MaxAutomaton,
    track: usize,
}

impl<'a> ConditionA<'a> {
    pub fn new(zero: &'a MaxAutomaton, track: usize) -> Self {
        ConditionA { zero, track }
    }

    fn z(&self) -> Counter {
        Counter::from_index(self.zero.counter_count())
    }
}

impl Checker<SpanLetter> for ConditionA<'_> {
    fn input_label(&self) -> String {
        span_label(self.zero)
    }

    fn counter_names(&self) -> Vec<String> {
        let i = self.track;
        let mut names: Vec<String> = self.zero.counter_names.iter().map(|c| format!("{c}@{i}")).collect();
        names.push(format!("restart@{i}"));
        names
    }

    fn acceptance(&self) -> Acceptance {
        Acceptance::and([self.zero.acceptance.clone(), Acceptance::Bounded(self.z())])
    }

    fn initial(&self) -> Vec<u32> {
        Vec::new()
    }

    fn step(&self, _: &[u32], g: &SpanLetter, ops: &mut Vec<CounterOp>) -> Vec<u32> {
        if g.restarted(self.track) {
            ops.extend([CounterOp::Increment(self.z()), CounterOp::Output(self.z())]);
        } else {
            let t = self.zero.transition(g.before[self.track], g.input);
            ops.extend_from_slice(&t.ops);
        }
        Vec::new()
    }
}

/// States reachable on some annotation of the last track: `R_0` is the
/// initial state, `R_{x+1}` collects both successors of every state of
/// `R_x`.
pub fn advance_reach(a: &MaxAutomaton, reach: &FixedBitSet, input: Letter) -> FixedBitSet {
    let x = a.tracks - 1;
    let mut next = FixedBitSet::with_capacity(a.state_count());
    for q in reach.ones() {
        for bit in [false, true] {
            next.insert(a.transition(q, input.with_bit(x, bit)).target);
        }
    }
    next
}

/// The sequence `R_0, R_1, ..., R_n` along a finite word over the input
/// alphabet (without the last track).
pub fn reach_sets(a: &MaxAutomaton, word: &[Letter]) -> Vec<FixedBitSet> {
    let mut r = FixedBitSet::with_capacity(a.state_count());
    r.insert(a.initial);
    let mut out = vec![r.clone()];
    for &l in word {
        r = advance_reach(a, &r, l);
        out.push(r.clone());
    }
    out
}

/// Condition (B) for track `i`: a flag that is raised when the track's
/// state lies in the current reachable set and lowered when the track
/// restarts. A counter visited while the flag is up must be unbounded, so
/// the flag is up from some point on.
pub struct ConditionB<'a> {
    a: &'a MaxAutomaton,
    track: usize,
    /// State of the track before the first letter.
    start: StateId,
}

impl<'a> ConditionB<'a> {
    /// `a` still carries the quantified set as its last track.
    pub fn new(a: &'a MaxAutomaton, track: usize, start: StateId) -> Self {
        ConditionB { a, track, start }
    }

    fn encode(&self, reach: &FixedBitSet, flag: bool) -> Vec<u32> {
        let mut out = vec![0u32; self.a.state_count().div_ceil(32) + 1];
        for q in reach.ones() {
            out[q / 32] |= 1 << (q % 32);
        }
        *out.last_mut().expect("flag word") = flag as u32;
        out
    }

    fn decode(&self, state: &[u32]) -> (FixedBitSet, bool) {
        let (flag, words) = state.split_last().expect("flag word");
        let mut r = FixedBitSet::with_capacity(self.a.state_count());
        for (i, &w) in words.iter().enumerate() {
            for b in 0..32 {
                if w >> b & 1 == 1 {
                    r.insert(i * 32 + b);
                }
            }
        }
        (r, *flag == 1)
    }
}

impl Checker<SpanLetter> for ConditionB<'_> {
    fn input_label(&self) -> String {
        span_label(self.a)
    }

    fn counter_names(&self) -> Vec<String> {
        vec![format!("met@{}", self.track)]
    }

    fn acceptance(&self) -> Acceptance {
        Acceptance::unbounded(Counter(0))
    }

    fn initial(&self) -> Vec<u32> {
        let mut r = FixedBitSet::with_capacity(self.a.state_count());
        r.insert(self.a.initial);
        self.encode(&r, self.start == self.a.initial)
    }

    fn step(&self, state: &[u32], g: &SpanLetter, ops: &mut Vec<CounterOp>) -> Vec<u32> {
        let (reach, flag) = self.decode(state);
        let next = advance_reach(self.a, &reach, g.input);
        let flag = (flag && !g.restarted(self.track)) || next.contains(g.after[self.track]);
        if flag {
            ops.extend([CounterOp::Increment(Counter(0)), CounterOp::Output(Counter(0))]);
        }
        self.encode(&next, flag)
    }
}

/// Condition (A) alone as an automaton over the spanning transducer's
/// input, for testing and inspection.
pub fn condition_a(a: &MaxAutomaton, track: usize, budget: usize) -> Result<MaxAutomaton> {
    let zero = quantified_zero(a)?;
    let t = spanning_transducer(&zero, budget)?;
    compose_with_transducer(&ConditionA::new(&zero, track), &t, budget)
}

/// Condition (B) alone, as for [`condition_a`].
pub fn condition_b(a: &MaxAutomaton, track: usize, budget: usize) -> Result<MaxAutomaton> {
    let zero = quantified_zero(a)?;
    let t = spanning_transducer(&zero, budget)?;
    compose_with_transducer(&ConditionB::new(a, track, track), &t, budget)
}

fn quantified_zero(a: &MaxAutomaton) -> Result<MaxAutomaton> {
    if a.tracks == 0 {
        return Err(Error::TrackOutOfRange { index: 0, tracks: 0 });
    }
    fix_track_zero(a, a.tracks - 1)
}

/// Projects away the last track under weak existential quantification.
pub fn exists_fin(a: &MaxAutomaton, budget: usize) -> Result<MaxAutomaton> {
    let a = trim(a);
    let zero = quantified_zero(&a)?;
    let t: Transducer<SpanLetter> = spanning_transducer(&zero, budget)?;
    let n = zero.state_count();
    let conds_a: Vec<ConditionA> = (0..n).map(|i| ConditionA::new(&zero, i)).collect();
    // the transducer starts from the identity permutation
    let conds_b: Vec<ConditionB> = (0..n).map(|i| ConditionB::new(&a, i, i)).collect();
    let per_track: Vec<Parallel<SpanLetter>> = (0..n)
        .map(|i| Parallel {
            parts: vec![&conds_a[i] as &dyn Checker<SpanLetter>, &conds_b[i]],
            join: Connective::And,
        })
        .collect();
    let union = Parallel {
        parts: per_track.iter().map(|p| p as &dyn Checker<SpanLetter>).collect(),
        join: Connective::Or,
    };
    compose_with_transducer(&union, &t, budget)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::atoms::atomic_automaton;
    use crate::compiler::reduce::reduce;
    use crate::fixtures::contains_b;
    use crate::logic::Core;
    use crate::membership::{lasso_membership, Verdict};
    use crate::ops::product;
    use crate::word::LassoWord;

    fn lassos(tracks: usize) -> Vec<LassoWord> {
        let letters: Vec<Letter> = (0..2u16)
            .flat_map(|s| (0..1u32 << tracks).map(move |b| Letter::new(s, b)))
            .collect();
        let mut words: Vec<Vec<Letter>> = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..3 {
            let mut next = Vec::new();
            for w in &layer {
                for &l in &letters {
                    let mut x: Vec<Letter> = w.clone();
                    x.push(l);
                    next.push(x);
                }
            }
            words.extend(next.iter().cloned());
            layer = next;
        }
        let mut out = Vec::new();
        for u in words.iter().filter(|u| u.len() <= 2) {
            for v in words.iter().filter(|v| !v.is_empty()) {
                out.push(LassoWord {
                    prefix: u.clone(),
                    period: v.clone(),
                });
            }
        }
        out
    }

    fn contains_b_formula() -> MaxAutomaton {
        let vars = vec![String::from("X")];
        let sing = atomic_automaton(&Core::Sing("X".into()), &vars, &['a', 'b']).unwrap();
        let letter = atomic_automaton(&Core::LetterAll("X".into(), 'b'), &vars, &['a', 'b']).unwrap();
        product(&sing, &letter, Connective::And).unwrap()
    }

    #[test]
    fn exists_singleton_b_is_contains_b() {
        let e = exists_fin(&contains_b_formula(), 100_000).unwrap();
        assert_eq!(e.tracks, 0);
        let r = reduce(&e);
        for w in lassos(0) {
            assert_eq!(
                lasso_membership(&e, &w).unwrap().verdict,
                lasso_membership(&contains_b(), &w).unwrap().verdict,
                "{w:?}"
            );
            assert_eq!(
                lasso_membership(&r, &w).unwrap().verdict,
                lasso_membership(&e, &w).unwrap().verdict
            );
        }
    }

    #[test]
    fn ignored_track_projects_to_the_original() {
        let wide = crate::ops::add_track(&contains_b()).unwrap();
        let e = reduce(&exists_fin(&wide, 100_000).unwrap());
        for w in lassos(0) {
            assert_eq!(
                lasso_membership(&e, &w).unwrap().verdict,
                lasso_membership(&contains_b(), &w).unwrap().verdict
            );
        }
    }

    #[test]
    fn condition_b_accepts_track_of_initial_state() {
        let a = contains_b_formula();
        let b = condition_b(&a, a.initial, 100_000).unwrap();
        let w = LassoWord {
            prefix: Vec::new(),
            period: vec![Letter::plain(0)],
        };
        assert_eq!(lasso_membership(&b, &w).unwrap().verdict, Verdict::Accept);
    }

    #[test]
    fn condition_a_rejects_restarting_tracks() {
        // two states, every letter leads to state 0: coordinate 1 collides
        // and restarts at every position
        let mut a = MaxAutomaton::trivial(vec!['a', 'b'], 1, Acceptance::True);
        a.state_names = vec![String::from("p"), String::from("q")];
        a.delta = vec![Some(crate::automaton::Transition::new(0, Vec::new())); 8];
        let w = LassoWord {
            prefix: Vec::new(),
            period: vec![Letter::plain(0)],
        };
        let stable = condition_a(&a, 0, 1000).unwrap();
        let restarting = condition_a(&a, 1, 1000).unwrap();
        assert_eq!(lasso_membership(&stable, &w).unwrap().verdict, Verdict::Accept);
        assert_eq!(lasso_membership(&restarting, &w).unwrap().verdict, Verdict::Reject);
    }

    #[test]
    fn spanning_output_is_a_permutation() {
        let zero = quantified_zero(&contains_b_formula()).unwrap();
        let t = spanning_transducer(&zero, 1000).unwrap();
        let word: Vec<Letter> = [0u16, 1, 0, 1, 1].iter().map(|&s| Letter::plain(s)).collect();
        for g in t.run(&word) {
            let distinct: hashbrown::HashSet<StateId> = g.after.iter().copied().collect();
            assert_eq!(distinct.len(), zero.state_count());
        }
    }
}
