//! Import of ω-regular languages given as Muller automata.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::acceptance::Acceptance;
use crate::automaton::{Counter, CounterOp, Letter, MaxAutomaton, StateId, Transition};
use crate::error::{Error, Result};
use crate::word::LassoWord;

/// A Muller automaton given as an edge list; it must be deterministic and
/// complete to be converted. Letters use the same `(symbol, bits)` layout as
/// [`MaxAutomaton`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MullerAutomaton {
    pub alphabet: Vec<char>,
    pub tracks: usize,
    pub states: usize,
    pub initial: StateId,
    /// `(from, letter, to)`.
    pub edges: Vec<(StateId, Letter, StateId)>,
    /// Accepting sets of states visited infinitely often.
    pub family: Vec<Vec<StateId>>,
}

impl MullerAutomaton {
    /// Builds a deterministic automaton from a total transition function.
    pub fn from_fn(
        alphabet: Vec<char>,
        tracks: usize,
        states: usize,
        initial: StateId,
        next: impl Fn(StateId, Letter) -> StateId,
        family: Vec<Vec<StateId>>,
    ) -> Self {
        let letters = alphabet.len() << tracks;
        let mut edges = Vec::with_capacity(states * letters);
        for q in 0..states {
            for l in 0..letters {
                let letter = Letter::new((l >> tracks) as u16, (l & ((1 << tracks) - 1)) as u32);
                edges.push((q, letter, next(q, letter)));
            }
        }
        MullerAutomaton {
            alphabet,
            tracks,
            states,
            initial,
            edges,
            family,
        }
    }

    fn letter_count(&self) -> usize {
        self.alphabet.len() << self.tracks
    }

    fn letter_index(&self, l: Letter) -> usize {
        ((l.symbol as usize) << self.tracks) | l.bits as usize
    }

    /// The transition table, or an error if some entry is missing or
    /// defined twice with different targets.
    pub fn table(&self) -> Result<Vec<StateId>> {
        let letters = self.letter_count();
        let mut table = vec![None; self.states * letters];
        for &(q, l, t) in &self.edges {
            if q >= self.states || t >= self.states || (l.symbol as usize) >= self.alphabet.len() {
                return Err(Error::Malformed(format!("edge ({q}, {t}) out of range")));
            }
            let slot = &mut table[q * letters + self.letter_index(l)];
            match *slot {
                Some(old) if old != t => {
                    return Err(Error::NotDeterministic(format!(
                        "state {q} has two successors on one letter"
                    )))
                }
                _ => *slot = Some(t),
            }
        }
        table
            .into_iter()
            .enumerate()
            .map(|(i, t)| {
                t.ok_or_else(|| {
                    Error::NotDeterministic(format!(
                        "no successor for state {} on letter {}",
                        i / letters,
                        i % letters
                    ))
                })
            })
            .collect()
    }

    /// Direct Muller semantics on a lasso: the set of states visited
    /// infinitely often is the set entered along the eventual cycle of
    /// period-boundary states.
    pub fn accepts_lasso(&self, w: &LassoWord) -> Result<bool> {
        let table = self.table()?;
        let letters = self.letter_count();
        let next = |q: StateId, l: Letter| table[q * letters + self.letter_index(l)];
        let mut q = w.prefix.iter().fold(self.initial, |q, &l| next(q, l));
        let mut boundary = vec![q];
        let start = loop {
            q = w.period.iter().fold(q, |q, &l| next(q, l));
            if let Some(i) = boundary.iter().position(|&p| p == q) {
                break i;
            }
            boundary.push(q);
        };
        let mut inf = vec![false; self.states];
        let mut q = boundary[start];
        for _ in start..boundary.len() {
            for &l in &w.period {
                q = next(q, l);
                inf[q] = true;
            }
        }
        Ok(self.family.iter().any(|set| {
            (0..self.states).all(|s| inf[s] == set.contains(&s))
        }))
    }
}

/// One counter `c_q` per state, incremented and output whenever `q` is
/// entered; `q` is visited infinitely often iff `c_q` is unbounded.
pub fn from_muller(m: &MullerAutomaton) -> Result<MaxAutomaton> {
    let table = m.table()?;
    let letters = m.letter_count();
    let delta = table
        .iter()
        .map(|&t| {
            let c = Counter::from_index(t);
            Some(Transition::new(
                t,
                vec![CounterOp::Increment(c), CounterOp::Output(c)],
            ))
        })
        .collect();
    debug_assert_eq!(table.len(), m.states * letters);
    let acceptance = Acceptance::or(m.family.iter().map(|set| {
        Acceptance::and((0..m.states).map(|q| {
            let c = Acceptance::Bounded(Counter::from_index(q));
            if set.contains(&q) {
                c.negate()
            } else {
                c
            }
        }))
    }))
    .simplify();
    Ok(MaxAutomaton {
        alphabet: m.alphabet.clone(),
        tracks: m.tracks,
        state_names: (0..m.states).map(|q| format!("m{q}")).collect(),
        initial: m.initial,
        counter_names: (0..m.states).map(|q| format!("inf{q}")).collect(),
        delta,
        acceptance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::parse_word_spec;
    use crate::word::InfiniteWord;

    /// Remembers the last letter; accepting when `b` is seen infinitely often.
    pub(crate) fn last_letter() -> MullerAutomaton {
        MullerAutomaton::from_fn(
            vec!['a', 'b'],
            0,
            2,
            0,
            |_, l| l.symbol as usize,
            vec![vec![1], vec![0, 1]],
        )
    }

    fn lasso(s: &str) -> LassoWord {
        match parse_word_spec(s, &['a', 'b'], 0).unwrap() {
            InfiniteWord::Lasso(l) => l,
            _ => unreachable!(),
        }
    }

    #[test]
    fn direct_semantics() {
        let m = last_letter();
        assert!(m.accepts_lasso(&lasso("lasso::ab")).unwrap());
        assert!(!m.accepts_lasso(&lasso("lasso:bb:a")).unwrap());
        assert!(m.accepts_lasso(&lasso("lasso:a:b")).unwrap());
    }

    #[test]
    fn converted_shape() {
        let a = from_muller(&last_letter()).unwrap();
        assert!(a.validate().is_empty());
        assert_eq!(a.counter_count(), 2);
        assert_eq!(a.state_count(), 2);
    }

    #[test]
    fn nondeterminism_is_rejected() {
        let mut m = last_letter();
        m.edges.push((0, Letter::plain(0), 1));
        assert!(matches!(from_muller(&m), Err(Error::NotDeterministic(_))));
        let mut partial = last_letter();
        partial.edges.pop();
        assert!(matches!(from_muller(&partial), Err(Error::NotDeterministic(_))));
    }
}
