//! Sound emptiness search: three-valued, with replayable certificates.

use alloc::vec;
use alloc::vec::Vec;

use crate::acceptance::Acceptance;
use crate::automaton::{CounterOp, Letter, MaxAutomaton, StateId};
use crate::effect::effect_of;
use crate::error::Result;
use crate::graph;
use crate::membership::{membership, Membership, RampConfig, Verdict};
use crate::uauto::{uauto_nonempty, unboundedness_uautomaton};
use crate::word::{FiniteWord, InfiniteWord, LassoWord, RampWord};

/// State limit for the U-automaton built for single-clause acceptance.
const UAUTOMATON_BUDGET: usize = 100_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchConfig {
    /// Candidate words tested before giving up.
    pub budget: usize,
    pub max_prefix: usize,
    pub max_pump: usize,
    pub max_separator: usize,
    pub ramp: RampConfig,
}

impl Default for SearchConfig {
    fn default() -> Self {
        SearchConfig {
            budget: 5000,
            max_prefix: 4,
            max_pump: 4,
            max_separator: 4,
            ramp: RampConfig::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EmptyReason {
    /// The acceptance formula simplifies to `false`.
    FalseAcceptance,
    /// With every counter that can never grow fixed to bounded, the
    /// acceptance formula is unsatisfiable.
    NoGrowth,
    /// The acceptance is a single "outputs of `d` unbounded" clause and the
    /// U-automaton for `d` accepts nothing.
    NoTrace,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Emptiness {
    Nonempty { word: InfiniteWord, membership: Membership },
    Empty(EmptyReason),
    Unknown { candidates: usize },
}

/// Counters whose outputs are bounded on every run: no output of them is fed
/// from a (state, counter) node reachable from a positive-weight cycle of
/// the reachable part of the automaton.
pub fn never_unbounded(a: &MaxAutomaton) -> Result<Vec<bool>> {
    let n = a.state_count();
    let k = a.counter_count();
    let reach = graph::reachable(&state_graph(a), [a.initial]);
    let node = |q: StateId, c: usize| q * k + c;
    let mut edges = Vec::new();
    let mut feeds = Vec::new();
    for q in (0..n).filter(|&q| reach[q]) {
        for l in 0..a.letter_count() {
            let t = a.transition_at(q, l);
            let e = effect_of(k, &t.ops)?;
            for (d, c, w) in e.edges() {
                edges.push((node(q, d), node(t.target, c), w));
            }
            for (c, row) in &e.outputs {
                for d in row.feeds() {
                    feeds.push((c.index(), node(q, d.index())));
                }
            }
        }
    }
    let grow = graph::reachable_from_positive_cycle(n * k, &edges);
    let mut bounded = vec![true; k];
    for (c, src) in feeds {
        if grow[src] {
            bounded[c] = false;
        }
    }
    Ok(bounded)
}

fn state_graph(a: &MaxAutomaton) -> Vec<Vec<usize>> {
    (0..a.state_count())
        .map(|q| {
            let mut next: Vec<usize> = (0..a.letter_count()).map(|l| a.transition_at(q, l).target).collect();
            next.sort_unstable();
            next.dedup();
            next
        })
        .collect()
}

/// All words of length `min..=max` over the automaton's letters, shortest
/// first, in lexicographic order of letter indices.
fn words(a: &MaxAutomaton, min: usize, max: usize) -> Vec<FiniteWord> {
    let letters: Vec<Letter> = a.letters().collect();
    let mut out = Vec::new();
    let mut layer: Vec<FiniteWord> = vec![Vec::new()];
    for len in 0..=max {
        if len >= min {
            out.extend(layer.iter().cloned());
        }
        if len == max {
            break;
        }
        let mut next = Vec::with_capacity(layer.len() * letters.len());
        for w in &layer {
            for &l in &letters {
                let mut x = w.clone();
                x.push(l);
                next.push(x);
            }
        }
        layer = next;
    }
    out
}

/// Whether iterating `v` from `q` can make some counter grow: the ops of
/// the eventual `v`-cycle have a positive-weight dependency cycle.
fn pump_can_grow(a: &MaxAutomaton, q: StateId, v: &[Letter]) -> Result<bool> {
    let mut seen = vec![q];
    let mut p = q;
    let start = loop {
        p = a.state_after(p, v);
        if let Some(i) = seen.iter().position(|&s| s == p) {
            break i;
        }
        seen.push(p);
    };
    let mut ops: Vec<CounterOp> = Vec::new();
    let mut s = seen[start];
    for _ in start..seen.len() {
        for &l in v {
            let t = a.transition(s, l);
            ops.extend_from_slice(&t.ops);
            s = t.target;
        }
    }
    let e = effect_of(a.counter_count(), &ops)?;
    Ok(graph::reachable_from_positive_cycle(a.counter_count(), &e.edges())
        .into_iter()
        .any(|g| g))
}

/// Searches for an accepted lasso or ramp word.
pub fn emptiness_search(a: &MaxAutomaton, config: &SearchConfig) -> Result<Emptiness> {
    a.ensure_valid()?;
    let acceptance = a.acceptance.clone().simplify();
    if acceptance == Acceptance::False {
        return Ok(Emptiness::Empty(EmptyReason::FalseAcceptance));
    }
    let fixed = never_unbounded(a)?;
    let residual = acceptance
        .assume(&|c| if fixed[c.index()] { Some(true) } else { None })
        .simplify();
    if residual == Acceptance::False {
        return Ok(Emptiness::Empty(EmptyReason::NoGrowth));
    }

    let mut tested = 0usize;
    let try_word = |word: InfiniteWord, tested: &mut usize| -> Result<Option<Emptiness>> {
        *tested += 1;
        let m = membership(a, &word, &config.ramp)?;
        Ok((m.verdict == Verdict::Accept).then_some(Emptiness::Nonempty { word, membership: m }))
    };

    // a single positive clause is decided by the U-automaton of its counter;
    // its witness is tried after the enumeration, which finds shorter words
    let mut traced: Option<RampWord> = None;
    if let Acceptance::Not(inner) = &residual {
        if let Acceptance::Bounded(d) = **inner {
            if let Ok(u) = unboundedness_uautomaton(a, d, UAUTOMATON_BUDGET) {
                match uauto_nonempty(&u) {
                    None => return Ok(Emptiness::Empty(EmptyReason::NoTrace)),
                    Some(witness) => traced = Some(witness.ramp(&u)),
                }
            }
        }
    }

    // one prefix per reachable state, shortest first
    let mut prefixes: Vec<(StateId, FiniteWord)> = Vec::new();
    for u in words(a, 0, config.max_prefix) {
        let q = a.state_after(a.initial, &u);
        if !prefixes.iter().any(|(p, _)| *p == q) {
            prefixes.push((q, u));
        }
    }
    let pumps = words(a, 1, config.max_pump);

    for (_, u) in &prefixes {
        for v in &pumps {
            if tested >= config.budget {
                return Ok(Emptiness::Unknown { candidates: tested });
            }
            let word = InfiniteWord::Lasso(LassoWord {
                prefix: u.clone(),
                period: v.clone(),
            });
            if let Some(found) = try_word(word, &mut tested)? {
                return Ok(found);
            }
        }
    }

    let separators = words(a, 0, config.max_separator);
    for (q, u) in &prefixes {
        for v in &pumps {
            if !pump_can_grow(a, *q, v)? {
                continue;
            }
            for w in &separators {
                if tested >= config.budget {
                    return Ok(Emptiness::Unknown { candidates: tested });
                }
                let word = InfiniteWord::Ramp(RampWord {
                    prefix: u.clone(),
                    pump: v.clone(),
                    separator: w.clone(),
                    start: 1,
                });
                if let Some(found) = try_word(word, &mut tested)? {
                    return Ok(found);
                }
            }
        }
    }
    if let Some(ramp) = traced {
        if tested < config.budget {
            if let Some(found) = try_word(InfiniteWord::Ramp(ramp), &mut tested)? {
                return Ok(found);
            }
        }
    }
    Ok(Emptiness::Unknown { candidates: tested })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::Connective;
    use crate::fixtures::{constant, contains_b, gap};
    use crate::muller::{from_muller, MullerAutomaton};
    use crate::ops::{complement, product};

    #[test]
    fn gap_is_nonempty_with_a_ramp_witness() {
        let g = gap();
        match emptiness_search(&g, &SearchConfig::default()).unwrap() {
            Emptiness::Nonempty { word, .. } => {
                assert!(!word.is_lasso());
                assert_eq!(word.to_spec(&g.alphabet, 0), "ramp::a:b");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn false_acceptance_is_empty() {
        assert_eq!(
            emptiness_search(&constant(false), &SearchConfig::default()).unwrap(),
            Emptiness::Empty(EmptyReason::FalseAcceptance)
        );
        let m = MullerAutomaton::from_fn(vec!['a', 'b'], 0, 2, 0, |_, l| l.symbol as usize, vec![vec![1], vec![0, 1]]);
        let a = from_muller(&m).unwrap();
        let both = product(&a, &complement(&a), Connective::And).unwrap();
        assert_eq!(
            emptiness_search(&both, &SearchConfig::default()).unwrap(),
            Emptiness::Empty(EmptyReason::FalseAcceptance)
        );
    }

    #[test]
    fn counters_without_growth_make_unbounded_atoms_false() {
        let mut g = gap();
        g.delta[0].as_mut().unwrap().ops.clear();
        assert_eq!(never_unbounded(&g).unwrap(), vec![true]);
        assert_eq!(
            emptiness_search(&g, &SearchConfig::default()).unwrap(),
            Emptiness::Empty(EmptyReason::NoGrowth)
        );
    }

    #[test]
    fn lasso_witness_for_contains_b() {
        match emptiness_search(&contains_b(), &SearchConfig::default()).unwrap() {
            Emptiness::Nonempty { word, .. } => assert!(word.is_lasso()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn tiny_budget_gives_unknown() {
        let config = SearchConfig {
            budget: 3,
            ..SearchConfig::default()
        };
        assert_eq!(
            emptiness_search(&gap(), &config).unwrap(),
            Emptiness::Unknown { candidates: 3 }
        );
    }

    #[test]
    fn growth_that_is_never_output_again_is_empty() {
        // state 0 counts a's; after the first b the count is frozen and
        // output forever, so the outputs are bounded on every word
        use crate::automaton::{Counter, Transition};
        let c = Counter(0);
        let a = MaxAutomaton {
            alphabet: vec!['a', 'b'],
            tracks: 0,
            state_names: vec!["count".into(), "frozen".into()],
            initial: 0,
            counter_names: vec!["c".into()],
            delta: vec![
                Some(Transition::new(0, vec![CounterOp::Increment(c)])),
                Some(Transition::new(1, Vec::new())),
                Some(Transition::new(1, vec![CounterOp::Output(c)])),
                Some(Transition::new(1, vec![CounterOp::Output(c)])),
            ],
            acceptance: Acceptance::unbounded(c),
        };
        assert_eq!(never_unbounded(&a).unwrap(), vec![false]);
        assert_eq!(
            emptiness_search(&a, &SearchConfig::default()).unwrap(),
            Emptiness::Empty(EmptyReason::NoTrace)
        );
    }
}
