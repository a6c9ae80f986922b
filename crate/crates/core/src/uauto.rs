//! One-counter nondeterministic automata without `max`, used to test whether
//! a counter of a max-automaton takes unbounded output values.
//!
//! The U-automaton reads the same input as the max-automaton and simulates
//! its control, so its language is the set of words whose run has
//! arbitrarily long d-traces ending in outputs of `d`.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::automaton::{Counter, CounterOp, Letter, MaxAutomaton, StateId};
use crate::error::{Error, Result};
use crate::transfer::{TransferClass, TransferMatrix};
use crate::word::{FiniteWord, RampWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum UOp {
    Increment,
    Reset,
    Output,
}

/// What the U-automaton is doing between two letters.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Mode {
    /// Not inside a guessed trace.
    Idle,
    /// Inside a trace for loop counter `c`; `row[e]` is the transfer from
    /// `c` at the last loop position to `e` now.
    Loop { counter: Counter, row: Vec<TransferClass> },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UTransition {
    pub letter: Letter,
    pub target: usize,
    pub ops: Vec<UOp>,
}

#[derive(Clone, Debug)]
pub struct UAutomaton {
    pub alphabet: Vec<char>,
    pub tracks: usize,
    /// Control states: a state of the simulated max-automaton and a mode.
    pub states: Vec<(StateId, Mode)>,
    pub initial: usize,
    pub transitions: Vec<Vec<UTransition>>,
}

impl UAutomaton {
    pub fn state_count(&self) -> usize {
        self.states.len()
    }
}

/// Builds the U-automaton guessing d-traces of `a` for target counter `d`:
/// it increments at each loop position, and at an output of `d` reached by
/// a transfer from the loop counter it outputs and resets.
pub fn unboundedness_uautomaton(a: &MaxAutomaton, d: Counter, state_budget: usize) -> Result<UAutomaton> {
    a.ensure_valid()?;
    if d.index() >= a.counter_count() {
        return Err(Error::Malformed(alloc::format!("no counter #{}", d.0)));
    }
    let k = a.counter_count();
    let mut index: HashMap<(StateId, Mode), usize> = HashMap::new();
    let mut states = vec![(a.initial, Mode::Idle)];
    index.insert((a.initial, Mode::Idle), 0);
    let mut transitions: Vec<Vec<UTransition>> = Vec::new();
    let mut queue = VecDeque::from([0usize]);
    let unit = |c: Counter| {
        let mut row = vec![TransferClass::None; k];
        row[c.index()] = TransferClass::Transfer;
        row
    };

    while let Some(u) = queue.pop_front() {
        let (q, mode) = states[u].clone();
        // choices at the position before the next letter
        let mut starts: Vec<(Mode, Vec<UOp>)> = vec![(mode.clone(), Vec::new())];
        match &mode {
            Mode::Idle => {
                for c in a.counters() {
                    starts.push((Mode::Loop { counter: c, row: unit(c) }, vec![UOp::Increment]));
                }
            }
            Mode::Loop { counter, row } => {
                if row[counter.index()] == TransferClass::TransferWithIncrement {
                    starts.push((
                        Mode::Loop {
                            counter: *counter,
                            row: unit(*counter),
                        },
                        vec![UOp::Increment],
                    ));
                }
                starts.push((Mode::Idle, vec![UOp::Reset]));
            }
        }
        let mut out = Vec::new();
        for l in 0..a.letter_count() {
            let letter = a.letter_at(l);
            let t = a.transition_at(q, l);
            for (mode, pre) in &starts {
                let mut targets: Vec<(Mode, Vec<UOp>)> = Vec::new();
                match mode {
                    Mode::Idle => targets.push((Mode::Idle, pre.clone())),
                    Mode::Loop { counter, row } => {
                        let mut row = row.clone();
                        for &op in &t.ops {
                            if op == CounterOp::Output(d) && row[d.index()] >= TransferClass::Transfer {
                                let mut ops = pre.clone();
                                ops.extend([UOp::Output, UOp::Reset]);
                                targets.push((Mode::Idle, ops));
                            }
                            let m = TransferMatrix::of_op(k, op)?;
                            row = (0..k)
                                .map(|e| {
                                    (0..k)
                                        .map(|f| row[f].then(m.get(Counter::from_index(f), Counter::from_index(e))))
                                        .max()
                                        .unwrap_or(TransferClass::None)
                                })
                                .collect();
                        }
                        if row.iter().any(|c| c.transfers()) {
                            targets.push((Mode::Loop { counter: *counter, row }, pre.clone()));
                        }
                    }
                }
                for (m, ops) in targets {
                    let key = (t.target, m);
                    let target = match index.get(&key) {
                        Some(&i) => i,
                        None => {
                            if states.len() >= state_budget {
                                return Err(Error::StateBudget {
                                    budget: state_budget,
                                    stage: "unboundedness automaton",
                                });
                            }
                            states.push(key.clone());
                            index.insert(key, states.len() - 1);
                            queue.push_back(states.len() - 1);
                            states.len() - 1
                        }
                    };
                    let tr = UTransition {
                        letter,
                        target,
                        ops,
                    };
                    if !out.contains(&tr) {
                        out.push(tr);
                    }
                }
            }
        }
        if transitions.len() <= u {
            transitions.resize(u + 1, Vec::new());
        }
        transitions[u] = out;
    }
    transitions.resize(states.len(), Vec::new());
    Ok(UAutomaton {
        alphabet: a.alphabet.clone(),
        tracks: a.tracks,
        states,
        initial: 0,
        transitions,
    })
}

/// A nonemptiness witness `u · α β · α² β · α³ β · …`, given both as
/// input words and as the state path it follows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UWitness {
    pub pivot: usize,
    pub prefix: Vec<(usize, usize)>,
    pub pump: Vec<(usize, usize)>,
    pub separator: Vec<(usize, usize)>,
}

impl UWitness {
    fn letters(u: &UAutomaton, path: &[(usize, usize)]) -> FiniteWord {
        path.iter().map(|&(s, t)| u.transitions[s][t].letter).collect()
    }

    /// The witness as a ramp word over the input alphabet.
    pub fn ramp(&self, u: &UAutomaton) -> RampWord {
        RampWord {
            prefix: Self::letters(u, &self.prefix),
            pump: Self::letters(u, &self.pump),
            separator: Self::letters(u, &self.separator),
            start: 1,
        }
    }
}

/// Nonempty iff some reachable state `p` has a reset-free cycle with an
/// increment, and a cycle that outputs before its first reset.
pub fn uauto_nonempty(u: &UAutomaton) -> Option<UWitness> {
    let n = u.state_count();
    let resets = |ops: &[UOp]| ops.contains(&UOp::Reset);
    // edges as (source, transition index)
    let reach = bfs_paths(u, u.initial, |_| true);
    for p in 0..n {
        let Some(prefix) = reach[p].clone() else { continue };
        // α: p -> inc edge -> p, all reset-free
        let reset_free = |s: usize, t: usize| !resets(&u.transitions[s][t].ops);
        let from_p = bfs_paths(u, p, |(s, t)| reset_free(s, t));
        let mut pump = None;
        'edges: for s in 0..n {
            let Some(to_s) = &from_p[s] else { continue };
            for (t, tr) in u.transitions[s].iter().enumerate() {
                if !tr.ops.contains(&UOp::Increment) || resets(&tr.ops) {
                    continue;
                }
                let back = bfs_paths(u, tr.target, |(s, t)| reset_free(s, t));
                if let Some(back) = &back[p] {
                    let mut path = to_s.clone();
                    path.push((s, t));
                    path.extend(back);
                    pump = Some(path);
                    break 'edges;
                }
            }
        }
        let Some(pump) = pump else { continue };
        // β: reset-free path to an edge outputting before resetting, then back
        let mut separator = None;
        'out: for s in 0..n {
            let Some(to_s) = &from_p[s] else { continue };
            for (t, tr) in u.transitions[s].iter().enumerate() {
                let out_at = tr.ops.iter().position(|&o| o == UOp::Output);
                let reset_at = tr.ops.iter().position(|&o| o == UOp::Reset);
                let Some(out_at) = out_at else { continue };
                if reset_at.is_some_and(|r| r < out_at) {
                    continue;
                }
                let back = bfs_paths(u, tr.target, |_| true);
                if let Some(back) = &back[p] {
                    let mut path = to_s.clone();
                    path.push((s, t));
                    path.extend(back);
                    separator = Some(path);
                    break 'out;
                }
            }
        }
        if let Some(separator) = separator {
            return Some(UWitness {
                pivot: p,
                prefix,
                pump,
                separator,
            });
        }
    }
    None
}

/// Shortest paths from `from` using only allowed edges.
fn bfs_paths(
    u: &UAutomaton,
    from: usize,
    allowed: impl Fn((usize, usize)) -> bool,
) -> Vec<Option<Vec<(usize, usize)>>> {
    let n = u.state_count();
    let mut parent: Vec<Option<(usize, usize)>> = vec![None; n];
    let mut seen = vec![false; n];
    seen[from] = true;
    let mut queue = VecDeque::from([from]);
    while let Some(s) = queue.pop_front() {
        for (t, tr) in u.transitions[s].iter().enumerate() {
            if allowed((s, t)) && !seen[tr.target] {
                seen[tr.target] = true;
                parent[tr.target] = Some((s, t));
                queue.push_back(tr.target);
            }
        }
    }
    (0..n)
        .map(|v| {
            if !seen[v] {
                return None;
            }
            let mut path = Vec::new();
            let mut x = v;
            while let Some((s, t)) = parent[x] {
                path.push((s, t));
                x = s;
            }
            path.reverse();
            Some(path)
        })
        .collect()
}

/// Follows a witness path for `blocks` blocks and reports the counter value
/// at each output, for checking witnesses.
pub fn replay_witness(u: &UAutomaton, w: &UWitness, blocks: usize) -> Vec<u64> {
    let mut value = 0u64;
    let mut outputs = Vec::new();
    let mut run = |path: &[(usize, usize)]| {
        for &(s, t) in path {
            for op in &u.transitions[s][t].ops {
                match op {
                    UOp::Increment => value += 1,
                    UOp::Reset => value = 0,
                    UOp::Output => outputs.push(value),
                }
            }
        }
    };
    run(&w.prefix);
    for k in 1..=blocks {
        for _ in 0..k {
            run(&w.pump);
        }
        run(&w.separator);
    }
    outputs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::gap;
    use crate::membership::{ramp_certify, RampConfig, Verdict};

    #[test]
    fn gap_counter_is_unbounded_on_a_ramp() {
        let g = gap();
        let u = unboundedness_uautomaton(&g, Counter(0), 10_000).unwrap();
        let w = uauto_nonempty(&u).expect("nonempty");
        let ramp = w.ramp(&u);
        assert_eq!(
            ramp_certify(&g, &ramp, &RampConfig::default()).unwrap().verdict,
            Verdict::Accept
        );
        let outs = replay_witness(&u, &w, 30);
        let per_block: Vec<u64> = outs.to_vec();
        assert!(per_block.windows(2).all(|p| p[1] > p[0]), "{per_block:?}");
    }

    #[test]
    fn always_reset_counter_gives_empty_automaton() {
        let mut g = gap();
        g.delta[0].as_mut().unwrap().ops = vec![CounterOp::Reset(Counter(0))];
        g.delta[1].as_mut().unwrap().ops = vec![CounterOp::Reset(Counter(0)), CounterOp::Output(Counter(0))];
        let u = unboundedness_uautomaton(&g, Counter(0), 10_000).unwrap();
        assert!(uauto_nonempty(&u).is_none());
    }

    fn manual(transitions: Vec<Vec<(usize, Vec<UOp>)>>) -> UAutomaton {
        UAutomaton {
            alphabet: vec!['a'],
            tracks: 0,
            states: (0..transitions.len()).map(|q| (q, Mode::Idle)).collect(),
            initial: 0,
            transitions: transitions
                .into_iter()
                .map(|ts| {
                    ts.into_iter()
                        .map(|(target, ops)| UTransition {
                            letter: Letter::plain(0),
                            target,
                            ops,
                        })
                        .collect()
                })
                .collect(),
        }
    }

    #[test]
    fn no_increments_means_empty() {
        let u = manual(vec![vec![(0, vec![UOp::Output])]]);
        assert!(uauto_nonempty(&u).is_none());
    }

    #[test]
    fn output_only_before_the_loop_means_empty() {
        // 0 --out--> 1, 1 --inc--> 1
        let u = manual(vec![vec![(1, vec![UOp::Output])], vec![(1, vec![UOp::Increment])]]);
        assert!(uauto_nonempty(&u).is_none());
        let looping = manual(vec![vec![(0, vec![UOp::Increment]), (0, vec![UOp::Output, UOp::Reset])]]);
        assert!(uauto_nonempty(&looping).is_some());
    }
}
