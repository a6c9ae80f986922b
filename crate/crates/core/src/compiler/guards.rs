//! Guarded max-automata and the elimination of guarded outputs by thread
//! simulation.
//!
//! A guarded output `if L then output(c)` emits the value of `c` only when
//! the rest of the input (from the next letter on) belongs to `L`. The
//! simulation starts a thread in the guard automaton at each guarded
//! output, carrying the output value. Threads in the same guard state have
//! the same future and are merged, keeping the larger number. The guard
//! automaton's spanning runs decide which threads are accepted: a thread is
//! accepted iff the track it converges with is, and the numbers of threads
//! sitting on a track are output to a per-track counter.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::acceptance::Acceptance;
use crate::automaton::{Counter, CounterOp, Letter, MaxAutomaton, StateId, Transition};
use crate::compiler::spanning::{spanning_transducer, SpanLetter, Transducer, MAX_SPANNING_STATES};
use crate::error::{Error, Result};
use crate::word::LassoWord;

/// A guard language: the language of `automaton` started in `start`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Guard {
    pub automaton: MaxAutomaton,
    pub start: StateId,
}

/// A max-automaton whose ops may include `GuardedOutput(c, g)`, where `g`
/// indexes `guards`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GuardedMaxAutomaton {
    pub automaton: MaxAutomaton,
    pub guards: Vec<Guard>,
}

impl GuardedMaxAutomaton {
    /// Reference semantics on a lasso: runs the automaton for `periods`
    /// periods and returns, per counter, the values output (plain outputs
    /// and guarded outputs whose guard accepts the remaining suffix).
    pub fn outputs_on_lasso(&self, w: &LassoWord, periods: usize) -> Result<Vec<Vec<u64>>> {
        let a = &self.automaton;
        let mut values = vec![0u64; a.counter_count()];
        let mut out = vec![Vec::new(); a.counter_count()];
        let mut q = a.initial;
        let len = w.prefix.len() + periods * w.period.len();
        for n in 0..len {
            let t = a.transition(q, w.letter_at(n));
            for op in &t.ops {
                match *op {
                    CounterOp::GuardedOutput(c, g) => {
                        let guard = &self.guards[g.0 as usize];
                        let suffix = suffix_of(w, n + 1);
                        let m = crate::membership::lasso_membership(&guard.automaton.with_initial(guard.start), &suffix)?;
                        if m.verdict == crate::membership::Verdict::Accept {
                            out[c.index()].push(values[c.index()]);
                        }
                    }
                    other => crate::automaton::apply_ops(&[other], &mut values, |c, v| out[c.index()].push(v))?,
                }
            }
            q = t.target;
        }
        Ok(out)
    }
}

/// The lasso read from position `n` on.
pub fn suffix_of(w: &LassoWord, n: usize) -> LassoWord {
    if n <= w.prefix.len() {
        return LassoWord {
            prefix: w.prefix[n..].to_vec(),
            period: w.period.clone(),
        };
    }
    let k = (n - w.prefix.len()) % w.period.len();
    let mut period = w.period[k..].to_vec();
    period.extend_from_slice(&w.period[..k]);
    LassoWord {
        prefix: Vec::new(),
        period,
    }
}

struct Pool {
    counter: Counter,
    guard: usize,
    /// First thread-number counter; `number + s` holds the number of the
    /// thread in state `s`, `number + size + s` is its update buffer.
    number: Counter,
    /// First per-track output counter.
    track_out: Counter,
}

struct GuardRuns {
    automaton: MaxAutomaton,
    transducer: Transducer<SpanLetter>,
    /// First counter of track 0's copy; track `i` starts at
    /// `copies + i * (k + 1)`, its restart counter is the last of the block.
    copies: Counter,
}

impl GuardRuns {
    fn size(&self) -> usize {
        self.automaton.state_count()
    }

    fn copy(&self, track: usize, c: Counter) -> Counter {
        let k = self.automaton.counter_count();
        Counter::from_index(self.copies.index() + track * (k + 1) + c.index())
    }

    fn restarts(&self, track: usize) -> Counter {
        self.copy(track, Counter::from_index(self.automaton.counter_count()))
    }
}

/// Replaces guarded outputs by plain ones.
pub fn remove_guards(g: &GuardedMaxAutomaton, budget: usize, guard_limit: usize) -> Result<MaxAutomaton> {
    if g.guards.len() > guard_limit {
        return Err(Error::TooManyGuards {
            count: g.guards.len(),
            limit: guard_limit,
        });
    }
    let a = &g.automaton;
    // guard automata, shared between guard ids that only differ in start
    let mut runs: Vec<GuardRuns> = Vec::new();
    let mut guard_runs = Vec::with_capacity(g.guards.len());
    for guard in &g.guards {
        if !guard.automaton.is_unguarded() {
            return Err(Error::GuardedOp);
        }
        guard.automaton.same_input_alphabet(a)?;
        let i = match runs.iter().position(|r| r.automaton == guard.automaton) {
            Some(i) => i,
            None => {
                if guard.automaton.state_count() > MAX_SPANNING_STATES {
                    return Err(Error::StateBudget {
                        budget: MAX_SPANNING_STATES,
                        stage: "guard threads",
                    });
                }
                runs.push(GuardRuns {
                    transducer: spanning_transducer(&guard.automaton, budget)?,
                    automaton: guard.automaton.clone(),
                    copies: Counter(0),
                });
                runs.len() - 1
            }
        };
        guard_runs.push(i);
    }

    let mut names = a.counter_names.clone();
    let mut pools: Vec<Pool> = Vec::new();
    let mut pool_of: HashMap<(Counter, usize), usize> = HashMap::new();
    for t in a.delta.iter().flatten() {
        for op in &t.ops {
            if let CounterOp::GuardedOutput(c, id) = *op {
                let r = *guard_runs.get(id.0 as usize).ok_or_else(|| {
                    Error::Malformed(format!("guard id {} is not defined", id.0))
                })?;
                pool_of.entry((c, r)).or_insert_with(|| {
                    pools.push(Pool {
                        counter: c,
                        guard: r,
                        number: Counter(0),
                        track_out: Counter(0),
                    });
                    pools.len() - 1
                });
            }
        }
    }
    for (p, pool) in pools.iter_mut().enumerate() {
        let size = runs[pool.guard].size();
        pool.number = Counter::from_index(names.len());
        for s in 0..size {
            names.push(format!("thread{p}_{s}"));
        }
        for s in 0..size {
            names.push(format!("thread{p}_{s}'"));
        }
    }
    for (r, run) in runs.iter_mut().enumerate() {
        run.copies = Counter::from_index(names.len());
        for i in 0..run.automaton.state_count() {
            for c in &run.automaton.counter_names {
                names.push(format!("guard{r}.{c}@{i}"));
            }
            names.push(format!("guard{r}.restart@{i}"));
        }
    }
    for (p, pool) in pools.iter_mut().enumerate() {
        pool.track_out = Counter::from_index(names.len());
        for i in 0..runs[pool.guard].size() {
            names.push(format!("passed{p}@{i}"));
        }
    }

    // composite state: [state of a, live mask per pool (two words), transducer state per guard]
    let letters = a.letter_count();
    let start: Vec<u32> = core::iter::once(a.initial as u32)
        .chain(pools.iter().flat_map(|_| [0u32, 0u32]))
        .chain(runs.iter().map(|r| r.transducer.initial as u32))
        .collect();
    let mut states = vec![start.clone()];
    let mut index: HashMap<Vec<u32>, StateId> = HashMap::new();
    index.insert(start, 0);
    let mut delta = Vec::new();
    let mut i = 0;
    while i < states.len() {
        let state = states[i].clone();
        let q = state[0] as usize;
        let live: Vec<u64> = (0..pools.len())
            .map(|p| state[1 + 2 * p] as u64 | (state[2 + 2 * p] as u64) << 32)
            .collect();
        let perm_at = 1 + 2 * pools.len();
        for l in 0..letters {
            let letter = a.letter_at(l);
            let mut ops = Vec::new();
            let mut next_live = live.clone();
            for (p, pool) in pools.iter().enumerate() {
                next_live[p] = advance_threads(&runs[pool.guard], pool, live[p], letter, &mut ops);
            }
            let t = a.transition(q, letter);
            for op in &t.ops {
                match *op {
                    CounterOp::GuardedOutput(c, id) => {
                        let r = guard_runs[id.0 as usize];
                        let p = pool_of[&(c, r)];
                        let s = g.guards[id.0 as usize].start;
                        ops.push(CounterOp::MaxInto(Counter::from_index(pools[p].number.index() + s), c));
                        next_live[p] |= 1 << s;
                    }
                    other => ops.push(other),
                }
            }
            let mut next_perms = Vec::with_capacity(runs.len());
            let mut outs: Vec<&SpanLetter> = Vec::with_capacity(runs.len());
            for (r, run) in runs.iter().enumerate() {
                let (tt, out) = run.transducer.step(state[perm_at + r] as usize, letter);
                next_perms.push(tt as u32);
                outs.push(out);
                for track in 0..run.size() {
                    if out.restarted(track) {
                        let z = run.restarts(track);
                        ops.extend([CounterOp::Increment(z), CounterOp::Output(z)]);
                    } else {
                        let gt = run.automaton.transition(out.before[track], letter);
                        ops.extend(gt.ops.iter().map(|op| op.map_counters(|c| run.copy(track, c))));
                    }
                }
            }
            for (p, pool) in pools.iter().enumerate() {
                let out = outs[pool.guard];
                for track in 0..runs[pool.guard].size() {
                    let s = out.after[track];
                    if next_live[p] >> s & 1 == 1 {
                        let o = Counter::from_index(pool.track_out.index() + track);
                        ops.extend([
                            CounterOp::Reset(o),
                            CounterOp::MaxInto(o, Counter::from_index(pool.number.index() + s)),
                            CounterOp::Output(o),
                        ]);
                    }
                }
            }
            let key: Vec<u32> = core::iter::once(t.target as u32)
                .chain(next_live.iter().flat_map(|&m| [m as u32, (m >> 32) as u32]))
                .chain(next_perms)
                .collect();
            let target = match index.get(&key) {
                Some(&s) => s,
                None => {
                    if states.len() >= budget {
                        return Err(Error::StateBudget {
                            budget,
                            stage: "guard elimination",
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

    // stream of c unbounded iff its plain outputs are, or for some pool and
    // track, the track is accepting and the numbers passed on it are
    let acceptance = a
        .acceptance
        .substitute(&mut |c| {
            let mut parts = vec![Acceptance::Bounded(c)];
            for pool in pools.iter().filter(|p| p.counter == c) {
                let run = &runs[pool.guard];
                for track in 0..run.size() {
                    let accepting = Acceptance::and([
                        run.automaton.acceptance.map_counters(|d| run.copy(track, d)),
                        Acceptance::Bounded(run.restarts(track)),
                        Acceptance::unbounded(Counter::from_index(pool.track_out.index() + track)),
                    ]);
                    parts.push(accepting.negate());
                }
            }
            Acceptance::and(parts)
        })
        .simplify();
    Ok(MaxAutomaton {
        alphabet: a.alphabet.clone(),
        tracks: a.tracks,
        state_names: (0..states.len()).map(|s| format!("s{s}")).collect(),
        initial: 0,
        counter_names: crate::ops::unique_names(names),
        delta,
        acceptance,
    })
}

/// Moves every live thread of `pool` one letter forward, merging threads
/// that meet. Returns the new live mask.
fn advance_threads(run: &GuardRuns, pool: &Pool, live: u64, letter: Letter, ops: &mut Vec<CounterOp>) -> u64 {
    let size = run.size();
    let number = |s: usize| Counter::from_index(pool.number.index() + s);
    let buffer = |s: usize| Counter::from_index(pool.number.index() + size + s);
    let mut next = 0u64;
    let mut preds: Vec<Vec<usize>> = vec![Vec::new(); size];
    for s in (0..size).filter(|&s| live >> s & 1 == 1) {
        let t = run.automaton.transition(s, letter).target;
        preds[t].push(s);
        next |= 1 << t;
    }
    for (t, from) in preds.iter().enumerate() {
        if !from.is_empty() {
            ops.push(CounterOp::Reset(buffer(t)));
            ops.extend(from.iter().map(|&s| CounterOp::MaxInto(buffer(t), number(s))));
        }
    }
    for (t, from) in preds.iter().enumerate() {
        if live >> t & 1 == 1 || !from.is_empty() {
            ops.push(CounterOp::Reset(number(t)));
        }
        if !from.is_empty() {
            ops.push(CounterOp::MaxInto(number(t), buffer(t)));
        }
    }
    next
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::GuardId;
    use crate::fixtures::{constant, contains_b, gap};
    use crate::membership::{lasso_membership, Verdict};
    use crate::word::{parse_word_spec, InfiniteWord};

    fn lasso(spec: &str) -> LassoWord {
        match parse_word_spec(spec, &['a', 'b'], 0).unwrap() {
            InfiniteWord::Lasso(w) => w,
            _ => unreachable!(),
        }
    }

    /// GAP with its output guarded by `guard`.
    fn guarded_gap(guard: MaxAutomaton) -> GuardedMaxAutomaton {
        let mut a = gap();
        a.delta[1].as_mut().unwrap().ops = vec![
            CounterOp::GuardedOutput(Counter(0), GuardId(0)),
            CounterOp::Reset(Counter(0)),
        ];
        GuardedMaxAutomaton {
            automaton: a,
            guards: vec![Guard {
                automaton: guard,
                start: 0,
            }],
        }
    }

    const SPECS: [&str; 8] = [
        "lasso::ab",
        "lasso::a",
        "lasso::b",
        "lasso:aab:b",
        "lasso:ab:aab",
        "lasso:bbb:ba",
        "lasso::aabab",
        "lasso:a:bba",
    ];

    #[test]
    fn true_guard_is_a_plain_output() {
        let plain = remove_guards(&guarded_gap(constant(true)), 10_000, 8).unwrap();
        for spec in SPECS {
            let w = lasso(spec);
            assert_eq!(
                lasso_membership(&plain, &w).unwrap().verdict,
                lasso_membership(&gap(), &w).unwrap().verdict,
                "{spec}"
            );
        }
    }

    #[test]
    fn false_guard_silences_the_stream() {
        let g = guarded_gap(constant(false));
        let plain = remove_guards(&g, 10_000, 8).unwrap();
        for spec in SPECS {
            assert_eq!(lasso_membership(&plain, &lasso(spec)).unwrap().verdict, Verdict::Reject);
        }
        assert!(g.outputs_on_lasso(&lasso("lasso::ab"), 3).unwrap()[0].is_empty());
    }

    #[test]
    fn guard_looking_at_the_future() {
        // outputs pass only while a b is still to come: every lasso with b in
        // the period behaves like GAP
        let plain = remove_guards(&guarded_gap(contains_b()), 10_000, 8).unwrap();
        for spec in SPECS {
            let w = lasso(spec);
            assert_eq!(
                lasso_membership(&plain, &w).unwrap().verdict,
                lasso_membership(&gap(), &w).unwrap().verdict,
                "{spec}"
            );
        }
    }

    #[test]
    fn guard_limit_is_enforced() {
        let mut g = guarded_gap(constant(true));
        g.guards.push(g.guards[0].clone());
        assert!(matches!(
            remove_guards(&g, 10_000, 1),
            Err(Error::TooManyGuards { count: 2, limit: 1 })
        ));
    }

    #[test]
    fn suffixes() {
        let w = lasso("lasso:ab:ba");
        assert_eq!(suffix_of(&w, 1).prefix, vec![Letter::plain(1)]);
        let s = suffix_of(&w, 3);
        assert!(s.prefix.is_empty());
        assert_eq!(s.period, vec![Letter::plain(0), Letter::plain(1)]);
    }
}
