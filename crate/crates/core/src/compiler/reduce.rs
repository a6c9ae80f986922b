//! Language-preserving size reduction for compiled automata.
//!
//! Three steps, each exact:
//!
//! * counters that are never output are bounded on every run, so their
//!   atoms become `true`;
//! * when every counter is a visit counter (only incremented and output,
//!   each increment followed by an output in the same transition), `B(c)`
//!   holds iff the run takes a `c`-transition finitely often. Then
//!   transitions between strongly connected components carry no ops,
//!   counters with identical cyclic transition sets are merged, and if
//!   every component is uniformly accepting or rejecting, the whole
//!   condition collapses to one counter;
//! * states with identical behaviour (same ops, equivalent successors on
//!   every letter) are merged.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::{HashMap, HashSet};

use crate::acceptance::Acceptance;
use crate::automaton::{Counter, CounterOp, MaxAutomaton, Transition};
use crate::graph;
use crate::ops::trim;

/// Full reduction pipeline.
pub fn reduce(a: &MaxAutomaton) -> MaxAutomaton {
    let mut a = drop_silent_counters(&trim(a));
    if let Some(sets) = visit_sets(&a) {
        a = reduce_visits(&a, &sets);
    }
    trim(&minimize(&a))
}

/// Replaces atoms of counters without any reachable output by `true`.
pub fn drop_silent_counters(a: &MaxAutomaton) -> MaxAutomaton {
    let mut output = vec![false; a.counter_count()];
    for t in a.delta.iter().flatten() {
        for op in &t.ops {
            if let CounterOp::Output(c) | CounterOp::GuardedOutput(c, _) = *op {
                output[c.index()] = true;
            }
        }
    }
    if output.iter().all(|&o| o) {
        return a.clone();
    }
    let acceptance = a
        .acceptance
        .assume(&|c| if output[c.index()] { None } else { Some(true) });
    trim(&MaxAutomaton {
        acceptance,
        ..a.clone()
    })
}

/// For automata whose counters are all visit counters, the set of counters
/// visited by each transition (indexed like `delta`).
pub fn visit_sets(a: &MaxAutomaton) -> Option<Vec<Vec<Counter>>> {
    let mut out = Vec::with_capacity(a.delta.len());
    for t in &a.delta {
        let t = t.as_ref()?;
        let mut pending: Vec<Counter> = Vec::new();
        let mut visited: Vec<Counter> = Vec::new();
        for op in &t.ops {
            match *op {
                CounterOp::Increment(c) => {
                    if !pending.contains(&c) {
                        pending.push(c);
                    }
                }
                CounterOp::Output(c) => {
                    if let Some(i) = pending.iter().position(|&p| p == c) {
                        pending.swap_remove(i);
                        if !visited.contains(&c) {
                            visited.push(c);
                        }
                    }
                }
                _ => return None,
            }
        }
        if !pending.is_empty() {
            return None;
        }
        visited.sort_unstable();
        out.push(visited);
    }
    Some(out)
}

/// Whether some strongly connected part of `edges` (all inside one
/// component) has a visited-counter set on which the acceptance evaluates
/// to `want`. `None` when the search exceeds its work limit.
fn cycle_with_verdict(
    nodes: usize,
    edges: &[(usize, usize, u64)],
    acceptance: &Acceptance,
    want: bool,
) -> Option<bool> {
    let mut seen: HashSet<u64> = HashSet::new();
    let mut todo = vec![0u64];
    while let Some(removed) = todo.pop() {
        if !seen.insert(removed) {
            continue;
        }
        if seen.len() > 4096 {
            return None;
        }
        let kept: Vec<&(usize, usize, u64)> = edges.iter().filter(|e| e.2 & removed == 0).collect();
        let mut adj = vec![Vec::new(); nodes];
        for e in &kept {
            adj[e.0].push(e.1);
        }
        let comp = graph::scc(&adj);
        let mut present: BTreeMap<usize, u64> = BTreeMap::new();
        for e in &kept {
            if comp[e.0] == comp[e.1] {
                *present.entry(comp[e.0]).or_insert(0) |= e.2;
            }
        }
        for &mask in present.values() {
            let verdict = acceptance
                .eval(&|c: Counter| Some(mask >> c.index() & 1 == 0))
                .ok()?;
            if verdict == want {
                return Some(true);
            }
            let mut rest = mask;
            while rest != 0 {
                let bit = rest & rest.wrapping_neg();
                rest &= rest - 1;
                todo.push(removed | bit);
            }
        }
    }
    Some(false)
}

fn reduce_visits(a: &MaxAutomaton, sets: &[Vec<Counter>]) -> MaxAutomaton {
    let letters = a.letter_count();
    let n = a.state_count();
    let adj: Vec<Vec<usize>> = (0..n)
        .map(|q| (0..letters).map(|l| a.transition_at(q, l).target).collect())
        .collect();
    let comp = graph::scc(&adj);
    let cyclic = |i: usize| comp[i / letters] == comp[a.delta[i].as_ref().expect("complete").target];

    // counters keyed by the set of cyclic transitions visiting them
    let mut users: Vec<Vec<usize>> = vec![Vec::new(); a.counter_count()];
    for (i, set) in sets.iter().enumerate() {
        if cyclic(i) {
            for c in set {
                users[c.index()].push(i);
            }
        }
    }
    let mut class_of: HashMap<&[usize], usize> = HashMap::new();
    let mut rep: Vec<Option<usize>> = vec![None; a.counter_count()];
    let mut names: Vec<String> = Vec::new();
    for (c, u) in users.iter().enumerate() {
        if u.is_empty() {
            continue;
        }
        let next = class_of.len();
        let k = *class_of.entry(u.as_slice()).or_insert_with(|| {
            names.push(a.counter_names[c].clone());
            next
        });
        rep[c] = Some(k);
    }
    let acceptance = a
        .acceptance
        .substitute(&mut |c| match rep[c.index()] {
            Some(k) => Acceptance::Bounded(Counter::from_index(k)),
            None => Acceptance::True,
        })
        .simplify();
    let merged: Vec<Vec<Counter>> = sets
        .iter()
        .enumerate()
        .map(|(i, set)| {
            if !cyclic(i) {
                return Vec::new();
            }
            let mut s: Vec<Counter> = set
                .iter()
                .filter_map(|c| rep[c.index()].map(Counter::from_index))
                .collect();
            s.sort_unstable();
            s.dedup();
            s
        })
        .collect();

    let collapsed = if names.len() <= 64 {
        weak_collapse(a, &comp, &merged, &acceptance)
    } else {
        None
    };
    let (counter_names, visits, acceptance) = match collapsed {
        Some((visits, acceptance)) => {
            let names = if acceptance.atoms().is_empty() {
                Vec::new()
            } else {
                vec![String::from("acc")]
            };
            (names, visits, acceptance)
        }
        None => (names, merged, acceptance),
    };
    let delta = a
        .delta
        .iter()
        .zip(&visits)
        .map(|(t, set)| {
            let t = t.as_ref().expect("complete");
            let ops = set
                .iter()
                .flat_map(|&c| [CounterOp::Increment(c), CounterOp::Output(c)])
                .collect();
            Some(Transition::new(t.target, ops))
        })
        .collect();
    MaxAutomaton {
        counter_names,
        delta,
        acceptance,
        ..a.clone()
    }
}

/// If every strongly connected component accepts either all or none of its
/// cycles, returns per-transition visits of a single counter `acc` (counter
/// 0) on the cyclic transitions of accepting components, and `!B(acc)`.
fn weak_collapse(
    a: &MaxAutomaton,
    comp: &[usize],
    visits: &[Vec<Counter>],
    acceptance: &Acceptance,
) -> Option<(Vec<Vec<Counter>>, Acceptance)> {
    let letters = a.letter_count();
    let mut members: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (q, &c) in comp.iter().enumerate() {
        members.entry(c).or_default().push(q);
    }
    let mut accepting: HashMap<usize, bool> = HashMap::new();
    for (&c, states) in &members {
        let local: HashMap<usize, usize> = states.iter().enumerate().map(|(i, &q)| (q, i)).collect();
        let mut edges = Vec::new();
        for &q in states {
            for l in 0..letters {
                let i = q * letters + l;
                let t = a.delta[i].as_ref().expect("complete").target;
                if let Some(&j) = local.get(&t) {
                    let mask = visits[i].iter().fold(0u64, |m, c| m | 1 << c.index());
                    edges.push((local[&q], j, mask));
                }
            }
        }
        if edges.is_empty() {
            continue;
        }
        let good = cycle_with_verdict(states.len(), &edges, acceptance, true)?;
        let bad = cycle_with_verdict(states.len(), &edges, acceptance, false)?;
        if good && bad {
            return None;
        }
        accepting.insert(c, good);
    }
    let acc = Counter(0);
    let any = accepting.values().any(|&g| g);
    let all = accepting.values().all(|&g| g);
    let out: Vec<Vec<Counter>> = a
        .delta
        .iter()
        .enumerate()
        .map(|(i, t)| {
            let from = comp[i / letters];
            let to = comp[t.as_ref().expect("complete").target];
            if any && !all && from == to && accepting.get(&from) == Some(&true) {
                vec![acc]
            } else {
                Vec::new()
            }
        })
        .collect();
    let acceptance = if !any {
        Acceptance::False
    } else if all {
        Acceptance::True
    } else {
        Acceptance::unbounded(acc)
    };
    Some((out, acceptance))
}

/// Quotient by the coarsest partition in which equivalent states have, on
/// every letter, identical op lists and equivalent successors.
pub fn minimize(a: &MaxAutomaton) -> MaxAutomaton {
    let n = a.state_count();
    let letters = a.letter_count();
    let mut block = vec![0usize; n];
    let mut count = 1;
    loop {
        let mut index: HashMap<Vec<(usize, &[CounterOp])>, usize> = HashMap::new();
        let mut next = vec![0usize; n];
        for q in 0..n {
            let mut sig = Vec::with_capacity(letters + 1);
            sig.push((block[q], &[][..]));
            for l in 0..letters {
                let t = a.transition_at(q, l);
                sig.push((block[t.target], t.ops.as_slice()));
            }
            let k = index.len();
            next[q] = *index.entry(sig).or_insert(k);
        }
        let new_count = index.len();
        block = next;
        if new_count == count {
            break;
        }
        count = new_count;
    }
    // renumber so that the initial state's block comes first
    let mut order = vec![usize::MAX; count];
    let mut reps = Vec::with_capacity(count);
    let mut queue = vec![a.initial];
    order[block[a.initial]] = 0;
    reps.push(a.initial);
    while let Some(q) = queue.pop() {
        for l in 0..letters {
            let t = a.transition_at(q, l).target;
            if order[block[t]] == usize::MAX {
                order[block[t]] = reps.len();
                reps.push(t);
                queue.push(t);
            }
        }
    }
    let delta = reps
        .iter()
        .flat_map(|&q| {
            let order = &order;
            let block = &block;
            (0..letters).map(move |l| {
                let t = a.transition_at(q, l);
                Some(Transition::new(order[block[t.target]], t.ops.clone()))
            })
        })
        .collect();
    MaxAutomaton {
        state_names: (0..reps.len()).map(|i| format!("s{i}")).collect(),
        initial: 0,
        delta,
        ..a.clone()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::Connective;
    use crate::fixtures::{contains_b, gap};
    use crate::membership::lasso_membership;
    use crate::muller::{from_muller, MullerAutomaton};
    use crate::ops::product;
    use crate::word::LassoWord;
    use crate::Letter;

    fn lassos() -> Vec<LassoWord> {
        let words = |n: usize| -> Vec<Vec<Letter>> {
            let mut out = vec![Vec::new()];
            let mut layer = vec![Vec::new()];
            for _ in 0..n {
                let mut next = Vec::new();
                for w in &layer {
                    for s in 0..2u16 {
                        let mut x: Vec<Letter> = w.clone();
                        x.push(Letter::plain(s));
                        next.push(x);
                    }
                }
                out.extend(next.iter().cloned());
                layer = next;
            }
            out
        };
        let mut out = Vec::new();
        for u in words(2) {
            for v in words(3).into_iter().filter(|v| !v.is_empty()) {
                out.push(LassoWord {
                    prefix: u.clone(),
                    period: v,
                });
            }
        }
        out
    }

    fn same_language(a: &MaxAutomaton, b: &MaxAutomaton) {
        for w in lassos() {
            assert_eq!(
                lasso_membership(a, &w).unwrap().verdict,
                lasso_membership(b, &w).unwrap().verdict,
                "{w:?}"
            );
        }
    }

    #[test]
    fn gap_is_already_reduced() {
        let g = gap();
        let r = reduce(&g);
        assert_eq!(r.state_count(), 1);
        assert_eq!(r.counter_count(), 1);
        same_language(&g, &r);
    }

    #[test]
    fn weak_automaton_collapses_to_one_counter() {
        let a = product(&contains_b(), &crate::fixtures::all_a(), Connective::And).unwrap();
        let r = reduce(&a);
        same_language(&a, &r);
        let b = reduce(&contains_b());
        assert_eq!(b.counter_count(), 1);
        same_language(&contains_b(), &b);
    }

    #[test]
    fn infinitely_many_b_is_not_weak_but_survives() {
        // last-letter automaton: accept iff b infinitely often
        let m = MullerAutomaton::from_fn(vec!['a', 'b'], 0, 2, 0, |_, l| l.symbol as usize, vec![vec![1], vec![0, 1]]);
        let a = from_muller(&m).unwrap();
        let r = reduce(&a);
        same_language(&a, &r);
        assert!(r.counter_count() >= 1);
    }

    #[test]
    fn redundant_states_merge() {
        // contains_b with the "seen" state split into two alternating copies
        let mut a = contains_b();
        a.state_names.push(String::from("seen2"));
        let visit = a.delta[2].clone();
        a.delta[2].as_mut().unwrap().target = 2;
        a.delta[3].as_mut().unwrap().target = 2;
        a.delta.push(visit.clone());
        a.delta.push(visit);
        assert!(a.validate().is_empty());
        let r = reduce(&a);
        assert_eq!(r.state_count(), 2);
        same_language(&a, &r);
    }

    #[test]
    fn silent_counter_atoms_become_true() {
        let mut g = gap();
        g.delta[1].as_mut().unwrap().ops = vec![CounterOp::Reset(Counter(0))];
        let r = reduce(&g);
        assert_eq!(r.acceptance, Acceptance::False);
    }
}
