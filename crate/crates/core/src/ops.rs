//! Boolean closure and annotation-track plumbing.

use alloc::collections::VecDeque;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use hashbrown::HashMap;

use crate::acceptance::Connective;
use crate::automaton::{Counter, CounterOp, MaxAutomaton, StateId, Transition};
use crate::error::{Error, Result};

/// Synchronous product. Counters of `a2` are renamed apart from those of
/// `a1`; when the second factor's counters provably mirror the first's
/// (same run, same ops under renaming), its atoms are redirected to the
/// first copy so that e.g. `A ∧ ¬A` simplifies to `false`.
pub fn product(a1: &MaxAutomaton, a2: &MaxAutomaton, combine: Connective) -> Result<MaxAutomaton> {
    a1.same_input_alphabet(a2)?;
    let n1 = a1.counter_count();
    let shift = |c: Counter| Counter::from_index(c.index() + n1);
    let letters = a1.letter_count();

    let mut index: HashMap<(StateId, StateId), StateId> = HashMap::new();
    let mut pairs = vec![(a1.initial, a2.initial)];
    index.insert((a1.initial, a2.initial), 0);
    let mut queue = VecDeque::from([0usize]);
    let mut delta: Vec<Option<Transition>> = Vec::new();
    let mut mirrored = true;
    while let Some(p) = queue.pop_front() {
        let (q1, q2) = pairs[p];
        if delta.len() < (p + 1) * letters {
            delta.resize((p + 1) * letters, None);
        }
        for l in 0..letters {
            let t1 = a1.transition_at(q1, l);
            let t2 = a2.transition_at(q2, l);
            if mirrored && t1.ops != t2.ops {
                mirrored = false;
            }
            let key = (t1.target, t2.target);
            let target = *index.entry(key).or_insert_with(|| {
                pairs.push(key);
                queue.push_back(pairs.len() - 1);
                pairs.len() - 1
            });
            let mut ops = t1.ops.clone();
            ops.extend(t2.ops.iter().map(|op| op.map_counters(shift)));
            delta[p * letters + l] = Some(Transition::new(target, ops));
        }
    }
    delta.resize(pairs.len() * letters, None);
    mirrored &= n1 == a2.counter_count();

    let acc2 = if mirrored {
        a2.acceptance.clone()
    } else {
        a2.acceptance.map_counters(shift)
    };
    let mut counter_names = a1.counter_names.clone();
    counter_names.extend(a2.counter_names.iter().cloned());
    let out = MaxAutomaton {
        alphabet: a1.alphabet.clone(),
        tracks: a1.tracks,
        state_names: pairs
            .iter()
            .map(|&(q1, q2)| format!("{}.{}", a1.state_name(q1), a2.state_name(q2)))
            .collect(),
        initial: 0,
        counter_names: unique_names(counter_names),
        delta,
        acceptance: combine.apply(a1.acceptance.clone(), acc2).simplify(),
    };
    Ok(if mirrored { trim(&out) } else { out })
}

/// Makes names distinct by suffixing repeats with `_2`, `_3`, ...
pub(crate) fn unique_names(names: Vec<String>) -> Vec<String> {
    let mut seen: HashMap<String, usize> = HashMap::new();
    let mut taken: hashbrown::HashSet<String> = names.iter().cloned().collect();
    let mut out = Vec::with_capacity(names.len());
    let mut first = hashbrown::HashSet::new();
    for name in names {
        if first.insert(name.clone()) {
            out.push(name);
            continue;
        }
        let k = seen.entry(name.clone()).or_insert(1);
        loop {
            *k += 1;
            let candidate = format!("{name}_{k}");
            if taken.insert(candidate.clone()) {
                out.push(candidate);
                break;
            }
        }
    }
    out
}

/// Same structure, negated acceptance.
pub fn complement(a: &MaxAutomaton) -> MaxAutomaton {
    MaxAutomaton {
        acceptance: a.acceptance.clone().negate().simplify(),
        ..a.clone()
    }
}

/// Adds a fresh last track that every transition ignores.
pub fn add_track(a: &MaxAutomaton) -> Result<MaxAutomaton> {
    let tracks = a.tracks + 1;
    if tracks > crate::automaton::MAX_TRACKS {
        return Err(Error::TrackOutOfRange {
            index: a.tracks,
            tracks: crate::automaton::MAX_TRACKS,
        });
    }
    let old_letters = a.letter_count();
    let letters = old_letters * 2;
    let mut delta = Vec::with_capacity(a.state_count() * letters);
    for q in 0..a.state_count() {
        for l in 0..letters {
            let symbol = l >> tracks;
            let bits = l & ((1 << a.tracks) - 1);
            let old = (symbol << a.tracks) | bits;
            delta.push(a.delta[q * old_letters + old].clone());
        }
    }
    Ok(MaxAutomaton {
        tracks,
        delta,
        ..a.clone()
    })
}

/// Instantiates track `track` with the empty set: keeps the bit-0
/// transitions and removes the track.
pub fn fix_track_zero(a: &MaxAutomaton, track: usize) -> Result<MaxAutomaton> {
    if track >= a.tracks {
        return Err(Error::TrackOutOfRange {
            index: track,
            tracks: a.tracks,
        });
    }
    let tracks = a.tracks - 1;
    let letters = a.alphabet.len() << tracks;
    let mut delta = Vec::with_capacity(a.state_count() * letters);
    for q in 0..a.state_count() {
        for l in 0..letters {
            let symbol = l >> tracks;
            let bits = l & ((1 << tracks) - 1);
            let low = bits & ((1 << track) - 1);
            let high = (bits >> track) << (track + 1);
            let old = (symbol << a.tracks) | low | high;
            delta.push(a.delta[q * a.letter_count() + old].clone());
        }
    }
    Ok(MaxAutomaton {
        tracks,
        delta,
        ..a.clone()
    })
}

/// Gives every counter `c` a shadow `c'` that is never incremented: each
/// `out c` becomes `reset c'; max c' c; out c'`, and acceptance atoms refer
/// to the shadows. The language is unchanged.
pub fn desugar_outputs(a: &MaxAutomaton) -> MaxAutomaton {
    let n = a.counter_count();
    let shadow = |c: Counter| Counter::from_index(c.index() + n);
    let mut counter_names = a.counter_names.clone();
    counter_names.extend(a.counter_names.iter().map(|name| format!("{name}'")));
    let delta = a
        .delta
        .iter()
        .map(|t| {
            t.as_ref().map(|t| {
                let mut ops = Vec::with_capacity(t.ops.len());
                for &op in &t.ops {
                    match op {
                        CounterOp::Output(c) => ops.extend([
                            CounterOp::Reset(shadow(c)),
                            CounterOp::MaxInto(shadow(c), c),
                            CounterOp::Output(shadow(c)),
                        ]),
                        other => ops.push(other),
                    }
                }
                Transition::new(t.target, ops)
            })
        })
        .collect();
    MaxAutomaton {
        counter_names: unique_names(counter_names),
        delta,
        acceptance: a.acceptance.map_counters(shadow),
        ..a.clone()
    }
}

/// Removes unreachable states and counters that cannot influence an
/// acceptance atom.
pub fn trim(a: &MaxAutomaton) -> MaxAutomaton {
    let letters = a.letter_count();
    // reachable states, numbered in BFS order
    let mut order = vec![a.initial];
    let mut new_id = vec![usize::MAX; a.state_count()];
    new_id[a.initial] = 0;
    let mut i = 0;
    while i < order.len() {
        let q = order[i];
        i += 1;
        for l in 0..letters {
            let t = a.transition_at(q, l).target;
            if new_id[t] == usize::MAX {
                new_id[t] = order.len();
                order.push(t);
            }
        }
    }

    // counters relevant to acceptance, closed under `max c d` flows
    let mut relevant = vec![false; a.counter_count()];
    for c in a.acceptance.atoms() {
        relevant[c.index()] = true;
    }
    loop {
        let mut changed = false;
        for &q in &order {
            for l in 0..letters {
                for op in &a.transition_at(q, l).ops {
                    if let CounterOp::MaxInto(c, d) = *op {
                        if relevant[c.index()] && !relevant[d.index()] {
                            relevant[d.index()] = true;
                            changed = true;
                        }
                    }
                }
            }
        }
        if !changed {
            break;
        }
    }
    let mut counter_id = vec![None; a.counter_count()];
    let mut counter_names = Vec::new();
    for (c, &keep) in relevant.iter().enumerate() {
        if keep {
            counter_id[c] = Some(Counter::from_index(counter_names.len()));
            counter_names.push(a.counter_names[c].clone());
        }
    }
    let rename = |c: Counter| counter_id[c.index()].expect("relevant counter");

    let mut delta = Vec::with_capacity(order.len() * letters);
    for &q in &order {
        for l in 0..letters {
            let t = a.transition_at(q, l);
            let ops = t
                .ops
                .iter()
                .filter(|op| match **op {
                    CounterOp::MaxInto(c, _) => relevant[c.index()],
                    other => other.counters().all(|c| relevant[c.index()]),
                })
                .map(|op| op.map_counters(rename))
                .collect();
            delta.push(Some(Transition::new(new_id[t.target], ops)));
        }
    }
    MaxAutomaton {
        alphabet: a.alphabet.clone(),
        tracks: a.tracks,
        state_names: order.iter().map(|&q| a.state_names[q].clone()).collect(),
        initial: 0,
        counter_names,
        delta,
        acceptance: a.acceptance.map_counters(rename),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::acceptance::Acceptance;
    use crate::automaton::Letter;
    use crate::fixtures::{all_a, contains_b, gap};

    #[test]
    fn product_with_own_complement_is_false() {
        let g = gap();
        let p = product(&g, &complement(&g), Connective::And).unwrap();
        assert_eq!(p.acceptance, Acceptance::False);
        assert_eq!(p.counter_count(), 0);
        assert!(p.validate().is_empty());
    }

    #[test]
    fn product_of_distinct_automata_keeps_both_counter_sets() {
        let p = product(&gap(), &contains_b(), Connective::And).unwrap();
        assert_eq!(p.counter_names, vec!["c", "hit"]);
        assert!(p.validate().is_empty());
        assert_eq!(p.state_count(), 2);
        // contains-b and all-a count the same visits, so the union is trivial
        let u = product(&contains_b(), &all_a(), Connective::Or).unwrap();
        assert_eq!(u.acceptance, Acceptance::True);
    }

    #[test]
    fn product_rejects_other_alphabets() {
        let mut other = gap();
        other.alphabet = vec!['a', 'c'];
        assert!(matches!(
            product(&gap(), &other, Connective::And),
            Err(Error::AlphabetMismatch { .. })
        ));
    }

    #[test]
    fn add_then_fix_track_restores_the_automaton() {
        let g = gap();
        let wide = add_track(&g).unwrap();
        assert_eq!(wide.tracks, 1);
        assert!(wide.validate().is_empty());
        assert_eq!(fix_track_zero(&wide, 0).unwrap(), g);
        assert!(fix_track_zero(&g, 0).is_err());
        // both bits of the new track behave like the plain letter
        let t0 = wide.transition(0, Letter::new(1, 0));
        let t1 = wide.transition(0, Letter::new(1, 1));
        assert_eq!(t0, t1);
        assert_eq!(t0, g.transition(0, Letter::plain(1)));
    }

    #[test]
    fn fix_middle_track() {
        // three tracks; transition target encodes the letter index
        let mut a = MaxAutomaton::trivial(vec!['a'], 3, Acceptance::True);
        a.state_names = (0..8).map(|i| format!("t{i}")).collect();
        a.delta = (0..8)
            .flat_map(|_| (0..8).map(|l| Some(Transition::new(l, Vec::new()))))
            .collect();
        assert!(a.validate().is_empty());
        let fixed = fix_track_zero(&a, 1).unwrap();
        let targets: Vec<usize> = (0..4).map(|l| fixed.transition_at(0, l).target).collect();
        // new bits (b0, b2) map to old bits b0 | b2 << 2
        assert_eq!(targets, vec![0, 1, 4, 5]);
    }

    #[test]
    fn desugared_gap_uses_shadow_counters() {
        let d = desugar_outputs(&gap());
        assert_eq!(d.counter_names, vec!["c", "c'"]);
        assert_eq!(d.acceptance, Acceptance::unbounded(Counter(1)));
        let cfg = d.run_finite(&[Letter::plain(0), Letter::plain(0), Letter::plain(1)]).unwrap();
        assert_eq!(cfg.outputs[1], vec![2]);
        assert!(cfg.outputs[0].is_empty());
    }

    #[test]
    fn trim_drops_unreachable_states_and_dead_counters() {
        let g = gap();
        assert_eq!(trim(&g), g);
        let p = product(&g, &crate::fixtures::constant(true), Connective::And).unwrap();
        assert!(trim(&p).state_count() <= g.state_count());
        let mut extra = gap();
        extra.counter_names.push(String::from("junk"));
        extra.delta[0].as_mut().unwrap().ops.push(CounterOp::Increment(Counter(1)));
        let t = trim(&extra);
        assert_eq!(t.counter_names, vec!["c"]);
        assert_eq!(t, g);
    }
}
