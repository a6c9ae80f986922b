//! Generators and brute-force oracles shared by the integration tests.

#![allow(dead_code)]

use maxreg_core::membership::simulate_lasso_maxima;
use maxreg_core::{Acceptance, Counter, CounterOp, LassoWord, Letter, MaxAutomaton, Transition};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn plain(s: &str) -> Vec<Letter> {
    s.chars().map(|c| Letter::plain(if c == 'a' { 0 } else { 1 })).collect()
}

pub fn random_op<R: Rng>(rng: &mut R, counters: usize) -> CounterOp {
    let c = Counter(rng.gen_range(0..counters as u32));
    match rng.gen_range(0..4) {
        0 => CounterOp::Increment(c),
        1 => CounterOp::Reset(c),
        2 => CounterOp::Output(c),
        _ => CounterOp::MaxInto(c, Counter(rng.gen_range(0..counters as u32))),
    }
}

pub fn random_acceptance<R: Rng>(rng: &mut R, counters: usize, depth: usize) -> Acceptance {
    if depth == 0 || rng.gen_bool(0.4) {
        let atom = Acceptance::Bounded(Counter(rng.gen_range(0..counters as u32)));
        return if rng.gen_bool(0.5) { atom } else { atom.negate() };
    }
    let left = random_acceptance(rng, counters, depth - 1);
    let right = random_acceptance(rng, counters, depth - 1);
    match rng.gen_range(0..3) {
        0 => Acceptance::And(vec![left, right]),
        1 => Acceptance::Or(vec![left, right]),
        _ => Acceptance::Not(Box::new(left)),
    }
}

/// A complete automaton over {a, b} (with `tracks` annotation tracks) with
/// up to `max_ops` random ops per transition.
pub fn random_automaton<R: Rng>(
    rng: &mut R,
    states: usize,
    counters: usize,
    tracks: usize,
    max_ops: usize,
) -> MaxAutomaton {
    let letters = 2usize << tracks;
    let delta = (0..states * letters)
        .map(|_| {
            let ops = (0..rng.gen_range(0..=max_ops))
                .map(|_| random_op(rng, counters))
                .collect();
            Some(Transition::new(rng.gen_range(0..states), ops))
        })
        .collect();
    MaxAutomaton {
        alphabet: vec!['a', 'b'],
        tracks,
        state_names: (0..states).map(|q| format!("q{q}")).collect(),
        initial: 0,
        counter_names: (0..counters).map(|c| format!("c{c}")).collect(),
        delta,
        acceptance: random_acceptance(rng, counters, 2),
    }
}

pub fn random_word<R: Rng>(rng: &mut R, min: usize, max: usize) -> Vec<Letter> {
    let len = rng.gen_range(min..=max);
    (0..len).map(|_| Letter::plain(rng.gen_range(0..2))).collect()
}

/// Boundedness of every counter's tail outputs by simulation: a counter is
/// judged unbounded when the maximum output over periods `[n/2, n)` exceeds
/// the maximum over `[n/4, n/2)`.
pub fn doubling_bounded(a: &MaxAutomaton, w: &LassoWord, n: usize) -> Vec<bool> {
    let maxima = simulate_lasso_maxima(a, w, &[(n / 4, n / 2), (n / 2, n)]).unwrap();
    (0..a.counter_count())
        .map(|c| match (maxima[0][c], maxima[1][c]) {
            (_, None) => true,
            (None, Some(_)) => false,
            (Some(early), Some(late)) => late <= early,
        })
        .collect()
}

pub fn doubling_accepts(a: &MaxAutomaton, w: &LassoWord, n: usize) -> bool {
    let bounded = doubling_bounded(a, w, n);
    a.acceptance.eval(&|c| Some(bounded[c.index()])).unwrap()
}

/// A random closed formula over {a, b} in the surface syntax, with at most
/// `quantifiers` binders.
pub fn random_formula<R: Rng>(rng: &mut R, quantifiers: usize) -> String {
    fn go<R: Rng>(rng: &mut R, fo: &mut Vec<String>, sets: &mut Vec<String>, budget: &mut usize, depth: usize) -> String {
        let must_bind = fo.is_empty();
        if must_bind || (*budget > 0 && depth < 4 && rng.gen_bool(0.35)) {
            if *budget == 0 {
                return String::from(if rng.gen_bool(0.5) { "true" } else { "false" });
            }
            *budget -= 1;
            let set = !fo.is_empty() && sets.is_empty() && rng.gen_bool(0.3);
            if set {
                let name = format!("X{}", sets.len());
                let q = ["exf", "U"].choose(rng).unwrap();
                sets.push(name.clone());
                let body = go(rng, fo, sets, budget, depth + 1);
                sets.pop();
                return format!("{q} {name}. ({body})");
            }
            let name = format!("x{}", fo.len());
            let q = ["ex", "all"].choose(rng).unwrap();
            fo.push(name.clone());
            let body = go(rng, fo, sets, budget, depth + 1);
            fo.pop();
            return format!("{q} {name}. ({body})");
        }
        if depth < 4 && rng.gen_bool(0.45) {
            let left = go(rng, fo, sets, budget, depth + 1);
            return match rng.gen_range(0..3) {
                0 => format!("!({left})"),
                1 => format!("({left}) & ({})", go(rng, fo, sets, budget, depth + 1)),
                _ => format!("({left}) | ({})", go(rng, fo, sets, budget, depth + 1)),
            };
        }
        let x = fo.choose(rng).unwrap().clone();
        match rng.gen_range(0..4) {
            0 => format!("a({x})"),
            1 => format!("b({x})"),
            2 if !sets.is_empty() => format!("{x} in {}", sets.choose(rng).unwrap()),
            _ => format!("{x} <= {}", fo.choose(rng).unwrap()),
        }
    }
    let mut budget = quantifiers;
    go(rng, &mut Vec::new(), &mut Vec::new(), &mut budget, 0)
}
