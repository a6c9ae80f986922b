//! Transfer relations between counters.
//!
//! An op sequence transfers `c` to `d` when, afterwards, `d` is at least the
//! value `c` had before; the transfer carries an increment when `d` is then
//! strictly larger. Transfers are computed by the inductive rules on single
//! operations and composed relationally.

use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{Counter, CounterOp, Letter, MaxAutomaton, StateId};
use crate::error::{Error, Result};

/// Ordered `None < Transfer < TransferWithIncrement`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum TransferClass {
    None,
    Transfer,
    TransferWithIncrement,
}

impl TransferClass {
    /// Sequential composition: `None` absorbs, an increment on either side
    /// survives.
    pub fn then(self, other: TransferClass) -> TransferClass {
        use TransferClass::*;
        match (self, other) {
            (None, _) | (_, None) => None,
            (TransferWithIncrement, _) | (_, TransferWithIncrement) => TransferWithIncrement,
            _ => Transfer,
        }
    }

    /// `T(ρ, c, d)`: any transfer, with or without increment.
    pub fn transfers(self) -> bool {
        self != TransferClass::None
    }

    /// `TI(ρ, c, d)`.
    pub fn increments(self) -> bool {
        self == TransferClass::TransferWithIncrement
    }
}

/// `class(c, d)` for the transfer of `c` (before) to `d` (after).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TransferMatrix {
    counters: usize,
    cells: Vec<TransferClass>,
}

impl TransferMatrix {
    /// The matrix of the empty sequence.
    pub fn identity(counters: usize) -> Self {
        let mut cells = vec![TransferClass::None; counters * counters];
        for c in 0..counters {
            cells[c * counters + c] = TransferClass::Transfer;
        }
        TransferMatrix { counters, cells }
    }

    pub fn empty(counters: usize) -> Self {
        TransferMatrix {
            counters,
            cells: vec![TransferClass::None; counters * counters],
        }
    }

    pub fn counter_count(&self) -> usize {
        self.counters
    }

    pub fn get(&self, from: Counter, to: Counter) -> TransferClass {
        self.cells[from.index() * self.counters + to.index()]
    }

    pub fn set(&mut self, from: Counter, to: Counter, class: TransferClass) {
        self.cells[from.index() * self.counters + to.index()] = class;
    }

    /// The matrix of a single operation.
    pub fn of_op(counters: usize, op: CounterOp) -> Result<Self> {
        let mut m = TransferMatrix::identity(counters);
        match op {
            CounterOp::Increment(c) => m.set(c, c, TransferClass::TransferWithIncrement),
            CounterOp::Output(_) => {}
            CounterOp::Reset(c) => m.set(c, c, TransferClass::None),
            CounterOp::MaxInto(c, d) => {
                if m.get(d, c) < TransferClass::Transfer {
                    m.set(d, c, TransferClass::Transfer);
                }
            }
            CounterOp::GuardedOutput(..) => return Err(Error::GuardedOp),
        }
        Ok(m)
    }

    /// Pointwise maximum.
    pub fn join(&mut self, other: &TransferMatrix) -> bool {
        let mut changed = false;
        for (a, &b) in self.cells.iter_mut().zip(&other.cells) {
            if b > *a {
                *a = b;
                changed = true;
            }
        }
        changed
    }

    /// Relational composition: `self` first, then `then`.
    pub fn then(&self, then: &TransferMatrix) -> TransferMatrix {
        let n = self.counters;
        let mut out = TransferMatrix::empty(n);
        for c in 0..n {
            for e in 0..n {
                let first = self.cells[c * n + e];
                if first == TransferClass::None {
                    continue;
                }
                for d in 0..n {
                    let class = first.then(then.cells[e * n + d]);
                    let slot = &mut out.cells[c * n + d];
                    if class > *slot {
                        *slot = class;
                    }
                }
            }
        }
        out
    }

    /// Same matrix restricted to what `c` transfers to.
    pub fn row(&self, from: Counter) -> &[TransferClass] {
        let n = self.counters;
        &self.cells[from.index() * n..(from.index() + 1) * n]
    }
}

/// The transfer matrix of an op sequence, composed left to right.
pub fn transfer_of(counters: usize, ops: &[CounterOp]) -> Result<TransferMatrix> {
    let mut m = TransferMatrix::identity(counters);
    for &op in ops {
        m = m.then(&TransferMatrix::of_op(counters, op)?);
    }
    Ok(m)
}

pub fn compose_transfer(m1: &TransferMatrix, m2: &TransferMatrix) -> Result<TransferMatrix> {
    if m1.counters != m2.counters {
        return Err(Error::CounterMismatch {
            left: m1.counters,
            right: m2.counters,
        });
    }
    Ok(m1.then(m2))
}

/// For every pair of states `(p, q)`, the best transfer along any nonempty
/// path from `p` to `q`; `None` when `q` is unreachable from `p`.
pub struct TransferReachability {
    states: usize,
    reach: Vec<Option<TransferMatrix>>,
}

impl TransferReachability {
    pub fn get(&self, from: StateId, to: StateId) -> Option<&TransferMatrix> {
        self.reach[from * self.states + to].as_ref()
    }
}

/// Saturates the transition graph labelled with transfer matrices.
pub fn transfer_reachability(a: &MaxAutomaton) -> Result<TransferReachability> {
    a.ensure_valid()?;
    let n = a.state_count();
    let k = a.counter_count();
    // letter matrices per state
    let mut edges: Vec<Vec<(StateId, TransferMatrix)>> = vec![Vec::new(); n];
    for q in 0..n {
        for l in 0..a.letter_count() {
            let t = a.transition_at(q, l);
            let m = transfer_of(k, &t.ops)?;
            match edges[q].iter_mut().find(|(r, _)| *r == t.target) {
                Some((_, acc)) => {
                    acc.join(&m);
                }
                None => edges[q].push((t.target, m)),
            }
        }
    }
    let mut reach: Vec<Option<TransferMatrix>> = vec![None; n * n];
    for p in 0..n {
        let mut pending = vec![false; n];
        let mut work = Vec::new();
        for (q, m) in &edges[p] {
            reach[p * n + q] = Some(m.clone());
            if !pending[*q] {
                pending[*q] = true;
                work.push(*q);
            }
        }
        while let Some(q) = work.pop() {
            pending[q] = false;
            let here = reach[p * n + q].clone().expect("reached");
            for (r, m) in &edges[q] {
                let next = here.then(m);
                let slot = &mut reach[p * n + r];
                let changed = match slot {
                    Some(old) => old.join(&next),
                    None => {
                        *slot = Some(next);
                        true
                    }
                };
                if changed && !pending[*r] {
                    pending[*r] = true;
                    work.push(*r);
                }
            }
        }
    }
    Ok(TransferReachability { states: n, reach })
}

/// Positions `x_1 < … < x_n < y` in a run (position `x` is the point before
/// the `x`-th letter), a loop counter and a target counter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DTrace {
    pub loop_positions: Vec<usize>,
    pub end: usize,
    pub loop_counter: Counter,
    pub target: Counter,
}

/// Checks a d-trace against the run of `a` on `prefix`: every segment
/// between consecutive loop positions transfers the loop counter to itself
/// with an increment, and the last one transfers it to the target.
pub fn verify_dtrace(a: &MaxAutomaton, prefix: &[Letter], t: &DTrace) -> Result<bool> {
    let Some(&last) = t.loop_positions.last() else {
        return Err(Error::EmptyTrace);
    };
    for &x in t.loop_positions.iter().chain([&t.end]) {
        if x > prefix.len() {
            return Err(Error::PositionOutOfRange {
                position: x,
                length: prefix.len(),
            });
        }
    }
    if !t.loop_positions.windows(2).all(|w| w[0] < w[1]) || last >= t.end {
        return Ok(false);
    }
    for &l in prefix {
        a.check_letter(l)?;
    }
    let mut ops_at: Vec<&[CounterOp]> = Vec::with_capacity(prefix.len());
    let mut q = a.initial;
    for &l in prefix {
        let tr = a.transition(q, l);
        ops_at.push(&tr.ops);
        q = tr.target;
    }
    let segment = |from: usize, to: usize| -> Result<TransferMatrix> {
        let ops: Vec<CounterOp> = ops_at[from..to].iter().flat_map(|o| o.iter().copied()).collect();
        transfer_of(a.counter_count(), &ops)
    };
    let c = t.loop_counter;
    for w in t.loop_positions.windows(2) {
        if !segment(w[0], w[1])?.get(c, c).increments() {
            return Ok(false);
        }
    }
    Ok(segment(last, t.end)?.get(c, t.target).transfers())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::effect::effect_of;
    use crate::fixtures::gap;
    use proptest::prelude::*;
    use TransferClass::*;

    const C: Counter = Counter(0);
    const D: Counter = Counter(1);

    #[test]
    fn single_operations() {
        let inc = transfer_of(2, &[CounterOp::Increment(C)]).unwrap();
        assert_eq!(inc.get(C, C), TransferWithIncrement);
        assert_eq!(inc.get(D, D), Transfer);
        assert_eq!(inc.get(C, D), None);
        let reset = transfer_of(2, &[CounterOp::Reset(C)]).unwrap();
        assert_eq!(reset.get(C, C), None);
        assert_eq!(reset.get(D, D), Transfer);
        let max = transfer_of(2, &[CounterOp::MaxInto(C, D)]).unwrap();
        assert_eq!(max.get(D, C), Transfer);
        assert_eq!(max.get(C, C), Transfer);
        assert_eq!(max.get(D, D), Transfer);
        assert_eq!(max.get(C, D), None);
        let out = transfer_of(2, &[CounterOp::Output(C)]).unwrap();
        assert_eq!(out, TransferMatrix::identity(2));
    }

    #[test]
    fn composition_rules() {
        let mut loop_c = TransferMatrix::empty(2);
        loop_c.set(C, C, TransferWithIncrement);
        let mut to_d = TransferMatrix::empty(2);
        to_d.set(C, D, Transfer);
        assert_eq!(compose_transfer(&loop_c, &to_d).unwrap().get(C, D), TransferWithIncrement);
        let inc = transfer_of(1, &[CounterOp::Increment(C)]).unwrap();
        let reset = transfer_of(1, &[CounterOp::Reset(C)]).unwrap();
        assert_eq!(compose_transfer(&inc, &reset).unwrap().get(C, C), None);
        assert_eq!(compose_transfer(&TransferMatrix::identity(1), &inc).unwrap(), inc);
        assert!(compose_transfer(&inc, &TransferMatrix::identity(2)).is_err());
    }

    #[test]
    fn gap_reachability() {
        let g = gap();
        let r = transfer_reachability(&g).unwrap();
        // the a-loop increments, so the best s -> s transfer does too
        assert_eq!(r.get(0, 0).unwrap().get(C, C), TransferWithIncrement);
        let b = transfer_of(1, &g.transition(0, Letter::plain(1)).ops).unwrap();
        assert_eq!(b.get(C, C), None);
        let mut silent = gap();
        silent.counter_names.clear();
        silent.acceptance = crate::acceptance::Acceptance::True;
        for t in silent.delta.iter_mut().flatten() {
            t.ops.clear();
        }
        let r = transfer_reachability(&silent).unwrap();
        assert_eq!(r.get(0, 0).unwrap(), &TransferMatrix::identity(0));
    }

    fn word(s: &str) -> Vec<Letter> {
        s.bytes().map(|b| Letter::plain((b - b'a') as u16)).collect()
    }

    #[test]
    fn dtrace_examples() {
        let g = gap();
        let t = DTrace {
            loop_positions: vec![0, 1, 2],
            end: 3,
            loop_counter: C,
            target: C,
        };
        assert!(verify_dtrace(&g, &word("aaab"), &t).unwrap());
        let crossing = DTrace {
            loop_positions: vec![0, 1, 3],
            end: 4,
            ..t.clone()
        };
        assert!(!verify_dtrace(&g, &word("abaa"), &crossing).unwrap());
        let empty = DTrace {
            loop_positions: vec![],
            ..t.clone()
        };
        assert_eq!(verify_dtrace(&g, &word("aaab"), &empty), Err(Error::EmptyTrace));
        let far = DTrace { end: 9, ..t };
        assert!(matches!(
            verify_dtrace(&g, &word("aaab"), &far),
            Err(Error::PositionOutOfRange { .. })
        ));
    }

    #[test]
    fn gap_traces_on_ab_have_length_one() {
        // on (ab)^k the loop counter is reset by every b, so no two loop
        // positions can be linked by an incrementing transfer
        let g = gap();
        let w = word("abababab");
        let mut longest = 0;
        for x1 in 0..w.len() {
            for x2 in x1 + 1..w.len() {
                let t = DTrace {
                    loop_positions: vec![x1, x2],
                    end: x2 + 1,
                    loop_counter: C,
                    target: C,
                };
                if verify_dtrace(&g, &w, &t).unwrap() {
                    longest = 2;
                }
            }
            let t = DTrace {
                loop_positions: vec![x1],
                end: x1 + 1,
                loop_counter: C,
                target: C,
            };
            if verify_dtrace(&g, &w, &t).unwrap() {
                longest = longest.max(1);
            }
        }
        assert_eq!(longest, 1);
    }

    fn op_strategy(n: u32) -> impl Strategy<Value = CounterOp> {
        let c = 0..n;
        prop_oneof![
            c.clone().prop_map(|c| CounterOp::Increment(Counter(c))),
            c.clone().prop_map(|c| CounterOp::Reset(Counter(c))),
            c.clone().prop_map(|c| CounterOp::Output(Counter(c))),
            (c.clone(), c).prop_map(|(c, d)| CounterOp::MaxInto(Counter(c), Counter(d))),
        ]
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn transfer_is_a_homomorphism(
            s1 in prop::collection::vec(op_strategy(3), 0..6),
            s2 in prop::collection::vec(op_strategy(3), 0..6),
        ) {
            let joined: Vec<CounterOp> = s1.iter().chain(&s2).copied().collect();
            let composed = compose_transfer(&transfer_of(3, &s1).unwrap(), &transfer_of(3, &s2).unwrap()).unwrap();
            prop_assert_eq!(transfer_of(3, &joined).unwrap(), composed);
        }

        #[test]
        fn transfer_agrees_with_effect_weights(ops in prop::collection::vec(op_strategy(3), 0..7)) {
            let m = transfer_of(3, &ops).unwrap();
            let e = effect_of(3, &ops).unwrap();
            for c in 0..3 {
                for d in 0..3 {
                    let w = e.weight(Counter(d), Counter(c));
                    prop_assert_eq!(m.get(Counter(c), Counter(d)).transfers(), w.is_some());
                    prop_assert_eq!(m.get(Counter(c), Counter(d)).increments(), w.is_some_and(|w| w >= 1));
                }
            }
        }
    }
}
