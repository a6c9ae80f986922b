//! Max-plus effects of counter-op sequences.
//!
//! Every op sequence acts on a valuation `ν` as
//! `post(c) = max(const(c), max_d ν(d) + weight(c ← d))`, with `⊥` (here
//! `None`) for "no flow". Output events are recorded with the same kind of
//! expression over the entry valuation, so an effect replays a sequence
//! exactly, outputs included.

use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{Counter, CounterOp};
use crate::error::{Error, Result};
use crate::graph;

/// `max(konst, max_d ν(d) + weights[d])`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Row {
    pub konst: Option<u64>,
    pub weights: Vec<Option<u64>>,
}

impl Row {
    fn unit(n: usize, c: usize) -> Row {
        let mut weights = vec![None; n];
        weights[c] = Some(0);
        Row {
            konst: None,
            weights,
        }
    }

    fn zero(n: usize) -> Row {
        Row {
            konst: Some(0),
            weights: vec![None; n],
        }
    }

    fn increment(&mut self) {
        self.konst = self.konst.map(|k| k + 1);
        for w in self.weights.iter_mut().flatten() {
            *w += 1;
        }
    }

    fn join(&mut self, other: &Row) {
        self.konst = max_opt(self.konst, other.konst);
        for (w, &o) in self.weights.iter_mut().zip(&other.weights) {
            *w = max_opt(*w, o);
        }
    }

    pub fn eval(&self, values: &[u64]) -> u64 {
        let flows = self
            .weights
            .iter()
            .zip(values)
            .filter_map(|(w, v)| w.map(|w| v + w));
        self.konst
            .into_iter()
            .chain(flows)
            .max()
            .expect("every row has a constant or a flow")
    }

    /// Substitutes the rows of an earlier effect for the entry values:
    /// `self ∘ before`.
    fn after(&self, before: &LoopEffect) -> Row {
        let mut out = Row {
            konst: self.konst,
            weights: vec![None; self.weights.len()],
        };
        for (d, w) in self.weights.iter().enumerate() {
            let Some(w) = *w else { continue };
            let r = &before.rows[d];
            out.konst = max_opt(out.konst, r.konst.map(|k| k + w));
            for (slot, &x) in out.weights.iter_mut().zip(&r.weights) {
                *slot = max_opt(*slot, x.map(|x| x + w));
            }
        }
        out
    }

    /// Counters feeding this row with a finite weight.
    pub fn feeds(&self) -> impl Iterator<Item = Counter> + '_ {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.is_some())
            .map(|(d, _)| Counter::from_index(d))
    }
}

fn max_opt(a: Option<u64>, b: Option<u64>) -> Option<u64> {
    match (a, b) {
        (Some(x), Some(y)) => Some(x.max(y)),
        (x, None) => x,
        (None, y) => y,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LoopEffect {
    /// One row per counter: its value after the sequence.
    pub rows: Vec<Row>,
    /// Output events in emission order, as expressions over entry values.
    pub outputs: Vec<(Counter, Row)>,
}

/// Growth of a counter under infinite iteration of an effect.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Growth {
    Bounded,
    Unbounded,
}

impl LoopEffect {
    pub fn identity(counters: usize) -> LoopEffect {
        LoopEffect {
            rows: (0..counters).map(|c| Row::unit(counters, c)).collect(),
            outputs: Vec::new(),
        }
    }

    pub fn counter_count(&self) -> usize {
        self.rows.len()
    }

    pub fn weight(&self, target: Counter, source: Counter) -> Option<u64> {
        self.rows[target.index()].weights[source.index()]
    }

    pub fn constant(&self, c: Counter) -> Option<u64> {
        self.rows[c.index()].konst
    }

    /// Appends one operation.
    pub fn push_op(&mut self, op: CounterOp) -> Result<()> {
        let n = self.rows.len();
        match op {
            CounterOp::Increment(c) => self.rows[c.index()].increment(),
            CounterOp::Reset(c) => self.rows[c.index()] = Row::zero(n),
            CounterOp::Output(c) => {
                let row = self.rows[c.index()].clone();
                self.outputs.push((c, row));
            }
            CounterOp::MaxInto(c, d) => {
                let other = self.rows[d.index()].clone();
                self.rows[c.index()].join(&other);
            }
            CounterOp::GuardedOutput(..) => return Err(Error::GuardedOp),
        }
        Ok(())
    }

    /// Applies to a valuation: returns the post valuation and the output
    /// events with their values.
    pub fn apply(&self, values: &[u64]) -> (Vec<u64>, Vec<(Counter, u64)>) {
        let post = self.rows.iter().map(|r| r.eval(values)).collect();
        let outputs = self
            .outputs
            .iter()
            .map(|(c, r)| (*c, r.eval(values)))
            .collect();
        (post, outputs)
    }

    /// Effect of running `self` then `then`.
    pub fn then(&self, then: &LoopEffect) -> LoopEffect {
        let mut outputs = self.outputs.clone();
        outputs.extend(then.outputs.iter().map(|(c, r)| (*c, r.after(self))));
        LoopEffect {
            rows: then.rows.iter().map(|r| r.after(self)).collect(),
            outputs,
        }
    }

    /// Weighted dependency edges `(source, target, weight)`.
    pub fn edges(&self) -> Vec<(usize, usize, u64)> {
        let mut edges = Vec::new();
        for (c, row) in self.rows.iter().enumerate() {
            for (d, w) in row.weights.iter().enumerate() {
                if let Some(w) = *w {
                    edges.push((d, c, w));
                }
            }
        }
        edges
    }

    /// Forgets the output events.
    pub fn without_outputs(&self) -> LoopEffect {
        LoopEffect {
            rows: self.rows.clone(),
            outputs: Vec::new(),
        }
    }
}

/// The effect of an op sequence over `counters` counters.
pub fn effect_of(counters: usize, ops: &[CounterOp]) -> Result<LoopEffect> {
    let mut e = LoopEffect::identity(counters);
    for &op in ops {
        e.push_op(op)?;
    }
    Ok(e)
}

/// Composition; `apply(compose(e1, e2), ν) = apply(e2, apply(e1, ν))`.
pub fn compose(e1: &LoopEffect, e2: &LoopEffect) -> Result<LoopEffect> {
    if e1.counter_count() != e2.counter_count() {
        return Err(Error::CounterMismatch {
            left: e1.counter_count(),
            right: e2.counter_count(),
        });
    }
    Ok(e1.then(e2))
}

/// Growth of each counter when the effect is iterated forever: unbounded
/// exactly when the counter is reachable from a cycle of positive weight.
pub fn iterate_classify(e: &LoopEffect) -> Vec<Growth> {
    graph::reachable_from_positive_cycle(e.counter_count(), &e.edges())
        .into_iter()
        .map(|u| if u { Growth::Unbounded } else { Growth::Bounded })
        .collect()
}
