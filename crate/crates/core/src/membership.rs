//! Acceptance of lasso words (exact) and ramp words (sound, three-valued).

use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::{CounterOp, Letter, MaxAutomaton, StateId};
use crate::effect::{effect_of, iterate_classify, Growth, LoopEffect, Row};
use crate::error::{Error, Result};
use crate::graph;
use crate::word::{FiniteWord, InfiniteWord, LassoWord, RampWord};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Verdict {
    Accept,
    Reject,
    Unknown,
}

impl Verdict {
    pub fn from_option(v: Option<bool>) -> Verdict {
        match v {
            Some(true) => Verdict::Accept,
            Some(false) => Verdict::Reject,
            None => Verdict::Unknown,
        }
    }

    pub fn is_decided(self) -> bool {
        self != Verdict::Unknown
    }
}

/// A verdict with the per-counter boundedness it was derived from
/// (`Some(true)`: the tail output stream is bounded; `None`: undecided).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Membership {
    pub verdict: Verdict,
    pub bounded: Vec<Option<bool>>,
}

impl Membership {
    fn from_atoms(a: &MaxAutomaton, bounded: Vec<Option<bool>>) -> Membership {
        let verdict = Verdict::from_option(a.acceptance.eval3(&|c| bounded[c.index()]));
        Membership { verdict, bounded }
    }
}

/// Limits for [`ramp_certify`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RampConfig {
    /// Number of blocks scanned for the periodic pattern of block-start
    /// states.
    pub horizon: usize,
    /// Largest accepted period of that pattern, in blocks.
    pub window: usize,
    /// Cap on the least common multiple of the state-cycle lengths of the
    /// pumped factor.
    pub ceiling: u64,
}

impl Default for RampConfig {
    fn default() -> Self {
        RampConfig {
            horizon: 64,
            window: 8,
            ceiling: 1_000_000,
        }
    }
}

fn check_word(a: &MaxAutomaton, words: &[&FiniteWord]) -> Result<()> {
    for w in words {
        for &l in w.iter() {
            if (l.symbol as usize) >= a.alphabet.len() {
                return Err(Error::UnknownSymbolIndex {
                    symbol: l.symbol as usize,
                });
            }
            a.check_letter(l)?;
        }
    }
    Ok(())
}

fn ops_along(a: &MaxAutomaton, from: StateId, word: &[Letter]) -> (Vec<CounterOp>, StateId) {
    let mut ops = Vec::new();
    let mut q = from;
    for &l in word {
        let t = a.transition(q, l);
        ops.extend_from_slice(&t.ops);
        q = t.target;
    }
    (ops, q)
}

/// Exact acceptance of `u·v^ω`.
///
/// The state at period boundaries repeats after at most `|Q|` periods; the
/// ops of one such state cycle form an effect whose iteration decides, for
/// every counter, whether its tail outputs are bounded.
pub fn lasso_membership(a: &MaxAutomaton, w: &LassoWord) -> Result<Membership> {
    a.ensure_valid()?;
    if w.period.is_empty() {
        return Err(Error::WordSpec(alloc::string::String::from("empty period")));
    }
    check_word(a, &[&w.prefix, &w.period])?;
    if !a.is_unguarded() {
        return Err(Error::GuardedOp);
    }
    let q = a.state_after(a.initial, &w.prefix);
    let mut boundary = vec![q];
    let mut p = q;
    let start = loop {
        p = a.state_after(p, &w.period);
        if let Some(i) = boundary.iter().position(|&s| s == p) {
            break i;
        }
        boundary.push(p);
    };
    let mut ops = Vec::new();
    let mut s = boundary[start];
    for _ in start..boundary.len() {
        let (o, t) = ops_along(a, s, &w.period);
        ops.extend(o);
        s = t;
    }
    let effect = effect_of(a.counter_count(), &ops)?;
    let growth = iterate_classify(&effect);
    let mut bounded = vec![Some(true); a.counter_count()];
    for (c, row) in &effect.outputs {
        if row.feeds().any(|d| growth[d.index()] == Growth::Unbounded) {
            bounded[c.index()] = Some(false);
        }
    }
    Ok(Membership::from_atoms(a, bounded))
}

/// States after `v^m` from one start state: `orbit[m]` for `m < mu + lambda`,
/// then periodic with period `lambda` from `mu` on.
struct Orbit {
    states: Vec<StateId>,
    mu: usize,
    lambda: usize,
}

impl Orbit {
    fn new(a: &MaxAutomaton, from: StateId, v: &[Letter]) -> Orbit {
        let mut states = vec![from];
        let mut q = from;
        loop {
            q = a.state_after(q, v);
            if let Some(mu) = states.iter().position(|&s| s == q) {
                let lambda = states.len() - mu;
                return Orbit { states, mu, lambda };
            }
            states.push(q);
        }
    }

    fn at(&self, m: usize) -> StateId {
        if m < self.mu {
            self.states[m]
        } else {
            self.states[self.mu + (m - self.mu) % self.lambda]
        }
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// One block `v^k·w` of the periodic regime, for `k = mu + t·lambda + r`
/// with `t` growing: `pre = v^mu`, `cycle = v^lambda` (repeated `t` times),
/// `post = v^r·w`.
struct Phase {
    pre: LoopEffect,
    cycle: LoopEffect,
    post: LoopEffect,
}

/// Sound three-valued acceptance of a ramp word
/// `u · v^k·w · v^(k+1)·w · …` (`k` = the word's starting exponent).
///
/// Block-start states are eventually periodic in the block index; within
/// one period every block decomposes into fixed op segments around a
/// repeated `v`-cycle whose repetition count grows without bound. A counter
/// is certified unbounded when an output of it is fed by a value that grows
/// with that repetition count or with the number of periods, and certified
/// bounded when no output of it is fed by anything reachable from a
/// positive-weight cycle of the union of all segment effects.
pub fn ramp_certify(a: &MaxAutomaton, w: &RampWord, config: &RampConfig) -> Result<Membership> {
    a.ensure_valid()?;
    if w.pump.is_empty() {
        return Err(Error::WordSpec(alloc::string::String::from(
            "empty pumped factor",
        )));
    }
    check_word(a, &[&w.prefix, &w.pump, &w.separator])?;
    if !a.is_unguarded() {
        return Err(Error::GuardedOp);
    }
    let unknown = || Membership::from_atoms(a, vec![None; a.counter_count()]);
    let n = a.state_count();
    let counters = a.counter_count();

    let orbits: Vec<Orbit> = (0..n).map(|q| Orbit::new(a, q, &w.pump)).collect();
    let mut period_lcm: u64 = 1;
    for o in &orbits {
        let l = o.lambda as u64;
        period_lcm = period_lcm / gcd(period_lcm, l) * l;
        if period_lcm > config.ceiling {
            return Ok(unknown());
        }
    }
    let period_lcm = period_lcm as usize;

    // scan block-start states for a repeat of (state, k mod lcm)
    let mut s = a.state_after(a.initial, &w.prefix);
    let mut k = w.start;
    let first_keyed = w.start.max(n);
    let mut seen: Vec<(StateId, usize, usize)> = Vec::new();
    let (k0, period) = loop {
        if k >= first_keyed {
            let key = (s, k % period_lcm);
            if let Some(&(_, _, k_prev)) = seen.iter().find(|&&(q, m, _)| (q, m) == key) {
                break (k_prev, k - k_prev);
            }
            seen.push((s, k % period_lcm, k));
        }
        if k >= w.start + config.horizon {
            return Ok(unknown());
        }
        s = a.state_after(orbits[s].at(k), &w.separator);
        k += 1;
    };
    if period > config.window {
        return Ok(unknown());
    }

    let mut phases = Vec::with_capacity(period);
    let mut s = seen.iter().find(|e| e.2 == k0).expect("recorded block").0;
    for i in 0..period {
        let k = k0 + i;
        let o = &orbits[s];
        let (pre_ops, p) = ops_along(a, s, &w.pump.repeat(o.mu));
        debug_assert_eq!(p, o.at(o.mu));
        let (cycle_ops, back) = ops_along(a, p, &w.pump.repeat(o.lambda));
        debug_assert_eq!(back, p);
        let r = (k - o.mu) % o.lambda;
        let mut post_word = w.pump.repeat(r);
        post_word.extend_from_slice(&w.separator);
        let (post_ops, next) = ops_along(a, p, &post_word);
        phases.push(Phase {
            pre: effect_of(counters, &pre_ops)?,
            cycle: effect_of(counters, &cycle_ops)?,
            post: effect_of(counters, &post_ops)?,
        });
        s = next;
    }

    let unbounded = certify_unbounded(counters, &phases);
    let bounded = certify_bounded(counters, &phases);
    let verdicts = (0..counters)
        .map(|c| match (bounded[c], unbounded[c]) {
            (true, false) => Some(true),
            (false, true) => Some(false),
            _ => None,
        })
        .collect();
    Ok(Membership::from_atoms(a, verdicts))
}

fn feeds_any(row: &Row, set: &[bool]) -> bool {
    row.feeds().any(|d| set[d.index()])
}

fn certify_unbounded(counters: usize, phases: &[Phase]) -> Vec<bool> {
    let mut out = vec![false; counters];
    let p = phases.len();

    // growth inside one block: the repeated v-cycle has a positive cycle
    for (i, ph) in phases.iter().enumerate() {
        let grow = graph::reachable_from_positive_cycle(counters, &ph.cycle.edges());
        if !grow.iter().any(|&g| g) {
            continue;
        }
        let mut mark = |e: &LoopEffect| {
            for (c, row) in &e.outputs {
                if feeds_any(row, &grow) {
                    out[c.index()] = true;
                }
            }
        };
        mark(&ph.cycle);
        let next = &phases[(i + 1) % p];
        let mut chain = ph.post.clone();
        mark(&chain);
        chain = chain.then(&next.pre);
        mark(&chain);
        chain = chain.then(&next.cycle);
        mark(&chain);
    }

    // growth across periods, using a lower bound for each repeated cycle
    let mut whole = LoopEffect::identity(counters);
    for ph in phases {
        whole = whole
            .then(&ph.pre)
            .then(&lower_bound_power(&ph.cycle))
            .then(&ph.post);
    }
    let growth = iterate_classify(&whole);
    let grow: Vec<bool> = growth.iter().map(|g| *g == Growth::Unbounded).collect();
    for (c, row) in &whole.outputs {
        if feeds_any(row, &grow) {
            out[c.index()] = true;
        }
    }
    out
}

/// An effect below `e^t` for every sufficiently large `t`: a flow `d → c`
/// survives any number of repetitions if it passes through a counter with
/// a self-loop, which can absorb the extra iterations. Output events are
/// dropped.
fn lower_bound_power(e: &LoopEffect) -> LoopEffect {
    let n = e.counter_count();
    let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
    for (d, c, w) in e.edges() {
        adj[d].push((c, w));
    }
    // BFS path weights from every node
    let paths: Vec<Vec<Option<u64>>> = (0..n)
        .map(|src| {
            let mut dist = vec![None; n];
            dist[src] = Some(0u64);
            let mut queue = alloc::collections::VecDeque::from([src]);
            while let Some(v) = queue.pop_front() {
                let dv = dist[v].expect("visited");
                for &(u, w) in &adj[v] {
                    if dist[u].is_none() {
                        dist[u] = Some(dv + w);
                        queue.push_back(u);
                    }
                }
            }
            dist
        })
        .collect();
    let looping: Vec<usize> = (0..n).filter(|&x| e.rows[x].weights[x].is_some()).collect();
    let rows = (0..n)
        .map(|c| {
            let weights = (0..n)
                .map(|d| {
                    looping
                        .iter()
                        .filter_map(|&x| Some(paths[d][x]? + paths[x][c]?))
                        .max()
                })
                .collect();
            Row {
                konst: Some(0),
                weights,
            }
        })
        .collect();
    LoopEffect {
        rows,
        outputs: Vec::new(),
    }
}

/// Bounded certificate on the layered flow graph of one period: per block,
/// layer 0 is the block start, layer 1 follows `pre`, layer 2 follows at
/// least one pass of the repeated cycle (and loops on further passes), and
/// `post` leads to the next block's layer 0. Every flow of the actual run
/// is a walk in this graph, so a counter whose outputs are never fed from a
/// node reachable from a positive cycle has bounded outputs.
fn certify_bounded(counters: usize, phases: &[Phase]) -> Vec<bool> {
    let p = phases.len();
    let node = |block: usize, layer: usize, c: usize| ((block % p) * 3 + layer) * counters + c;
    let mut edges = Vec::new();
    let mut link = |e: &LoopEffect, from: (usize, usize), to: (usize, usize)| {
        for (d, c, w) in e.edges() {
            edges.push((node(from.0, from.1, d), node(to.0, to.1, c), w));
        }
    };
    for (i, ph) in phases.iter().enumerate() {
        link(&ph.pre, (i, 0), (i, 1));
        link(&ph.cycle, (i, 1), (i, 2));
        link(&ph.cycle, (i, 2), (i, 2));
        link(&ph.post, (i, 2), (i + 1, 0));
    }
    let grow = graph::reachable_from_positive_cycle(3 * p * counters, &edges);
    let mut out = vec![true; counters];
    let mut check = |e: &LoopEffect, block: usize, layer: usize| {
        for (c, row) in &e.outputs {
            if row.feeds().any(|d| grow[node(block, layer, d.index())]) {
                out[c.index()] = false;
            }
        }
    };
    for (i, ph) in phases.iter().enumerate() {
        check(&ph.pre, i, 0);
        check(&ph.cycle, i, 1);
        check(&ph.cycle, i, 2);
        check(&ph.post, i, 2);
    }
    out
}

/// Lasso words are decided exactly, ramp words soundly.
pub fn membership(a: &MaxAutomaton, w: &InfiniteWord, config: &RampConfig) -> Result<Membership> {
    match w {
        InfiniteWord::Lasso(l) => lasso_membership(a, l),
        InfiniteWord::Ramp(r) => ramp_certify(a, r, config),
    }
}

/// Tail output maxima by brute force, for tests: the maximum output of each
/// counter over the periods `[from, to)` of a lasso.
pub fn simulate_lasso_maxima(
    a: &MaxAutomaton,
    w: &LassoWord,
    ranges: &[(usize, usize)],
) -> Result<Vec<Vec<Option<u64>>>> {
    let mut cfg = a.run_finite(&w.prefix)?;
    let end = ranges.iter().map(|r| r.1).max().unwrap_or(0);
    let mut per_period: Vec<Vec<Option<u64>>> = Vec::with_capacity(end);
    for _ in 0..end {
        let mut maxima = vec![None; a.counter_count()];
        for &l in &w.period {
            let t = a.transition(cfg.state, l);
            crate::automaton::apply_ops(&t.ops, &mut cfg.values, |c, v| {
                let m: &mut Option<u64> = &mut maxima[c.index()];
                *m = Some(m.map_or(v, |m| m.max(v)));
            })?;
            cfg.state = t.target;
        }
        per_period.push(maxima);
    }
    Ok(ranges
        .iter()
        .map(|&(from, to)| {
            (0..a.counter_count())
                .map(|c| per_period[from..to].iter().filter_map(|m| m[c]).max())
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automaton::Counter;
    use crate::fixtures::gap;
    use crate::muller::{from_muller, MullerAutomaton};
    use crate::ops::complement;
    use crate::word::parse_word_spec;

    fn word(s: &str) -> InfiniteWord {
        parse_word_spec(s, &['a', 'b'], 0).unwrap()
    }

    fn verdict(a: &MaxAutomaton, s: &str) -> Verdict {
        membership(a, &word(s), &RampConfig::default()).unwrap().verdict
    }

    #[test]
    fn gap_on_lassos() {
        let g = gap();
        assert_eq!(verdict(&g, "lasso::ab"), Verdict::Reject);
        assert_eq!(verdict(&g, "lasso::a"), Verdict::Reject);
        assert_eq!(verdict(&g, "lasso:aaab:b"), Verdict::Reject);
        let m = lasso_membership(&g, match &word("lasso::ab") {
            InfiniteWord::Lasso(l) => l,
            _ => unreachable!(),
        })
        .unwrap();
        assert_eq!(m.bounded, vec![Some(true)]);
    }

    #[test]
    fn gap_outputs_on_ab_are_constant() {
        let InfiniteWord::Lasso(l) = word("lasso::ab") else { unreachable!() };
        let maxima = simulate_lasso_maxima(&gap(), &l, &[(0, 50), (50, 100)]).unwrap();
        assert_eq!(maxima, vec![vec![Some(1)], vec![Some(1)]]);
    }

    #[test]
    fn muller_import_on_lasso() {
        let m = MullerAutomaton::from_fn(
            vec!['a', 'b'],
            0,
            2,
            0,
            |_, l| l.symbol as usize,
            vec![vec![1], vec![0, 1]],
        );
        let a = from_muller(&m).unwrap();
        assert_eq!(verdict(&a, "lasso::ab"), Verdict::Accept);
        assert_eq!(verdict(&a, "lasso:b:a"), Verdict::Reject);
    }

    #[test]
    fn gap_on_ramp() {
        assert_eq!(verdict(&gap(), "ramp::a:b"), Verdict::Accept);
        assert_eq!(verdict(&complement(&gap()), "ramp::a:b"), Verdict::Reject);
        assert_eq!(verdict(&gap(), "ramp:b:ab:b"), Verdict::Reject);
        assert_eq!(verdict(&gap(), "ramp:a:b:a"), Verdict::Reject);
    }

    #[test]
    fn resetting_pump_is_decided_bounded() {
        // every letter resets c; outputs on b
        let mut a = gap();
        a.delta[0] = Some(crate::automaton::Transition::new(
            0,
            vec![CounterOp::Reset(Counter(0))],
        ));
        let m = membership(&a, &word("ramp::a:b"), &RampConfig::default()).unwrap();
        assert_eq!(m.bounded, vec![Some(true)]);
        assert_eq!(m.verdict, Verdict::Reject);
    }

    #[test]
    fn counting_blocks_is_certified_unbounded() {
        // c counts b's and is output at each b; never reset
        let mut a = gap();
        a.delta[0] = Some(crate::automaton::Transition::new(0, Vec::new()));
        a.delta[1] = Some(crate::automaton::Transition::new(
            0,
            vec![CounterOp::Increment(Counter(0)), CounterOp::Output(Counter(0))],
        ));
        assert_eq!(verdict(&a, "ramp::a:b"), Verdict::Accept);
        assert_eq!(verdict(&a, "lasso::ab"), Verdict::Accept);
    }

    #[test]
    fn tight_limits_give_unknown() {
        let tight = RampConfig {
            horizon: 0,
            window: 8,
            ceiling: 10,
        };
        let m = membership(&gap(), &word("ramp::a:b"), &tight).unwrap();
        assert_eq!(m.verdict, Verdict::Unknown);
    }
}
