//! Graphviz export.

use std::fmt::Write;

use maxreg_core::{CounterOp, MaxAutomaton};

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

fn op_label(a: &MaxAutomaton, op: &CounterOp) -> String {
    let n = |c| a.counter_name(c);
    match *op {
        CounterOp::Increment(c) => format!("{}++", n(c)),
        CounterOp::Reset(c) => format!("{}:=0", n(c)),
        CounterOp::Output(c) => format!("out {}", n(c)),
        CounterOp::MaxInto(c, d) => format!("{0}:=max({0},{1})", n(c), n(d)),
        CounterOp::GuardedOutput(c, g) => format!("out {} if L{}", n(c), g.0),
    }
}

/// One edge per (source, target, ops), labelled with all its letters.
pub fn to_dot(a: &MaxAutomaton) -> String {
    let mut out = String::new();
    let acceptance = a.acceptance.display(|c| a.counter_name(c)).to_string();
    writeln!(out, "digraph automaton {{").unwrap();
    writeln!(out, "  rankdir=LR;").unwrap();
    writeln!(out, "  label=\"acceptance: {}\";", escape(&acceptance)).unwrap();
    writeln!(out, "  start [shape=point];").unwrap();
    for q in 0..a.state_count() {
        writeln!(out, "  q{q} [shape=circle, label=\"{}\"];", escape(&a.state_name(q))).unwrap();
    }
    writeln!(out, "  start -> q{};", a.initial).unwrap();
    for q in 0..a.state_count() {
        let mut edges: Vec<(usize, &[CounterOp], Vec<String>)> = Vec::new();
        for l in 0..a.letter_count() {
            let t = a.transition_at(q, l);
            let letter = a.letter_name(a.letter_at(l));
            match edges.iter_mut().find(|e| e.0 == t.target && e.1 == t.ops.as_slice()) {
                Some(e) => e.2.push(letter),
                None => edges.push((t.target, &t.ops, vec![letter])),
            }
        }
        for (target, ops, letters) in edges {
            let mut label = letters.join(",");
            if !ops.is_empty() {
                let ops: Vec<String> = ops.iter().map(|op| op_label(a, op)).collect();
                label.push_str(" / ");
                label.push_str(&ops.join("; "));
            }
            writeln!(out, "  q{q} -> q{target} [label=\"{}\"];", escape(&label)).unwrap();
        }
    }
    writeln!(out, "}}").unwrap();
    out
}
