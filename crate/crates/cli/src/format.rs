//! JSON representation of max-automata.
//!
//! ```json
//! {
//!   "alphabet": ["a", "b"],
//!   "tracks": 0,
//!   "states": ["s"],
//!   "initial": "s",
//!   "counters": ["c"],
//!   "transitions": [
//!     {"from": "s", "letter": "a", "to": "s", "ops": ["inc c"]},
//!     {"from": "s", "letter": "b", "to": "s", "ops": ["out c", "reset c"]}
//!   ],
//!   "acceptance": "!B(c)"
//! }
//! ```
//!
//! Letters use the word-spec syntax (`a`, or `a[01]` with tracks). Ops are
//! `inc c`, `reset c`, `out c` and `max c d` (`c := max(c, d)`).

use std::path::Path;

use maxreg_core::word::parse_finite_word;
use maxreg_core::{Acceptance, Counter, CounterOp, MaxAutomaton, Transition};
use serde::{Deserialize, Serialize};

use crate::{read_file, write_file, CliError, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AutomatonFile {
    pub alphabet: Vec<char>,
    #[serde(default)]
    pub tracks: usize,
    /// Names of the annotation tracks, when known.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub track_names: Vec<String>,
    pub states: Vec<String>,
    pub initial: String,
    #[serde(default)]
    pub counters: Vec<String>,
    pub transitions: Vec<TransitionEntry>,
    pub acceptance: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransitionEntry {
    pub from: String,
    pub letter: String,
    pub to: String,
    #[serde(default)]
    pub ops: Vec<String>,
}

fn format_error(message: impl Into<String>) -> CliError {
    CliError::Format(message.into())
}

fn render_letter(a: &MaxAutomaton, index: usize) -> String {
    let l = a.letter_at(index);
    let mut s = a.alphabet[l.symbol as usize].to_string();
    if a.tracks > 0 {
        s.push('[');
        for t in 0..a.tracks {
            s.push(if l.bit(t) { '1' } else { '0' });
        }
        s.push(']');
    }
    s
}

fn render_op(a: &MaxAutomaton, op: &CounterOp) -> Result<String> {
    let name = |c: Counter| a.counter_name(c);
    Ok(match *op {
        CounterOp::Increment(c) => format!("inc {}", name(c)),
        CounterOp::Reset(c) => format!("reset {}", name(c)),
        CounterOp::Output(c) => format!("out {}", name(c)),
        CounterOp::MaxInto(c, d) => format!("max {} {}", name(c), name(d)),
        CounterOp::GuardedOutput(..) => return Err(format_error("guarded outputs cannot be saved")),
    })
}

fn parse_op(text: &str, counter: &impl Fn(&str) -> Result<Counter>) -> Result<CounterOp> {
    let words: Vec<&str> = text.split_whitespace().collect();
    Ok(match words.as_slice() {
        ["inc", c] => CounterOp::Increment(counter(c)?),
        ["reset", c] => CounterOp::Reset(counter(c)?),
        ["out", c] => CounterOp::Output(counter(c)?),
        ["max", c, d] => CounterOp::MaxInto(counter(c)?, counter(d)?),
        _ => return Err(format_error(format!("malformed op `{text}`"))),
    })
}

impl AutomatonFile {
    pub fn from_automaton(a: &MaxAutomaton, track_names: &[String]) -> Result<Self> {
        a.ensure_valid()?;
        for name in &a.counter_names {
            if name.is_empty() || name.bytes().any(|b| !(b.is_ascii_alphanumeric() || b"_'.#$@".contains(&b))) {
                return Err(format_error(format!("counter name `{name}` cannot be written")));
            }
        }
        let mut transitions = Vec::with_capacity(a.delta.len());
        for q in 0..a.state_count() {
            for l in 0..a.letter_count() {
                let t = a.transition_at(q, l);
                transitions.push(TransitionEntry {
                    from: a.state_name(q),
                    letter: render_letter(a, l),
                    to: a.state_name(t.target),
                    ops: t.ops.iter().map(|op| render_op(a, op)).collect::<Result<_>>()?,
                });
            }
        }
        Ok(AutomatonFile {
            alphabet: a.alphabet.clone(),
            tracks: a.tracks,
            track_names: track_names.to_vec(),
            states: a.state_names.clone(),
            initial: a.state_name(a.initial),
            counters: a.counter_names.clone(),
            transitions,
            acceptance: a.acceptance.display(|c| a.counter_name(c)).to_string(),
        })
    }

    pub fn to_automaton(&self) -> Result<MaxAutomaton> {
        let state = |name: &str| {
            self.states
                .iter()
                .position(|s| s == name)
                .ok_or_else(|| format_error(format!("unknown state {name}")))
        };
        let counter = |name: &str| {
            self.counters
                .iter()
                .position(|c| c == name)
                .map(Counter::from_index)
                .ok_or_else(|| format_error(format!("unknown counter {name}")))
        };
        for (i, name) in self.states.iter().enumerate() {
            if self.states[..i].contains(name) {
                return Err(format_error(format!("duplicate state {name}")));
            }
        }
        for (i, name) in self.counters.iter().enumerate() {
            if self.counters[..i].contains(name) {
                return Err(format_error(format!("duplicate counter {name}")));
            }
        }
        if self.tracks > maxreg_core::automaton::MAX_TRACKS {
            return Err(format_error(format!("too many tracks ({})", self.tracks)));
        }
        let mut a = MaxAutomaton {
            alphabet: self.alphabet.clone(),
            tracks: self.tracks,
            state_names: self.states.clone(),
            initial: state(&self.initial)?,
            counter_names: self.counters.clone(),
            delta: Vec::new(),
            acceptance: Acceptance::True,
        };
        a.delta = vec![None; a.state_count() * a.letter_count()];
        for t in &self.transitions {
            let from = state(&t.from)?;
            let to = state(&t.to)?;
            let letter = match parse_finite_word(&t.letter, &self.alphabet, self.tracks)?.as_slice() {
                [l] => *l,
                _ => return Err(format_error(format!("`{}` is not a single letter", t.letter))),
            };
            let ops = t.ops.iter().map(|op| parse_op(op, &counter)).collect::<Result<_>>()?;
            let index = from * a.letter_count() + a.letter_index(letter);
            let slot = &mut a.delta[index];
            if slot.is_some() {
                return Err(format_error(format!(
                    "two transitions from {} on {}",
                    t.from, t.letter
                )));
            }
            *slot = Some(Transition::new(to, ops));
        }
        a.acceptance = Acceptance::parse(&self.acceptance, |name| counter(name).ok()).map_err(|e| {
            // name resolution failures surface as parse errors; report the name
            match unresolved_name(&self.acceptance, &self.counters) {
                Some(name) => format_error(format!("unknown counter {name}")),
                None => CliError::Core(e),
            }
        })?;
        a.ensure_valid()?;
        Ok(a)
    }
}

/// The first `B(name)` in `text` whose name is not a declared counter.
fn unresolved_name(text: &str, counters: &[String]) -> Option<String> {
    let mut rest = text;
    while let Some(i) = rest.find("B(") {
        let after = &rest[i + 2..];
        let end = after.find(')').unwrap_or(after.len());
        let name = after[..end].trim();
        if !counters.iter().any(|c| c == name) {
            return Some(name.to_string());
        }
        rest = &after[end..];
    }
    None
}

pub fn parse_automaton(text: &str) -> Result<(MaxAutomaton, Vec<String>)> {
    let file: AutomatonFile = serde_json::from_str(text).map_err(|source| CliError::Json {
        path: "<input>".into(),
        source,
    })?;
    Ok((file.to_automaton()?, file.track_names))
}

pub fn load_automaton(path: &Path) -> Result<MaxAutomaton> {
    let text = read_file(path)?;
    let file: AutomatonFile = serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.to_path_buf(),
        source,
    })?;
    file.to_automaton()
}

pub fn render_automaton(a: &MaxAutomaton, track_names: &[String]) -> Result<String> {
    let file = AutomatonFile::from_automaton(a, track_names)?;
    let mut text = serde_json::to_string_pretty(&file).expect("plain data serializes");
    text.push('\n');
    Ok(text)
}

pub fn save_automaton(path: &Path, a: &MaxAutomaton, track_names: &[String]) -> Result<()> {
    write_file(path, &render_automaton(a, track_names)?)
}
