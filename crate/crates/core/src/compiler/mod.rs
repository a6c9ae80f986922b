//! Translation of core formulas into deterministic max-automata, by
//! induction on the formula.
//!
//! A formula with free set variables `X_1..X_n` is compiled to an automaton
//! over `Σ × {0,1}^n` whose track `i` carries `X_i`. Atoms are ω-regular,
//! boolean connectives are products and complements, and the two
//! quantifiers are handled by [`exists_fin`] and [`u_quantifier`]. Every
//! intermediate result goes through [`reduce`].

pub mod atoms;
pub mod guards;
pub mod reduce;
pub mod spanning;
pub mod unbounding;
pub mod weak;

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::acceptance::Connective;
use crate::automaton::{MaxAutomaton, MAX_TRACKS};
use crate::error::{Error, Result};
use crate::logic::Core;
use crate::ops::{complement, product};

pub use atoms::atomic_automaton;
pub use guards::{remove_guards, Guard, GuardedMaxAutomaton};
pub use reduce::reduce;
pub use spanning::{compose_with_transducer, identity_transducer, spanning_transducer, Checker, SpanLetter, Transducer};
pub use unbounding::{maxcount_augment, u_quantifier, MaxCount};
pub use weak::{condition_a, condition_b, exists_fin};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CompileConfig {
    /// Largest number of states any single construction may create.
    pub state_budget: usize,
    /// Largest number of guard ids accepted by guard elimination.
    pub guard_limit: usize,
}

impl Default for CompileConfig {
    fn default() -> Self {
        CompileConfig {
            state_budget: 1_000_000,
            guard_limit: 64,
        }
    }
}

/// One inductive step of a compilation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceLine {
    pub depth: usize,
    pub step: String,
    pub states: usize,
    pub counters: usize,
}

impl fmt::Display for TraceLine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:indent$}{}: {} states, {} counters",
            "",
            self.step,
            self.states,
            self.counters,
            indent = 2 * self.depth
        )
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Compiled {
    pub automaton: MaxAutomaton,
    /// Track order: track `i` carries `vars[i]`.
    pub vars: Vec<String>,
    pub trace: Vec<TraceLine>,
}

/// Compiles a core formula over the base alphabet; tracks follow
/// `f.free_vars()`.
pub fn compile(f: &Core, alphabet: &[char], config: &CompileConfig) -> Result<Compiled> {
    let vars = f.free_vars();
    let mut trace = Vec::new();
    let automaton = compile_with(f, &vars, alphabet, config, 0, &mut trace)?;
    Ok(Compiled {
        automaton,
        vars,
        trace,
    })
}

/// Compiles `f` over the tracks `vars` (which must contain its free
/// variables), appending to `trace`.
pub fn compile_with(
    f: &Core,
    vars: &[String],
    alphabet: &[char],
    config: &CompileConfig,
    depth: usize,
    trace: &mut Vec<TraceLine>,
) -> Result<MaxAutomaton> {
    let budget = config.state_budget;
    let (step, raw) = match f {
        Core::True | Core::False | Core::Sing(_) | Core::Sub(..) | Core::Before(..) | Core::LetterAll(..) => {
            (format!("{f}"), atomic_automaton(f, vars, alphabet)?)
        }
        Core::Not(g) => {
            let inner = compile_with(g, vars, alphabet, config, depth + 1, trace)?;
            (String::from("not"), complement(&inner))
        }
        Core::And(g, h) | Core::Or(g, h) => {
            let left = compile_with(g, vars, alphabet, config, depth + 1, trace)?;
            let right = compile_with(h, vars, alphabet, config, depth + 1, trace)?;
            let (name, join) = match f {
                Core::And(..) => ("and", Connective::And),
                _ => ("or", Connective::Or),
            };
            if left.state_count().saturating_mul(right.state_count()) > budget {
                return Err(Error::StateBudget { budget, stage: "product" });
            }
            (String::from(name), product(&left, &right, join)?)
        }
        Core::ExistsFin(x, g) | Core::Unbounding(x, g) => {
            if vars.len() >= MAX_TRACKS {
                return Err(Error::TrackOutOfRange {
                    index: vars.len(),
                    tracks: MAX_TRACKS,
                });
            }
            let mut inner_vars = vars.to_vec();
            inner_vars.push(x.clone());
            let inner = compile_with(g, &inner_vars, alphabet, config, depth + 1, trace)?;
            match f {
                Core::ExistsFin(..) => (format!("exf {x}"), exists_fin(&inner, budget)?),
                _ => (format!("U {x}"), u_quantifier(&inner, budget, config.guard_limit)?),
            }
        }
    };
    if raw.state_count() > budget {
        return Err(Error::StateBudget { budget, stage: "compilation" });
    }
    let out = reduce(&raw);
    trace.push(TraceLine {
        depth,
        step,
        states: out.state_count(),
        counters: out.counter_count(),
    });
    Ok(out)
}
