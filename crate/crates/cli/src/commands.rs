//! The four subcommands. Each returns the process exit code and writes its
//! report to `out`; diagnostics go to `err`.

use std::io::Write;
use std::path::Path;

use maxreg_core::compiler::{compile, CompileConfig};
use maxreg_core::emptiness::{emptiness_search, Emptiness, EmptyReason, SearchConfig};
use maxreg_core::logic::{desugar, parse};
use maxreg_core::membership::{membership, Membership, RampConfig, Verdict};
use maxreg_core::word::parse_word_spec;
use maxreg_core::{Error, MaxAutomaton};

use crate::corpus::{load_corpus, parse_corpus, DEFAULT_CORPUS};
use crate::format::{load_automaton, save_automaton};
use crate::{dot, read_file, write_file, CliError};

pub const ACCEPT: i32 = 0;
pub const REJECT: i32 = 1;
pub const UNKNOWN: i32 = 2;
pub const INPUT_ERROR: i32 = 3;
pub const BUDGET_EXCEEDED: i32 = 4;

fn fail(err: &mut dyn Write, e: &CliError) -> i32 {
    writeln!(err, "error: {e}").ok();
    match e {
        CliError::Core(Error::StateBudget { .. }) => BUDGET_EXCEEDED,
        _ => INPUT_ERROR,
    }
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Accept => ACCEPT,
        Verdict::Reject => REJECT,
        Verdict::Unknown => UNKNOWN,
    }
}

fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Accept => "accept",
        Verdict::Reject => "reject",
        Verdict::Unknown => "unknown",
    }
}

fn write_atoms(out: &mut dyn Write, a: &MaxAutomaton, m: &Membership) {
    for c in a.acceptance.atoms() {
        let state = match m.bounded[c.index()] {
            Some(true) => "bounded",
            Some(false) => "unbounded",
            None => "undecided",
        };
        writeln!(out, "  B({}) = {state}", a.counter_name(c)).ok();
    }
}

pub struct CompileArgs<'a> {
    pub formula: &'a Path,
    pub output: &'a Path,
    pub dot: Option<&'a Path>,
    pub state_budget: usize,
    /// Letters of the automaton; letters mentioned by the formula are added.
    pub alphabet: &'a str,
    pub trace: bool,
}

pub fn cmd_compile(args: &CompileArgs, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let run = || -> Result<_, CliError> {
        let text = read_file(args.formula)?;
        let core = desugar(&parse(&text)?);
        let mut alphabet: Vec<char> = args.alphabet.chars().collect();
        for c in core.letters() {
            if !alphabet.contains(&c) {
                alphabet.push(c);
            }
        }
        let config = CompileConfig {
            state_budget: args.state_budget,
            ..CompileConfig::default()
        };
        let compiled = compile(&core, &alphabet, &config)?;
        save_automaton(args.output, &compiled.automaton, &compiled.vars)?;
        if let Some(path) = args.dot {
            write_file(path, &dot::to_dot(&compiled.automaton))?;
        }
        Ok(compiled)
    };
    match run() {
        Ok(compiled) => {
            if args.trace {
                for line in &compiled.trace {
                    writeln!(out, "{line}").ok();
                }
            }
            let a = &compiled.automaton;
            writeln!(out, "{} states, {} counters", a.state_count(), a.counter_count()).ok();
            ACCEPT
        }
        Err(e) => fail(err, &e),
    }
}

pub fn cmd_check(automaton: &Path, spec: &str, horizon: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let run = || -> Result<_, CliError> {
        let a = load_automaton(automaton)?;
        let w = parse_word_spec(spec, &a.alphabet, a.tracks)?;
        let config = RampConfig {
            horizon,
            ..RampConfig::default()
        };
        let m = membership(&a, &w, &config)?;
        Ok((a, w, m))
    };
    match run() {
        Ok((a, w, m)) => {
            writeln!(out, "{}: {}", verdict_name(m.verdict), w.to_spec(&a.alphabet, a.tracks)).ok();
            write_atoms(out, &a, &m);
            verdict_code(m.verdict)
        }
        Err(e) => fail(err, &e),
    }
}

pub fn cmd_empty(automaton: &Path, budget: usize, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let run = || -> Result<_, CliError> {
        let a = load_automaton(automaton)?;
        let config = SearchConfig {
            budget,
            ..SearchConfig::default()
        };
        let result = emptiness_search(&a, &config)?;
        Ok((a, result))
    };
    match run() {
        Ok((a, Emptiness::Nonempty { word, membership })) => {
            writeln!(out, "nonempty: {}", word.to_spec(&a.alphabet, a.tracks)).ok();
            write_atoms(out, &a, &membership);
            ACCEPT
        }
        Ok((_, Emptiness::Empty(reason))) => {
            let why = match reason {
                EmptyReason::FalseAcceptance => "acceptance condition is unsatisfiable",
                EmptyReason::NoGrowth => "no counter required unbounded can grow",
                EmptyReason::NoTrace => "the counter required unbounded has no arbitrarily long traces",
            };
            writeln!(out, "empty: {why}").ok();
            REJECT
        }
        Ok((_, Emptiness::Unknown { candidates })) => {
            writeln!(out, "unknown: no witness among {candidates} candidates").ok();
            UNKNOWN
        }
        Err(e) => fail(err, &e),
    }
}

pub fn cmd_eq(a: &Path, b: &Path, corpus: Option<&Path>, out: &mut dyn Write, err: &mut dyn Write) -> i32 {
    let run = || -> Result<_, CliError> {
        let a = load_automaton(a)?;
        let b = load_automaton(b)?;
        if a.alphabet != b.alphabet || a.tracks != b.tracks {
            return Err(Error::AlphabetMismatch {
                left: format!("{:?} with {} tracks", a.alphabet, a.tracks),
                right: format!("{:?} with {} tracks", b.alphabet, b.tracks),
            }
            .into());
        }
        let words = match corpus {
            Some(path) => load_corpus(path, &a.alphabet, a.tracks)?,
            None => parse_corpus(DEFAULT_CORPUS, &a.alphabet, a.tracks)?,
        };
        let config = RampConfig::default();
        let mut rows = Vec::with_capacity(words.len());
        for (spec, w) in &words {
            let x = membership(&a, w, &config)?.verdict;
            let y = membership(&b, w, &config)?.verdict;
            rows.push((spec.clone(), x, y));
        }
        Ok(rows)
    };
    let rows = match run() {
        Ok(rows) => rows,
        Err(e) => return fail(err, &e),
    };
    if rows.is_empty() {
        writeln!(err, "warning: the corpus is empty").ok();
    }
    let mut disagreements = 0;
    let mut unknown = 0;
    for (spec, x, y) in &rows {
        if *x == Verdict::Unknown || *y == Verdict::Unknown {
            unknown += 1;
            writeln!(out, "unknown: {spec} ({} vs {})", verdict_name(*x), verdict_name(*y)).ok();
        } else if x != y {
            disagreements += 1;
            writeln!(out, "differ: {spec} ({} vs {})", verdict_name(*x), verdict_name(*y)).ok();
        }
    }
    writeln!(
        out,
        "{} words, {disagreements} disagreements, {unknown} undecided",
        rows.len()
    )
    .ok();
    if disagreements == 0 {
        ACCEPT
    } else {
        REJECT
    }
}
