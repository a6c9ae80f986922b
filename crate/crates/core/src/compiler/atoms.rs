//! Automata for the atomic predicates, built as small deterministic Muller
//! automata and converted with [`from_muller`].

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::acceptance::Acceptance;
use crate::automaton::{Letter, MaxAutomaton};
use crate::error::{Error, Result};
use crate::logic::Core;
use crate::muller::{from_muller, MullerAutomaton};

fn track_of(vars: &[String], name: &str) -> Result<usize> {
    vars.iter()
        .rposition(|v| v == name)
        .ok_or_else(|| Error::UnboundVariable {
            name: String::from(name),
            line: 0,
            column: 0,
        })
}

/// Automaton over `alphabet × {0,1}^vars.len()` for an atom of the core
/// logic; track `i` carries the set variable `vars[i]`.
pub fn atomic_automaton(atom: &Core, vars: &[String], alphabet: &[char]) -> Result<MaxAutomaton> {
    let tracks = vars.len();
    let constant = |accept: bool| {
        Ok(MaxAutomaton::trivial(
            alphabet.to_vec(),
            tracks,
            if accept { Acceptance::True } else { Acceptance::False },
        ))
    };
    let muller = |states: usize, next: &dyn Fn(usize, Letter) -> usize, family: Vec<Vec<usize>>| {
        from_muller(&MullerAutomaton::from_fn(
            alphabet.to_vec(),
            tracks,
            states,
            0,
            next,
            family,
        ))
    };
    let names = |mut a: MaxAutomaton, names: &[&str]| {
        a.state_names = names.iter().map(|s| String::from(*s)).collect();
        a
    };
    match atom {
        Core::True => constant(true),
        Core::False => constant(false),
        Core::Sing(x) => {
            let x = track_of(vars, x)?;
            // 0: nothing seen, 1: one element, 2: two or more
            let a = muller(
                3,
                &|q, l| match (q, l.bit(x)) {
                    (q, false) => q,
                    (0, true) => 1,
                    _ => 2,
                },
                vec![vec![1]],
            )?;
            Ok(names(a, &["none", "one", "many"]))
        }
        Core::Sub(x, y) => {
            let (x, y) = (track_of(vars, x)?, track_of(vars, y)?);
            let a = muller(
                2,
                &|q, l| if q == 1 || (l.bit(x) && !l.bit(y)) { 1 } else { 0 },
                vec![vec![0]],
            )?;
            Ok(names(a, &["ok", "dead"]))
        }
        Core::Before(x, y) => {
            let (x, y) = (track_of(vars, x)?, track_of(vars, y)?);
            // 0: no element of y yet, 1: some element of y seen, 2: violated
            let a = muller(
                3,
                &|q, l| match q {
                    0 if l.bit(x) && l.bit(y) => 2,
                    0 if l.bit(y) => 1,
                    1 if l.bit(x) => 2,
                    2 => 2,
                    q => q,
                },
                vec![vec![0], vec![1]],
            )?;
            Ok(names(a, &["open", "closed", "dead"]))
        }
        Core::LetterAll(x, c) => {
            let x = track_of(vars, x)?;
            let symbol = alphabet.iter().position(|a| a == c);
            let a = muller(
                2,
                &|q, l| {
                    let bad = l.bit(x) && Some(l.symbol as usize) != symbol;
                    if q == 1 || bad {
                        1
                    } else {
                        0
                    }
                },
                vec![vec![0]],
            )?;
            Ok(names(a, &["ok", "dead"]))
        }
        other => Err(Error::Malformed(format!("{other} is not an atom"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::membership::{lasso_membership, Verdict};
    use crate::word::{parse_word_spec, InfiniteWord};

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| String::from(*s)).collect()
    }

    fn verdict(a: &MaxAutomaton, spec: &str) -> Verdict {
        let InfiniteWord::Lasso(w) = parse_word_spec(spec, &a.alphabet, a.tracks).unwrap() else {
            unreachable!()
        };
        lasso_membership(a, &w).unwrap().verdict
    }

    #[test]
    fn singleton() {
        let a = atomic_automaton(&Core::Sing("X".into()), &vars(&["X"]), &['a', 'b']).unwrap();
        assert!(a.state_count() <= 4);
        assert_eq!(verdict(&a, "lasso:a[1]b[0]:a[0]"), Verdict::Accept);
        assert_eq!(verdict(&a, "lasso::a[0]"), Verdict::Reject);
        assert_eq!(verdict(&a, "lasso:a[1]b[1]:a[0]"), Verdict::Reject);
        assert_eq!(verdict(&a, "lasso::a[1]"), Verdict::Reject);
    }

    #[test]
    fn inclusion() {
        let a = atomic_automaton(&Core::Sub("X".into(), "Y".into()), &vars(&["X", "Y"]), &['a']).unwrap();
        assert_eq!(verdict(&a, "lasso:a[11]a[10]:a[00]"), Verdict::Reject);
        assert_eq!(verdict(&a, "lasso:a[11]a[01]:a[00]"), Verdict::Accept);
    }

    #[test]
    fn before_is_strict() {
        let a = atomic_automaton(&Core::Before("X".into(), "Y".into()), &vars(&["X", "Y"]), &['a']).unwrap();
        assert_eq!(verdict(&a, "lasso:a[10]a[01]:a[00]"), Verdict::Accept);
        assert_eq!(verdict(&a, "lasso:a[01]a[10]:a[00]"), Verdict::Reject);
        assert_eq!(verdict(&a, "lasso:a[11]:a[00]"), Verdict::Reject);
        assert_eq!(verdict(&a, "lasso::a[01]"), Verdict::Accept);
    }

    #[test]
    fn letters() {
        let a = atomic_automaton(&Core::LetterAll("X".into(), 'b'), &vars(&["X"]), &['a', 'b']).unwrap();
        assert_eq!(verdict(&a, "lasso:b[1]a[0]:b[1]"), Verdict::Accept);
        assert_eq!(verdict(&a, "lasso:a[1]:b[0]"), Verdict::Reject);
        let c = atomic_automaton(&Core::LetterAll("X".into(), 'c'), &vars(&["X"]), &['a', 'b']).unwrap();
        assert_eq!(verdict(&c, "lasso::a[0]"), Verdict::Accept);
        assert_eq!(verdict(&c, "lasso:b[1]:a[0]"), Verdict::Reject);
    }
}
