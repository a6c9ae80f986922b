//! Differential checks of the formula compiler on the lasso corpus.

mod common;

use maxreg_core::compiler::{compile, CompileConfig};
use maxreg_core::corpus::lassos;
use maxreg_core::logic::{desugar, parse};
use maxreg_core::membership::{lasso_membership, Verdict};
use maxreg_core::word::annotate;
use maxreg_core::{InfiniteWord, LassoWord, MaxAutomaton};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn compile_text(text: &str) -> MaxAutomaton {
    let core = desugar(&parse(text).unwrap());
    compile(&core, &['a', 'b'], &CompileConfig::default()).unwrap().automaton
}

fn corpus() -> Vec<LassoWord> {
    lassos(2, 2, 3)
        .into_iter()
        .map(|w| match w {
            InfiniteWord::Lasso(l) => l,
            InfiniteWord::Ramp(_) => unreachable!(),
        })
        .collect()
}

fn verdict(a: &MaxAutomaton, w: &LassoWord) -> Verdict {
    lasso_membership(a, w).unwrap().verdict
}

fn equivalent(x: &str, y: &str) {
    let (a, b) = (compile_text(x), compile_text(y));
    for w in corpus() {
        assert_eq!(verdict(&a, &w), verdict(&b, &w), "`{x}` vs `{y}` on {w:?}");
    }
}

const BODIES: [&str; 4] = [
    "ex x. x in X & b(x)",
    "all x. x in X -> a(x)",
    "ex x. ex y. x in X & y in X & !(x <= y & y <= x)",
    "all x. x in X -> ex y. x <= y & !(y <= x) & b(y) & !(y in X)",
];

#[test]
fn existential_distributes_over_disjunction() {
    for (i, phi) in BODIES.iter().enumerate() {
        for psi in &BODIES[i + 1..] {
            equivalent(
                &format!("exf X. ({phi}) | ({psi})"),
                &format!("(exf X. {phi}) | (exf X. {psi})"),
            );
        }
    }
}

#[test]
fn unbounding_implies_weak_existence() {
    for phi in BODIES {
        let u = compile_text(&format!("U X. {phi}"));
        let e = compile_text(&format!("exf X. {phi}"));
        for w in corpus() {
            if verdict(&u, &w) == Verdict::Accept {
                assert_eq!(verdict(&e, &w), Verdict::Accept, "`{phi}` on {w:?}");
            }
        }
    }
}

#[test]
fn idempotence_and_de_morgan() {
    let phi = "ex x. b(x) & all y. y <= x | a(y)";
    let psi = "all x. ex y. x <= y & b(y)";
    equivalent(&format!("({phi}) & ({phi})"), phi);
    equivalent(&format!("({phi}) | ({phi})"), phi);
    equivalent(&format!("!(({phi}) & ({psi}))"), &format!("!({phi}) | !({psi})"));
    equivalent(&format!("!(({phi}) | ({psi}))"), &format!("!({phi}) & !({psi})"));
    equivalent("all x. a(x)", "!ex x. !a(x)");
}

#[test]
fn compiled_negation_is_complement() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..10 {
        let phi = common::random_formula(&mut rng, 3);
        let a = compile_text(&phi);
        let not_a = compile_text(&format!("!({phi})"));
        for w in corpus() {
            let (x, y) = (verdict(&a, &w), verdict(&not_a, &w));
            assert!(x.is_decided() && y.is_decided() && x != y, "`{phi}` on {w:?}");
        }
    }
}

/// A finite witness set found by enumeration must be seen by the compiled
/// existential quantifier.
#[test]
fn witnesses_for_weak_existence_are_found() {
    for phi in BODIES {
        let open = {
            let core = desugar(&parse(phi).unwrap());
            compile(&core, &['a', 'b'], &CompileConfig::default()).unwrap()
        };
        assert_eq!(open.vars, vec![String::from("X")]);
        let closed = compile_text(&format!("exf X. {phi}"));
        for w in corpus() {
            let word = InfiniteWord::Lasso(w.clone());
            let found = (0u32..1 << 6).any(|mask| {
                let positions: Vec<usize> = (0..6).filter(|&p| mask >> p & 1 == 1).collect();
                let InfiniteWord::Lasso(marked) = annotate(&word, 0, &positions) else { unreachable!() };
                verdict(&open.automaton, &marked) == Verdict::Accept
            });
            if found {
                assert_eq!(verdict(&closed, &w), Verdict::Accept, "`{phi}` on {w:?}");
            }
        }
    }
}

#[test]
fn interval_formula_on_words_with_infinitely_many_b() {
    let g = maxreg_core::fixtures::gap();
    let a = compile_text(
        "(U X. all x. all y. all z. (x<=y & y<=z & x in X & z in X) -> (a(y) & y in X)) \
         & (all x. ex y. x <= y & b(y))",
    );
    for w in corpus() {
        assert_eq!(verdict(&a, &w), verdict(&g, &w), "{w:?}");
    }
}
