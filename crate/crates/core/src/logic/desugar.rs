//! Elimination of first-order variables.
//!
//! A position variable `x` becomes a set variable of the same name
//! constrained to be a singleton:
//!
//! | surface    | core                                          |
//! |------------|-----------------------------------------------|
//! | `x in X`   | `sub(x, X)`                                   |
//! | `x <= y`   | `before(x, y) \| (sub(x, y) & sub(y, x))`     |
//! | `a(x)`     | `letters(x, a)`                               |
//! | `ex x. φ`  | `exf x. sing(x) & φ`                          |
//! | `all x. φ` | `!(exf x. sing(x) & !φ)`                      |
//! | `φ -> ψ`   | `!φ \| ψ`                                     |
//!
//! `before` is strict on singletons, so `x <= y` adds the equality case
//! as mutual inclusion.

use alloc::boxed::Box;

use super::{Core, Quantifier, Surface};

pub fn desugar(f: &Surface) -> Core {
    match f {
        Surface::True => Core::True,
        Surface::False => Core::False,
        Surface::In(x, y) | Surface::Sub(x, y) => Core::Sub(x.name.clone(), y.name.clone()),
        Surface::Le(x, y) => {
            let (x, y) = (x.name.clone(), y.name.clone());
            Core::Before(x.clone(), y.clone())
                .or(Core::Sub(x.clone(), y.clone()).and(Core::Sub(y, x)))
        }
        Surface::Letter(a, x) | Surface::Letters(x, a) => Core::LetterAll(x.name.clone(), *a),
        Surface::Sing(x) => Core::Sing(x.name.clone()),
        Surface::Before(x, y) => Core::Before(x.name.clone(), y.name.clone()),
        Surface::Not(g) => desugar(g).not(),
        Surface::And(g, h) => desugar(g).and(desugar(h)),
        Surface::Or(g, h) => desugar(g).or(desugar(h)),
        Surface::Implies(g, h) => desugar(g).not().or(desugar(h)),
        Surface::Quant(q, x, g) => {
            let x = x.name.clone();
            let body = desugar(g);
            match q {
                Quantifier::Exists => {
                    Core::ExistsFin(x.clone(), Box::new(Core::Sing(x).and(body)))
                }
                Quantifier::Forall => {
                    Core::ExistsFin(x.clone(), Box::new(Core::Sing(x).and(body.not()))).not()
                }
                Quantifier::ExistsFin => Core::ExistsFin(x, Box::new(body)),
                Quantifier::Unbounding => Core::Unbounding(x, Box::new(body)),
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::logic::parse;
    use alloc::string::ToString;

    #[test]
    fn exists_position_with_letter() {
        let core = desugar(&parse("ex x. b(x)").unwrap());
        assert_eq!(
            core,
            Core::ExistsFin(
                "x".to_string(),
                Box::new(Core::Sing("x".to_string()).and(Core::LetterAll("x".to_string(), 'b')))
            )
        );
    }

    #[test]
    fn set_only_formula_is_unchanged() {
        assert_eq!(
            desugar(&parse("exf X. true").unwrap()),
            Core::ExistsFin("X".to_string(), Box::new(Core::True))
        );
    }

    #[test]
    fn gap_formula_shape() {
        let f = parse("U X. all x. all y. all z. (x<=y & y<=z & x in X & z in X) -> (a(y) & y in X)").unwrap();
        let core = desugar(&f);
        assert!(core.free_vars().is_empty());
        assert_eq!(core.quantifiers(), 4);
        assert!(matches!(core, Core::Unbounding(..)));
        assert!(core.to_surface().is_core_shaped());
    }
}
