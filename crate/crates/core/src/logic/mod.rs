//! Weak MSO with the unbounding quantifier: surface syntax with first-order
//! sugar, and the core fragment over set variables only.

mod desugar;
pub mod finite;
mod parser;
mod print;

use alloc::boxed::Box;
use alloc::string::String;
use alloc::vec::Vec;

pub use desugar::desugar;
pub use parser::parse;

/// Line and column (both 1-based) in the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

/// A variable occurrence. Positions are not part of a variable's identity:
/// two occurrences compare equal when their names do.
#[derive(Clone, Debug, Eq)]
pub struct Var {
    pub name: String,
    pub at: Pos,
}

impl Var {
    pub fn new(name: impl Into<String>) -> Var {
        Var {
            name: name.into(),
            at: Pos::default(),
        }
    }
}

impl PartialEq for Var {
    fn eq(&self, other: &Var) -> bool {
        self.name == other.name
    }
}

impl core::hash::Hash for Var {
    fn hash<H: core::hash::Hasher>(&self, state: &mut H) {
        self.name.hash(state)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Quantifier {
    /// `ex x.` over positions.
    Exists,
    /// `all x.` over positions.
    Forall,
    /// `exf X.` over finite sets.
    ExistsFin,
    /// `U X.`: arbitrarily large finite sets.
    Unbounding,
}

impl Quantifier {
    pub fn is_first_order(self) -> bool {
        matches!(self, Quantifier::Exists | Quantifier::Forall)
    }
}

/// Formulas as written: first-order variables are lowercase, set
/// variables uppercase.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Surface {
    True,
    False,
    /// `x in X`
    In(Var, Var),
    /// `x <= y`
    Le(Var, Var),
    /// `a(x)`
    Letter(char, Var),
    Sing(Var),
    Sub(Var, Var),
    Before(Var, Var),
    /// `letters(X, a)`
    Letters(Var, char),
    Not(Box<Surface>),
    And(Box<Surface>, Box<Surface>),
    Or(Box<Surface>, Box<Surface>),
    Implies(Box<Surface>, Box<Surface>),
    Quant(Quantifier, Var, Box<Surface>),
}

/// The core fragment: set variables, four atoms, negation, conjunction,
/// disjunction, weak existential and unbounding quantification.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Core {
    True,
    False,
    /// The set has exactly one element.
    Sing(String),
    /// The first set is included in the second.
    Sub(String, String),
    /// Every element of the first set is before every element of the second.
    Before(String, String),
    /// Every position of the set carries the letter.
    LetterAll(String, char),
    Not(Box<Core>),
    And(Box<Core>, Box<Core>),
    Or(Box<Core>, Box<Core>),
    ExistsFin(String, Box<Core>),
    Unbounding(String, Box<Core>),
}

impl Core {
    pub fn not(self) -> Core {
        match self {
            Core::Not(inner) => *inner,
            other => Core::Not(Box::new(other)),
        }
    }

    pub fn and(self, other: Core) -> Core {
        Core::And(Box::new(self), Box::new(other))
    }

    pub fn or(self, other: Core) -> Core {
        Core::Or(Box::new(self), Box::new(other))
    }

    /// Free set variables in order of first appearance (left to right).
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        let mut bound = Vec::new();
        self.collect_free(&mut bound, &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut note = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) && !out.contains(v) {
                out.push(v.clone());
            }
        };
        match self {
            Core::True | Core::False => {}
            Core::Sing(x) | Core::LetterAll(x, _) => note(x, bound),
            Core::Sub(x, y) | Core::Before(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            Core::Not(f) => f.collect_free(bound, out),
            Core::And(f, g) | Core::Or(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Core::ExistsFin(x, f) | Core::Unbounding(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// Number of binders, for reporting.
    pub fn quantifiers(&self) -> usize {
        match self {
            Core::Not(f) => f.quantifiers(),
            Core::And(f, g) | Core::Or(f, g) => f.quantifiers() + g.quantifiers(),
            Core::ExistsFin(_, f) | Core::Unbounding(_, f) => 1 + f.quantifiers(),
            _ => 0,
        }
    }

    /// Letters mentioned by `LetterAll` atoms, in order of appearance.
    pub fn letters(&self) -> Vec<char> {
        let mut out = Vec::new();
        self.visit(&mut |f| {
            if let Core::LetterAll(_, a) = f {
                if !out.contains(a) {
                    out.push(*a);
                }
            }
        });
        out
    }

    fn visit(&self, f: &mut impl FnMut(&Core)) {
        f(self);
        match self {
            Core::Not(g) | Core::ExistsFin(_, g) | Core::Unbounding(_, g) => g.visit(f),
            Core::And(g, h) | Core::Or(g, h) => {
                g.visit(f);
                h.visit(f);
            }
            _ => {}
        }
    }
}

impl Surface {
    /// Free variables (both sorts) in order of first appearance.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let mut note = |v: &Var, bound: &Vec<String>| {
            if !bound.contains(&v.name) && !out.contains(&v.name) {
                out.push(v.name.clone());
            }
        };
        match self {
            Surface::True | Surface::False => {}
            Surface::Letter(_, x) | Surface::Sing(x) | Surface::Letters(x, _) => note(x, bound),
            Surface::In(x, y) | Surface::Le(x, y) | Surface::Sub(x, y) | Surface::Before(x, y) => {
                note(x, bound);
                note(y, bound);
            }
            Surface::Not(f) => f.collect_free(bound, out),
            Surface::And(f, g) | Surface::Or(f, g) | Surface::Implies(f, g) => {
                f.collect_free(bound, out);
                g.collect_free(bound, out);
            }
            Surface::Quant(_, x, f) => {
                bound.push(x.name.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    /// True when no first-order construct occurs.
    pub fn is_core_shaped(&self) -> bool {
        match self {
            Surface::In(..) | Surface::Le(..) | Surface::Letter(..) | Surface::Implies(..) => false,
            Surface::Quant(q, _, f) => !q.is_first_order() && f.is_core_shaped(),
            Surface::Not(f) => f.is_core_shaped(),
            Surface::And(f, g) | Surface::Or(f, g) => f.is_core_shaped() && g.is_core_shaped(),
            _ => true,
        }
    }
}

/// Whether a variable name denotes a first-order variable.
pub fn is_first_order_name(name: &str) -> bool {
    name.chars().next().is_some_and(|c| c.is_lowercase())
}
