//! Boolean acceptance formulas over boundedness atoms.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::automaton::Counter;
use crate::error::{Error, Result};

/// A boolean combination of atoms `B(c)`: "the output stream of counter `c`
/// is bounded".
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Acceptance {
    True,
    False,
    Bounded(Counter),
    Not(Box<Acceptance>),
    And(Vec<Acceptance>),
    Or(Vec<Acceptance>),
}

/// Binary connective used when combining two automata.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Connective {
    And,
    Or,
    Implies,
    Iff,
}

impl Connective {
    pub fn apply(self, left: Acceptance, right: Acceptance) -> Acceptance {
        match self {
            Connective::And => Acceptance::And(alloc::vec![left, right]),
            Connective::Or => Acceptance::Or(alloc::vec![left, right]),
            Connective::Implies => Acceptance::Or(alloc::vec![left.negate(), right]),
            Connective::Iff => Acceptance::Or(alloc::vec![
                Acceptance::And(alloc::vec![left.clone(), right.clone()]),
                Acceptance::And(alloc::vec![left.negate(), right.negate()]),
            ]),
        }
    }

    pub fn eval(self, left: bool, right: bool) -> bool {
        match self {
            Connective::And => left && right,
            Connective::Or => left || right,
            Connective::Implies => !left || right,
            Connective::Iff => left == right,
        }
    }
}

impl Acceptance {
    pub fn unbounded(c: Counter) -> Self {
        Acceptance::Not(Box::new(Acceptance::Bounded(c)))
    }

    pub fn negate(self) -> Self {
        match self {
            Acceptance::True => Acceptance::False,
            Acceptance::False => Acceptance::True,
            Acceptance::Not(inner) => *inner,
            other => Acceptance::Not(Box::new(other)),
        }
    }

    pub fn and(parts: impl IntoIterator<Item = Acceptance>) -> Self {
        Acceptance::And(parts.into_iter().collect()).simplify()
    }

    pub fn or(parts: impl IntoIterator<Item = Acceptance>) -> Self {
        Acceptance::Or(parts.into_iter().collect()).simplify()
    }

    /// Distinct atoms in first-occurrence order.
    pub fn atoms(&self) -> Vec<Counter> {
        let mut out = Vec::new();
        self.collect_atoms(&mut out);
        out
    }

    fn collect_atoms(&self, out: &mut Vec<Counter>) {
        match self {
            Acceptance::True | Acceptance::False => {}
            Acceptance::Bounded(c) => {
                if !out.contains(c) {
                    out.push(*c);
                }
            }
            Acceptance::Not(inner) => inner.collect_atoms(out),
            Acceptance::And(parts) | Acceptance::Or(parts) => {
                for p in parts {
                    p.collect_atoms(out);
                }
            }
        }
    }

    pub fn mentions(&self, c: Counter) -> bool {
        match self {
            Acceptance::True | Acceptance::False => false,
            Acceptance::Bounded(d) => *d == c,
            Acceptance::Not(inner) => inner.mentions(c),
            Acceptance::And(parts) | Acceptance::Or(parts) => parts.iter().any(|p| p.mentions(c)),
        }
    }

    /// Evaluates with `bounded(c)` as the truth value of `B(c)`.
    pub fn eval(&self, bounded: &impl Fn(Counter) -> Option<bool>) -> Result<bool> {
        Ok(match self {
            Acceptance::True => true,
            Acceptance::False => false,
            Acceptance::Bounded(c) => bounded(*c).ok_or(Error::MissingAtom(*c))?,
            Acceptance::Not(inner) => !inner.eval(bounded)?,
            Acceptance::And(parts) => {
                let mut all = true;
                for p in parts {
                    all &= p.eval(bounded)?;
                }
                all
            }
            Acceptance::Or(parts) => {
                let mut any = false;
                for p in parts {
                    any |= p.eval(bounded)?;
                }
                any
            }
        })
    }

    /// Kleene three-valued evaluation; `None` atoms are unknown.
    pub fn eval3(&self, bounded: &impl Fn(Counter) -> Option<bool>) -> Option<bool> {
        match self {
            Acceptance::True => Some(true),
            Acceptance::False => Some(false),
            Acceptance::Bounded(c) => bounded(*c),
            Acceptance::Not(inner) => inner.eval3(bounded).map(|b| !b),
            Acceptance::And(parts) => {
                let mut result = Some(true);
                for p in parts {
                    match p.eval3(bounded) {
                        Some(false) => return Some(false),
                        None => result = None,
                        Some(true) => {}
                    }
                }
                result
            }
            Acceptance::Or(parts) => {
                let mut result = Some(false);
                for p in parts {
                    match p.eval3(bounded) {
                        Some(true) => return Some(true),
                        None => result = None,
                        Some(false) => {}
                    }
                }
                result
            }
        }
    }

    /// Replaces each atom by a formula.
    pub fn substitute(&self, f: &mut impl FnMut(Counter) -> Acceptance) -> Acceptance {
        match self {
            Acceptance::True => Acceptance::True,
            Acceptance::False => Acceptance::False,
            Acceptance::Bounded(c) => f(*c),
            Acceptance::Not(inner) => Acceptance::Not(Box::new(inner.substitute(f))),
            Acceptance::And(parts) => Acceptance::And(parts.iter().map(|p| p.substitute(f)).collect()),
            Acceptance::Or(parts) => Acceptance::Or(parts.iter().map(|p| p.substitute(f)).collect()),
        }
    }

    pub fn map_counters(&self, mut f: impl FnMut(Counter) -> Counter) -> Acceptance {
        self.substitute(&mut |c| Acceptance::Bounded(f(c)))
    }

    /// Fixes some atoms to constants and simplifies.
    pub fn assume(&self, known: &impl Fn(Counter) -> Option<bool>) -> Acceptance {
        self.substitute(&mut |c| match known(c) {
            Some(true) => Acceptance::True,
            Some(false) => Acceptance::False,
            None => Acceptance::Bounded(c),
        })
        .simplify()
    }

    /// Constant folding, flattening, double-negation removal, duplicate and
    /// complementary-literal detection. Children of `And`/`Or` are sorted,
    /// so equal formulas simplify to identical trees more often.
    pub fn simplify(self) -> Acceptance {
        match self {
            Acceptance::Not(inner) => match inner.simplify() {
                Acceptance::True => Acceptance::False,
                Acceptance::False => Acceptance::True,
                Acceptance::Not(x) => *x,
                other => Acceptance::Not(Box::new(other)),
            },
            Acceptance::And(parts) => simplify_nary(parts, true),
            Acceptance::Or(parts) => simplify_nary(parts, false),
            other => other,
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Acceptance::True | Acceptance::False | Acceptance::Bounded(_) => 1,
            Acceptance::Not(inner) => 1 + inner.size(),
            Acceptance::And(parts) | Acceptance::Or(parts) => {
                1 + parts.iter().map(Acceptance::size).sum::<usize>()
            }
        }
    }

    /// Renders in the textual grammar, naming counters through `name`.
    pub fn display<'a, F: Fn(Counter) -> String>(&'a self, name: F) -> DisplayAcceptance<'a, F> {
        DisplayAcceptance { formula: self, name }
    }

    /// Parses `!B(c) & (B(d) | true)`; `resolve` maps counter names.
    pub fn parse(text: &str, resolve: impl Fn(&str) -> Option<Counter>) -> Result<Acceptance> {
        let mut p = Parser {
            src: text.as_bytes(),
            pos: 0,
            resolve: &resolve,
        };
        let f = p.parse_or()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(f)
    }
}

fn simplify_nary(parts: Vec<Acceptance>, conjunction: bool) -> Acceptance {
    let (unit, zero) = if conjunction {
        (Acceptance::True, Acceptance::False)
    } else {
        (Acceptance::False, Acceptance::True)
    };
    let mut flat = Vec::with_capacity(parts.len());
    let mut stack: Vec<Acceptance> = parts;
    stack.reverse();
    while let Some(p) = stack.pop() {
        let p = p.simplify();
        match p {
            Acceptance::And(inner) if conjunction => {
                flat.extend(inner);
            }
            Acceptance::Or(inner) if !conjunction => {
                flat.extend(inner);
            }
            p if p == unit => {}
            p if p == zero => return zero,
            p => flat.push(p),
        }
    }
    flat.sort();
    flat.dedup();
    // x together with !x collapses the whole node
    for p in &flat {
        if let Acceptance::Not(inner) = p {
            if flat.binary_search(inner).is_ok() {
                return zero;
            }
        }
    }
    match flat.len() {
        0 => unit,
        1 => flat.pop().unwrap(),
        _ if conjunction => Acceptance::And(flat),
        _ => Acceptance::Or(flat),
    }
}

pub struct DisplayAcceptance<'a, F> {
    formula: &'a Acceptance,
    name: F,
}

impl<F: Fn(Counter) -> String> DisplayAcceptance<'_, F> {
    // precedence: 0 = or, 1 = and, 2 = unary
    fn write(&self, f: &mut fmt::Formatter<'_>, node: &Acceptance, context: u8) -> fmt::Result {
        match node {
            Acceptance::True => write!(f, "true"),
            Acceptance::False => write!(f, "false"),
            Acceptance::Bounded(c) => write!(f, "B({})", (self.name)(*c)),
            Acceptance::Not(inner) => {
                write!(f, "!")?;
                self.write(f, inner, 2)
            }
            Acceptance::And(parts) | Acceptance::Or(parts) => {
                let (prec, sep) = if matches!(node, Acceptance::And(_)) {
                    (1, " & ")
                } else {
                    (0, " | ")
                };
                if parts.is_empty() {
                    return write!(f, "{}", if prec == 1 { "true" } else { "false" });
                }
                let paren = context > prec;
                if paren {
                    write!(f, "(")?;
                }
                for (i, p) in parts.iter().enumerate() {
                    if i > 0 {
                        write!(f, "{sep}")?;
                    }
                    self.write(f, p, prec + 1)?;
                }
                if paren {
                    write!(f, ")")?;
                }
                Ok(())
            }
        }
    }
}

impl<F: Fn(Counter) -> String> fmt::Display for DisplayAcceptance<'_, F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, self.formula, 0)
    }
}

struct Parser<'a, R> {
    src: &'a [u8],
    pos: usize,
    resolve: &'a R,
}

pub(crate) fn is_name_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || matches!(b, b'_' | b'\'' | b'.' | b'#' | b'$' | b'@')
}

impl<R: Fn(&str) -> Option<Counter>> Parser<'_, R> {
    fn error(&self, message: &str) -> Error {
        let before = &self.src[..self.pos.min(self.src.len())];
        let line = before.iter().filter(|&&b| b == b'\n').count() + 1;
        let column = self.pos - before.iter().rposition(|&b| b == b'\n').map_or(0, |p| p + 1) + 1;
        Error::Parse {
            line,
            column,
            message: String::from(message),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn eat(&mut self, token: &str) -> bool {
        self.skip_ws();
        if self.src[self.pos..].starts_with(token.as_bytes()) {
            self.pos += token.len();
            true
        } else {
            false
        }
    }

    fn parse_or(&mut self) -> Result<Acceptance> {
        let mut parts = alloc::vec![self.parse_and()?];
        while self.eat("|") {
            parts.push(self.parse_and()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Acceptance::Or(parts)
        })
    }

    fn parse_and(&mut self) -> Result<Acceptance> {
        let mut parts = alloc::vec![self.parse_unary()?];
        while self.eat("&") {
            parts.push(self.parse_unary()?);
        }
        Ok(if parts.len() == 1 {
            parts.pop().unwrap()
        } else {
            Acceptance::And(parts)
        })
    }

    fn parse_unary(&mut self) -> Result<Acceptance> {
        if self.eat("!") {
            return Ok(Acceptance::Not(Box::new(self.parse_unary()?)));
        }
        if self.eat("(") {
            let inner = self.parse_or()?;
            if !self.eat(")") {
                return Err(self.error("expected `)`"));
            }
            return Ok(inner);
        }
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphabetic() {
            self.pos += 1;
        }
        let word = core::str::from_utf8(&self.src[start..self.pos]).unwrap_or("");
        match word {
            "true" => Ok(Acceptance::True),
            "false" => Ok(Acceptance::False),
            "B" => {
                if !self.eat("(") {
                    return Err(self.error("expected `(` after B"));
                }
                self.skip_ws();
                let name_start = self.pos;
                while self.pos < self.src.len() && is_name_byte(self.src[self.pos]) {
                    self.pos += 1;
                }
                let name = core::str::from_utf8(&self.src[name_start..self.pos]).unwrap_or("");
                if name.is_empty() {
                    return Err(self.error("expected a counter name"));
                }
                let c = (self.resolve)(name).ok_or_else(|| {
                    let mut e = self.error("");
                    if let Error::Parse { message, .. } = &mut e {
                        *message = format!("unknown counter {name}");
                    }
                    e
                })?;
                if !self.eat(")") {
                    return Err(self.error("expected `)`"));
                }
                Ok(Acceptance::Bounded(c))
            }
            _ => {
                self.pos = start;
                Err(self.error("expected `B(..)`, `true`, `false`, `!` or `(`"))
            }
        }
    }
}
