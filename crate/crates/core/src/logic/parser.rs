//! Recursive-descent parser for the surface syntax.
//!
//! ```text
//! formula := disj ('->' formula)?
//! disj    := conj ('|' conj)*
//! conj    := unary ('&' unary)*
//! unary   := '!' unary | quant | atom | '(' formula ')'
//! quant   := ('ex' | 'all' | 'exf' | 'U') var '.' formula
//! atom    := 'true' | 'false' | x 'in' X | x '<=' y | a '(' x ')'
//!          | 'sing' '(' X ')' | 'sub' '(' X ',' Y ')' | 'before' '(' X ',' Y ')'
//!          | 'letters' '(' X ',' a ')'
//! ```
//!
//! A quantifier's body extends as far right as possible. Bound variables
//! are renamed apart (`x`, `x_2`, …) so every binder is unique and no
//! binder shares a name with a free variable.

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use hashbrown::HashSet;

use super::{is_first_order_name, Pos, Quantifier, Surface, Var};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Dot,
    LParen,
    RParen,
    Comma,
    Bang,
    Amp,
    Bar,
    Arrow,
    Le,
    End,
}

fn describe(t: &Tok) -> String {
    match t {
        Tok::Ident(s) => format!("`{s}`"),
        Tok::Dot => "`.`".to_string(),
        Tok::LParen => "`(`".to_string(),
        Tok::RParen => "`)`".to_string(),
        Tok::Comma => "`,`".to_string(),
        Tok::Bang => "`!`".to_string(),
        Tok::Amp => "`&`".to_string(),
        Tok::Bar => "`|`".to_string(),
        Tok::Arrow => "`->`".to_string(),
        Tok::Le => "`<=`".to_string(),
        Tok::End => "end of input".to_string(),
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, Pos)>> {
    let mut out = Vec::new();
    let mut line = 1;
    let mut column = 1;
    let mut chars = text.chars().peekable();
    while let Some(&c) = chars.peek() {
        let at = Pos { line, column };
        let mut advance = |chars: &mut core::iter::Peekable<core::str::Chars<'_>>| {
            let c = chars.next();
            if c == Some('\n') {
                line += 1;
                column = 1;
            } else {
                column += 1;
            }
        };
        if c.is_whitespace() {
            advance(&mut chars);
            continue;
        }
        if c == '#' {
            // comment to end of line
            while chars.peek().is_some_and(|&c| c != '\n') {
                advance(&mut chars);
            }
            continue;
        }
        if is_ident_char(c) {
            let mut name = String::new();
            while let Some(&c) = chars.peek() {
                if !is_ident_char(c) {
                    break;
                }
                name.push(c);
                advance(&mut chars);
            }
            out.push((Tok::Ident(name), at));
            continue;
        }
        advance(&mut chars);
        let tok = match c {
            '.' => Tok::Dot,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ',' => Tok::Comma,
            '!' => Tok::Bang,
            '&' => Tok::Amp,
            '|' => Tok::Bar,
            '-' if chars.peek() == Some(&'>') => {
                advance(&mut chars);
                Tok::Arrow
            }
            '<' if chars.peek() == Some(&'=') => {
                advance(&mut chars);
                Tok::Le
            }
            other => {
                return Err(Error::Parse {
                    line: at.line,
                    column: at.column,
                    message: format!("unexpected character `{other}`"),
                })
            }
        };
        out.push((tok, at));
    }
    out.push((Tok::End, Pos { line, column }));
    Ok(out)
}

const KEYWORDS: [&str; 11] = [
    "ex", "all", "exf", "U", "in", "true", "false", "sing", "sub", "before", "letters",
];

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    /// First-order variables in scope (source names).
    scope: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> (Tok, Pos) {
        let t = self.toks[self.at].clone();
        if self.at + 1 < self.toks.len() {
            self.at += 1;
        }
        t
    }

    fn error<T>(&self, message: String) -> Result<T> {
        let p = self.pos();
        Err(Error::Parse {
            line: p.line,
            column: p.column,
            message,
        })
    }

    fn expect(&mut self, t: Tok) -> Result<()> {
        if *self.peek() == t {
            self.bump();
            Ok(())
        } else {
            self.error(format!("expected {}, found {}", describe(&t), describe(self.peek())))
        }
    }

    fn ident(&mut self) -> Result<(String, Pos)> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                let p = self.pos();
                self.bump();
                Ok((s, p))
            }
            other => self.error(format!("expected a name, found {}", describe(&other))),
        }
    }

    fn var(&mut self, first_order: bool) -> Result<Var> {
        let (name, at) = self.ident()?;
        if KEYWORDS.contains(&name.as_str()) {
            return Err(Error::Parse {
                line: at.line,
                column: at.column,
                message: format!("`{name}` is a keyword"),
            });
        }
        if is_first_order_name(&name) != first_order {
            let want = if first_order {
                "a first-order (lowercase) variable"
            } else {
                "a set (uppercase) variable"
            };
            return Err(Error::Parse {
                line: at.line,
                column: at.column,
                message: format!("expected {want}, found `{name}`"),
            });
        }
        if first_order && !self.scope.contains(&name) {
            return Err(Error::UnboundVariable {
                name,
                line: at.line,
                column: at.column,
            });
        }
        Ok(Var { name, at })
    }

    fn symbol(&mut self) -> Result<char> {
        let (name, at) = self.ident()?;
        let mut chars = name.chars();
        match (chars.next(), chars.next()) {
            (Some(c), None) => Ok(c),
            _ => Err(Error::Parse {
                line: at.line,
                column: at.column,
                message: format!("letter symbols are single characters, found `{name}`"),
            }),
        }
    }

    fn formula(&mut self) -> Result<Surface> {
        let left = self.disj()?;
        if *self.peek() == Tok::Arrow {
            self.bump();
            let right = self.formula()?;
            return Ok(Surface::Implies(Box::new(left), Box::new(right)));
        }
        Ok(left)
    }

    fn disj(&mut self) -> Result<Surface> {
        let mut f = self.conj()?;
        while *self.peek() == Tok::Bar {
            self.bump();
            let g = self.conj()?;
            f = Surface::Or(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn conj(&mut self) -> Result<Surface> {
        let mut f = self.unary()?;
        while *self.peek() == Tok::Amp {
            self.bump();
            let g = self.unary()?;
            f = Surface::And(Box::new(f), Box::new(g));
        }
        Ok(f)
    }

    fn unary(&mut self) -> Result<Surface> {
        match self.peek().clone() {
            Tok::Bang => {
                self.bump();
                Ok(Surface::Not(Box::new(self.unary()?)))
            }
            Tok::LParen => {
                self.bump();
                let f = self.formula()?;
                self.expect(Tok::RParen)?;
                Ok(f)
            }
            Tok::Ident(word) => self.word(&word),
            other => self.error(format!("expected a formula, found {}", describe(&other))),
        }
    }

    fn word(&mut self, word: &str) -> Result<Surface> {
        let quant = match word {
            "ex" => Some(Quantifier::Exists),
            "all" => Some(Quantifier::Forall),
            "exf" => Some(Quantifier::ExistsFin),
            "U" => Some(Quantifier::Unbounding),
            _ => None,
        };
        if let Some(q) = quant {
            self.bump();
            let (name, at) = self.ident()?;
            if KEYWORDS.contains(&name.as_str()) || is_first_order_name(&name) != q.is_first_order() {
                return Err(Error::Parse {
                    line: at.line,
                    column: at.column,
                    message: format!("`{name}` cannot be bound by this quantifier"),
                });
            }
            self.expect(Tok::Dot)?;
            if q.is_first_order() {
                self.scope.push(name.clone());
            }
            let body = self.formula();
            if q.is_first_order() {
                self.scope.pop();
            }
            return Ok(Surface::Quant(q, Var { name, at }, Box::new(body?)));
        }
        match word {
            "true" => {
                self.bump();
                Ok(Surface::True)
            }
            "false" => {
                self.bump();
                Ok(Surface::False)
            }
            "sing" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let x = self.var(false)?;
                self.expect(Tok::RParen)?;
                Ok(Surface::Sing(x))
            }
            "sub" | "before" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let x = self.var(false)?;
                self.expect(Tok::Comma)?;
                let y = self.var(false)?;
                self.expect(Tok::RParen)?;
                Ok(if word == "sub" {
                    Surface::Sub(x, y)
                } else {
                    Surface::Before(x, y)
                })
            }
            "letters" => {
                self.bump();
                self.expect(Tok::LParen)?;
                let x = self.var(false)?;
                self.expect(Tok::Comma)?;
                let a = self.symbol()?;
                self.expect(Tok::RParen)?;
                Ok(Surface::Letters(x, a))
            }
            _ => {
                // letter predicate `a(x)`, or an atom starting with a variable
                if self.toks.get(self.at + 1).map(|t| &t.0) == Some(&Tok::LParen) {
                    let a = self.symbol()?;
                    self.expect(Tok::LParen)?;
                    let x = self.var(true)?;
                    self.expect(Tok::RParen)?;
                    return Ok(Surface::Letter(a, x));
                }
                let x = self.var(true)?;
                match self.peek().clone() {
                    Tok::Ident(k) if k == "in" => {
                        self.bump();
                        let y = self.var(false)?;
                        Ok(Surface::In(x, y))
                    }
                    Tok::Le => {
                        self.bump();
                        let y = self.var(true)?;
                        Ok(Surface::Le(x, y))
                    }
                    other => self.error(format!("expected `in` or `<=`, found {}", describe(&other))),
                }
            }
        }
    }
}

/// Parses a formula and renames bound variables apart.
pub fn parse(text: &str) -> Result<Surface> {
    let mut p = Parser {
        toks: lex(text)?,
        at: 0,
        scope: Vec::new(),
    };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.error(format!("unexpected {}", describe(p.peek())));
    }
    let mut used: HashSet<String> = f.free_vars().into_iter().collect();
    Ok(rename(&f, &mut used, &mut Vec::new()))
}

fn fresh(name: &str, used: &mut HashSet<String>) -> String {
    if used.insert(name.to_string()) {
        return name.to_string();
    }
    let mut k = 2;
    loop {
        let candidate = format!("{name}_{k}");
        if used.insert(candidate.clone()) {
            return candidate;
        }
        k += 1;
    }
}

fn rename(f: &Surface, used: &mut HashSet<String>, scope: &mut Vec<(String, String)>) -> Surface {
    let v = |x: &Var, scope: &Vec<(String, String)>| {
        let name = scope
            .iter()
            .rev()
            .find(|(from, _)| *from == x.name)
            .map_or_else(|| x.name.clone(), |(_, to)| to.clone());
        Var { name, at: x.at }
    };
    let b = |g: &Surface, used: &mut HashSet<String>, scope: &mut Vec<(String, String)>| {
        Box::new(rename(g, used, scope))
    };
    match f {
        Surface::True => Surface::True,
        Surface::False => Surface::False,
        Surface::In(x, y) => Surface::In(v(x, scope), v(y, scope)),
        Surface::Le(x, y) => Surface::Le(v(x, scope), v(y, scope)),
        Surface::Letter(a, x) => Surface::Letter(*a, v(x, scope)),
        Surface::Sing(x) => Surface::Sing(v(x, scope)),
        Surface::Sub(x, y) => Surface::Sub(v(x, scope), v(y, scope)),
        Surface::Before(x, y) => Surface::Before(v(x, scope), v(y, scope)),
        Surface::Letters(x, a) => Surface::Letters(v(x, scope), *a),
        Surface::Not(g) => Surface::Not(b(g, used, scope)),
        Surface::And(g, h) => {
            let g = b(g, used, scope);
            Surface::And(g, b(h, used, scope))
        }
        Surface::Or(g, h) => {
            let g = b(g, used, scope);
            Surface::Or(g, b(h, used, scope))
        }
        Surface::Implies(g, h) => {
            let g = b(g, used, scope);
            Surface::Implies(g, b(h, used, scope))
        }
        Surface::Quant(q, x, g) => {
            let name = fresh(&x.name, used);
            scope.push((x.name.clone(), name.clone()));
            let body = b(g, used, scope);
            scope.pop();
            Surface::Quant(*q, Var { name, at: x.at }, body)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_the_gap_formula() {
        let f = parse("U X. all x. all y. all z. (x<=y & y<=z & x in X & z in X) -> (a(y) & y in X)").unwrap();
        let Surface::Quant(Quantifier::Unbounding, x, body) = &f else { panic!("{f:?}") };
        assert_eq!(x.name, "X");
        let Surface::Quant(Quantifier::Forall, _, _) = **body else { panic!() };
        assert!(f.free_vars().is_empty());
    }

    #[test]
    fn simple_forms() {
        assert_eq!(
            parse("exf X. sing(X)").unwrap(),
            Surface::Quant(
                Quantifier::ExistsFin,
                Var::new("X"),
                Box::new(Surface::Sing(Var::new("X")))
            )
        );
        assert_eq!(parse("sub(X, Y)").unwrap().free_vars(), ["X", "Y"]);
    }

    #[test]
    fn unbound_first_order_variable() {
        assert_eq!(
            parse("x in X"),
            Err(Error::UnboundVariable {
                name: "x".to_string(),
                line: 1,
                column: 1
            })
        );
    }

    #[test]
    fn syntax_errors_have_locations() {
        match parse("exf X.\n  sing(X) &") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 12)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("ex X. true"), Err(Error::Parse { .. })));
        assert!(matches!(parse("sing(X) sing(Y)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("ab(x)"), Err(Error::Parse { .. })));
    }

    #[test]
    fn binders_are_renamed_apart() {
        let f = parse("(exf X. sing(X)) & (exf X. sing(X)) & sub(X, Y)").unwrap();
        let mut binders = Vec::new();
        fn walk(f: &Surface, out: &mut Vec<String>) {
            match f {
                Surface::Quant(_, x, g) => {
                    out.push(x.name.clone());
                    walk(g, out)
                }
                Surface::And(g, h) => {
                    walk(g, out);
                    walk(h, out)
                }
                _ => {}
            }
        }
        walk(&f, &mut binders);
        assert_eq!(binders, ["X_2", "X_3"]);
        assert_eq!(f.free_vars(), ["X", "Y"]);
    }

    #[test]
    fn precedence() {
        let f = parse("true | false & !true -> false").unwrap();
        let expected = Surface::Implies(
            Box::new(Surface::Or(
                Box::new(Surface::True),
                Box::new(Surface::And(
                    Box::new(Surface::False),
                    Box::new(Surface::Not(Box::new(Surface::True))),
                )),
            )),
            Box::new(Surface::False),
        );
        assert_eq!(f, expected);
    }
}
