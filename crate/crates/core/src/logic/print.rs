//! Printing in the surface syntax; `parse(print(f))` gives back `f`.

use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

use super::{Core, Quantifier, Surface, Var};

fn level(f: &Surface) -> u8 {
    match f {
        Surface::Quant(..) => 0,
        Surface::Implies(..) => 1,
        Surface::Or(..) => 2,
        Surface::And(..) => 3,
        Surface::Not(_) => 4,
        _ => 5,
    }
}

fn write_at(f: &Surface, min: u8, out: &mut fmt::Formatter<'_>) -> fmt::Result {
    if level(f) < min {
        out.write_str("(")?;
        write_at(f, 0, out)?;
        return out.write_str(")");
    }
    match f {
        Surface::True => out.write_str("true"),
        Surface::False => out.write_str("false"),
        Surface::In(x, y) => write!(out, "{} in {}", x.name, y.name),
        Surface::Le(x, y) => write!(out, "{} <= {}", x.name, y.name),
        Surface::Letter(a, x) => write!(out, "{a}({})", x.name),
        Surface::Sing(x) => write!(out, "sing({})", x.name),
        Surface::Sub(x, y) => write!(out, "sub({}, {})", x.name, y.name),
        Surface::Before(x, y) => write!(out, "before({}, {})", x.name, y.name),
        Surface::Letters(x, a) => write!(out, "letters({}, {a})", x.name),
        Surface::Not(g) => {
            out.write_str("!")?;
            write_at(g, 4, out)
        }
        Surface::And(g, h) => {
            write_at(g, 3, out)?;
            out.write_str(" & ")?;
            write_at(h, 4, out)
        }
        Surface::Or(g, h) => {
            write_at(g, 2, out)?;
            out.write_str(" | ")?;
            write_at(h, 3, out)
        }
        Surface::Implies(g, h) => {
            write_at(g, 2, out)?;
            out.write_str(" -> ")?;
            write_at(h, 1, out)
        }
        Surface::Quant(q, x, g) => {
            let kw = match q {
                Quantifier::Exists => "ex",
                Quantifier::Forall => "all",
                Quantifier::ExistsFin => "exf",
                Quantifier::Unbounding => "U",
            };
            write!(out, "{kw} {}. ", x.name)?;
            write_at(g, 0, out)
        }
    }
}

impl fmt::Display for Surface {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_at(self, 0, out)
    }
}

impl Core {
    /// The same formula in surface syntax.
    pub fn to_surface(&self) -> Surface {
        let v = |x: &String| Var::new(x.clone());
        let b = |f: &Core| Box::new(f.to_surface());
        match self {
            Core::True => Surface::True,
            Core::False => Surface::False,
            Core::Sing(x) => Surface::Sing(v(x)),
            Core::Sub(x, y) => Surface::Sub(v(x), v(y)),
            Core::Before(x, y) => Surface::Before(v(x), v(y)),
            Core::LetterAll(x, a) => Surface::Letters(v(x), *a),
            Core::Not(f) => Surface::Not(b(f)),
            Core::And(f, g) => Surface::And(b(f), b(g)),
            Core::Or(f, g) => Surface::Or(b(f), b(g)),
            Core::ExistsFin(x, f) => Surface::Quant(Quantifier::ExistsFin, v(x), b(f)),
            Core::Unbounding(x, f) => Surface::Quant(Quantifier::Unbounding, v(x), b(f)),
        }
    }
}

impl fmt::Display for Core {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(out, "{}", self.to_surface())
    }
}
