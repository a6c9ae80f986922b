//! Reference semantics on finite words, by exhaustive enumeration.
//!
//! Positions range over `0..n` and sets over subsets of `0..n` (`n ≤ 16`).
//! On a finite word the unbounding quantifier cannot be told apart from
//! weak existential quantification, so `U X` is evaluated like `exf X`.

use alloc::string::String;
use alloc::vec::Vec;

use super::{is_first_order_name, Core, Quantifier, Surface};

/// Variable assignment: set variables map to bitmasks, position variables
/// to singleton bitmasks.
pub type Assignment = Vec<(String, u32)>;

fn lookup(env: &Assignment, name: &str) -> u32 {
    env.iter()
        .rev()
        .find(|(n, _)| n == name)
        .map(|(_, v)| *v)
        .unwrap_or(0)
}

fn before(x: u32, y: u32) -> bool {
    if x == 0 || y == 0 {
        return true;
    }
    let max_x = 31 - x.leading_zeros();
    let min_y = y.trailing_zeros();
    max_x < min_y
}

fn letters(word: &[char], x: u32, a: char) -> bool {
    word.iter()
        .enumerate()
        .all(|(i, &c)| x >> i & 1 == 0 || c == a)
}

fn universe(word: &[char]) -> u32 {
    assert!(word.len() <= 16, "finite evaluation is limited to 16 positions");
    (1u32 << word.len()) - 1
}

pub fn eval_core(f: &Core, word: &[char], env: &mut Assignment) -> bool {
    match f {
        Core::True => true,
        Core::False => false,
        Core::Sing(x) => lookup(env, x).count_ones() == 1,
        Core::Sub(x, y) => lookup(env, x) & !lookup(env, y) == 0,
        Core::Before(x, y) => before(lookup(env, x), lookup(env, y)),
        Core::LetterAll(x, a) => letters(word, lookup(env, x), *a),
        Core::Not(g) => !eval_core(g, word, env),
        Core::And(g, h) => eval_core(g, word, env) && eval_core(h, word, env),
        Core::Or(g, h) => eval_core(g, word, env) || eval_core(h, word, env),
        Core::ExistsFin(x, g) | Core::Unbounding(x, g) => (0..=universe(word)).any(|set| {
            env.push((x.clone(), set));
            let r = eval_core(g, word, env);
            env.pop();
            r
        }),
    }
}

pub fn eval_surface(f: &Surface, word: &[char], env: &mut Assignment) -> bool {
    let get = |env: &Assignment, v: &super::Var| lookup(env, &v.name);
    match f {
        Surface::True => true,
        Surface::False => false,
        Surface::In(x, y) => get(env, x) & get(env, y) != 0,
        Surface::Le(x, y) => get(env, x).trailing_zeros() <= get(env, y).trailing_zeros(),
        Surface::Letter(a, x) => word[get(env, x).trailing_zeros() as usize] == *a,
        Surface::Sing(x) => get(env, x).count_ones() == 1,
        Surface::Sub(x, y) => get(env, x) & !get(env, y) == 0,
        Surface::Before(x, y) => before(get(env, x), get(env, y)),
        Surface::Letters(x, a) => letters(word, get(env, x), *a),
        Surface::Not(g) => !eval_surface(g, word, env),
        Surface::And(g, h) => eval_surface(g, word, env) && eval_surface(h, word, env),
        Surface::Or(g, h) => eval_surface(g, word, env) || eval_surface(h, word, env),
        Surface::Implies(g, h) => !eval_surface(g, word, env) || eval_surface(h, word, env),
        Surface::Quant(q, x, g) => {
            debug_assert_eq!(q.is_first_order(), is_first_order_name(&x.name));
            let body = |value: u32, env: &mut Assignment| {
                env.push((x.name.clone(), value));
                let r = eval_surface(g, word, env);
                env.pop();
                r
            };
            match q {
                Quantifier::Exists => (0..word.len()).any(|i| body(1 << i, env)),
                Quantifier::Forall => (0..word.len()).all(|i| body(1 << i, env)),
                Quantifier::ExistsFin | Quantifier::Unbounding => {
                    (0..=universe(word)).any(|set| body(set, env))
                }
            }
        }
    }
}
