//! Exhaustive word corpora for differential testing.

use alloc::vec;
use alloc::vec::Vec;

use crate::automaton::Letter;
use crate::word::{FiniteWord, InfiniteWord, LassoWord, RampWord};

/// All words over `symbols` letters (no tracks) with length in `min..=max`,
/// shortest first, then lexicographic.
pub fn finite_words(symbols: usize, min: usize, max: usize) -> Vec<FiniteWord> {
    let mut out = Vec::new();
    let mut layer: Vec<FiniteWord> = vec![Vec::new()];
    for len in 0..=max {
        if len >= min {
            out.extend(layer.iter().cloned());
        }
        if len == max {
            break;
        }
        layer = layer
            .iter()
            .flat_map(|w| {
                (0..symbols).map(move |s| {
                    let mut w = w.clone();
                    w.push(Letter::plain(s as u16));
                    w
                })
            })
            .collect();
    }
    out
}

/// Every lasso `u·v^ω` with `|u| <= max_prefix` and `1 <= |v| <= max_period`.
pub fn lassos(symbols: usize, max_prefix: usize, max_period: usize) -> Vec<InfiniteWord> {
    let periods = finite_words(symbols, 1, max_period);
    let mut out = Vec::new();
    for u in finite_words(symbols, 0, max_prefix) {
        for v in &periods {
            out.push(InfiniteWord::Lasso(LassoWord {
                prefix: u.clone(),
                period: v.clone(),
            }));
        }
    }
    out
}

/// Every ramp `u·v·w·v²·w·…` whose three components have length at most
/// `max` (the pumped factor is nonempty).
pub fn ramps(symbols: usize, max: usize) -> Vec<InfiniteWord> {
    let any = finite_words(symbols, 0, max);
    let pumps = finite_words(symbols, 1, max);
    let mut out = Vec::new();
    for u in &any {
        for v in &pumps {
            for w in &any {
                out.push(InfiniteWord::Ramp(RampWord {
                    prefix: u.clone(),
                    pump: v.clone(),
                    separator: w.clone(),
                    start: 1,
                }));
            }
        }
    }
    out
}

/// Lassos with `|u| <= 2`, `|v| <= 3` followed by ramps with components of
/// length at most 2.
pub fn default_corpus(symbols: usize) -> Vec<InfiniteWord> {
    let mut out = lassos(symbols, 2, 3);
    out.extend(ramps(symbols, 2));
    out
}
