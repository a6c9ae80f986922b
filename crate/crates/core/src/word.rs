//! Finitely presented infinite words: lassos `u·v^ω` and ramps
//! `u·v^k·w·v^(k+1)·w·…`.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::automaton::Letter;
use crate::error::{Error, Result};

pub type FiniteWord = Vec<Letter>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LassoWord {
    pub prefix: FiniteWord,
    pub period: FiniteWord,
}

/// `prefix · pump^start · separator · pump^(start+1) · separator · …`.
///
/// The plain family used for witnesses has `start == 1`; other starting
/// exponents only arise when a prefix gets folded in by [`annotate`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RampWord {
    pub prefix: FiniteWord,
    pub pump: FiniteWord,
    pub separator: FiniteWord,
    pub start: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum InfiniteWord {
    Lasso(LassoWord),
    Ramp(RampWord),
}

impl LassoWord {
    pub fn new(prefix: FiniteWord, period: FiniteWord) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::WordSpec(String::from("empty period")));
        }
        Ok(LassoWord { prefix, period })
    }

    pub fn letter_at(&self, n: usize) -> Letter {
        if n < self.prefix.len() {
            self.prefix[n]
        } else {
            self.period[(n - self.prefix.len()) % self.period.len()]
        }
    }
}

impl RampWord {
    pub fn new(prefix: FiniteWord, pump: FiniteWord, separator: FiniteWord) -> Result<Self> {
        if pump.is_empty() {
            return Err(Error::WordSpec(String::from("empty pumped factor")));
        }
        Ok(RampWord {
            prefix,
            pump,
            separator,
            start: 1,
        })
    }

    /// Length of the block `pump^k · separator` with exponent `k`.
    pub fn block_len(&self, exponent: usize) -> usize {
        exponent * self.pump.len() + self.separator.len()
    }

    /// Index (0-based) of the block containing position `n`; positions in the
    /// prefix report block 0 as well.
    pub fn block_index(&self, n: usize) -> usize {
        if n < self.prefix.len() {
            return 0;
        }
        let mut rest = n - self.prefix.len();
        let mut k = 0;
        loop {
            let len = self.block_len(self.start + k);
            if rest < len {
                return k;
            }
            rest -= len;
            k += 1;
        }
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        let blocks = (self.start..).flat_map(move |k| {
            core::iter::repeat_n(self.pump.iter(), k)
                .flatten()
                .chain(self.separator.iter())
                .copied()
        });
        self.prefix.iter().copied().chain(blocks)
    }
}

impl InfiniteWord {
    pub fn letters(&self) -> alloc::boxed::Box<dyn Iterator<Item = Letter> + '_> {
        match self {
            InfiniteWord::Lasso(l) => alloc::boxed::Box::new(
                l.prefix
                    .iter()
                    .copied()
                    .chain(l.period.iter().copied().cycle()),
            ),
            InfiniteWord::Ramp(r) => alloc::boxed::Box::new(r.letters()),
        }
    }

    /// The first `n` letters.
    pub fn prefix(&self, n: usize) -> FiniteWord {
        self.letters().take(n).collect()
    }

    pub fn is_lasso(&self) -> bool {
        matches!(self, InfiniteWord::Lasso(_))
    }

    /// Renders as a word spec (`lasso:u:v` or `ramp:u:v:w`).
    pub fn to_spec(&self, alphabet: &[char], tracks: usize) -> String {
        let w = |word: &FiniteWord| render_word(word, alphabet, tracks);
        match self {
            InfiniteWord::Lasso(l) => format!("lasso:{}:{}", w(&l.prefix), w(&l.period)),
            InfiniteWord::Ramp(r) if r.start == 1 => {
                format!("ramp:{}:{}:{}", w(&r.prefix), w(&r.pump), w(&r.separator))
            }
            InfiniteWord::Ramp(r) => format!(
                "ramp:{}:{}:{}:{}",
                w(&r.prefix),
                w(&r.pump),
                w(&r.separator),
                r.start
            ),
        }
    }

    /// Maximal bit width used by any letter (upper bound on the track count).
    pub fn uses_tracks_below(&self, tracks: usize) -> bool {
        let ok = |word: &FiniteWord| word.iter().all(|l| tracks >= 32 || l.bits >> tracks == 0);
        match self {
            InfiniteWord::Lasso(l) => ok(&l.prefix) && ok(&l.period),
            InfiniteWord::Ramp(r) => ok(&r.prefix) && ok(&r.pump) && ok(&r.separator),
        }
    }

    pub fn symbols_below(&self, alphabet_len: usize) -> bool {
        let ok = |word: &FiniteWord| word.iter().all(|l| (l.symbol as usize) < alphabet_len);
        match self {
            InfiniteWord::Lasso(l) => ok(&l.prefix) && ok(&l.period),
            InfiniteWord::Ramp(r) => ok(&r.prefix) && ok(&r.pump) && ok(&r.separator),
        }
    }
}

fn render_word(word: &[Letter], alphabet: &[char], tracks: usize) -> String {
    let mut s = String::new();
    for l in word {
        s.push(alphabet.get(l.symbol as usize).copied().unwrap_or('?'));
        if tracks > 0 {
            s.push('[');
            for t in 0..tracks {
                s.push(if l.bit(t) { '1' } else { '0' });
            }
            s.push(']');
        }
    }
    s
}

/// Adds one annotation track (index `tracks`, the new highest track) whose
/// bit is 1 exactly at the positions in `positions`.
///
/// Lassos and ramps keep their shape: the prefix is extended past the last
/// marked position, aligned to a period or block boundary, so the periodic
/// tail stays literally periodic with all-zero annotation.
pub fn annotate(word: &InfiniteWord, tracks: usize, positions: &[usize]) -> InfiniteWord {
    let needed = positions.iter().map(|&p| p + 1).max().unwrap_or(0);
    let mark = |prefix: &mut FiniteWord| {
        for &p in positions {
            prefix[p] = prefix[p].with_bit(tracks, true);
        }
    };
    match word {
        InfiniteWord::Lasso(l) => {
            let mut len = l.prefix.len();
            if needed > len {
                let periods = (needed - len).div_ceil(l.period.len());
                len += periods * l.period.len();
            }
            let mut prefix = word.prefix(len);
            mark(&mut prefix);
            InfiniteWord::Lasso(LassoWord {
                prefix,
                period: l.period.clone(),
            })
        }
        InfiniteWord::Ramp(r) => {
            let mut len = r.prefix.len();
            let mut start = r.start;
            while len < needed {
                len += r.block_len(start);
                start += 1;
            }
            let mut prefix = word.prefix(len);
            mark(&mut prefix);
            InfiniteWord::Ramp(RampWord {
                prefix,
                pump: r.pump.clone(),
                separator: r.separator.clone(),
                start,
            })
        }
    }
}

/// Marks positions of a finite word on a new track `tracks`.
pub fn annotate_finite(word: &[Letter], tracks: usize, positions: &[usize]) -> FiniteWord {
    word.iter()
        .enumerate()
        .map(|(i, l)| l.with_bit(tracks, positions.contains(&i)))
        .collect()
}

/// Parses a finite word: single-character symbols, each optionally followed
/// by `[bits]` when the alphabet has annotation tracks.
pub fn parse_finite_word(text: &str, alphabet: &[char], tracks: usize) -> Result<FiniteWord> {
    let mut out = Vec::new();
    let mut chars = text.chars().peekable();
    while let Some(ch) = chars.next() {
        let symbol = alphabet
            .iter()
            .position(|&a| a == ch)
            .ok_or_else(|| Error::WordSpec(format!("unknown symbol `{ch}`")))?;
        let mut bits = 0u32;
        if chars.peek() == Some(&'[') {
            chars.next();
            let mut width = 0;
            loop {
                match chars.next() {
                    Some(']') => break,
                    Some('0') => width += 1,
                    Some('1') => {
                        bits |= 1 << width;
                        width += 1;
                    }
                    _ => return Err(Error::WordSpec(String::from("malformed bit annotation"))),
                }
            }
            if width != tracks {
                return Err(Error::TrackMismatch {
                    expected: tracks,
                    found: width,
                });
            }
        } else if tracks > 0 {
            return Err(Error::TrackMismatch {
                expected: tracks,
                found: 0,
            });
        }
        out.push(Letter::new(symbol as u16, bits));
    }
    Ok(out)
}

/// Parses `lasso:<u>:<v>` or `ramp:<u>:<v>:<w>` (optionally `:<start>`).
pub fn parse_word_spec(text: &str, alphabet: &[char], tracks: usize) -> Result<InfiniteWord> {
    let text = text.trim();
    let mut fields = text.split(':');
    let kind = fields.next().unwrap_or("");
    let parts: Vec<&str> = fields.collect();
    let word = |s: &str| parse_finite_word(s, alphabet, tracks);
    match (kind, parts.as_slice()) {
        ("lasso", [u, v]) => {
            let period = word(v)?;
            if period.is_empty() {
                return Err(Error::WordSpec(String::from("empty period")));
            }
            Ok(InfiniteWord::Lasso(LassoWord {
                prefix: word(u)?,
                period,
            }))
        }
        ("ramp", [u, v, w, rest @ ..]) if rest.len() <= 1 => {
            let pump = word(v)?;
            if pump.is_empty() {
                return Err(Error::WordSpec(String::from("empty pumped factor")));
            }
            let start = match rest {
                [] => 1,
                [k] => k
                    .parse::<usize>()
                    .ok()
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| Error::WordSpec(format!("bad starting exponent `{k}`")))?,
                _ => unreachable!(),
            };
            Ok(InfiniteWord::Ramp(RampWord {
                prefix: word(u)?,
                pump,
                separator: word(w)?,
                start,
            }))
        }
        _ => Err(Error::WordSpec(format!("malformed word spec `{text}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    const AB: [char; 3] = ['a', 'b', 'c'];

    fn spec(s: &str) -> InfiniteWord {
        parse_word_spec(s, &AB, 0).unwrap()
    }

    fn text(w: &[Letter]) -> String {
        w.iter().map(|l| AB[l.symbol as usize]).collect()
    }

    #[test]
    fn prefixes() {
        assert_eq!(text(&spec("lasso:ab:c").prefix(5)), "abccc");
        assert_eq!(text(&spec("ramp::a:b").prefix(6)), "abaaba");
        assert_eq!(text(&spec("ramp::a:b").prefix(12)), "abaabaaabaaa");
        assert!(spec("lasso:ab:c").prefix(0).is_empty());
    }

    #[test]
    fn spec_errors() {
        assert!(matches!(parse_word_spec("lasso:ab:", &AB, 0), Err(Error::WordSpec(_))));
        assert!(matches!(parse_word_spec("lasso::ax", &AB, 0), Err(Error::WordSpec(_))));
        assert!(matches!(parse_word_spec("ramp:a:", &AB, 0), Err(Error::WordSpec(_))));
        assert!(matches!(parse_word_spec("cycle:a", &AB, 0), Err(Error::WordSpec(_))));
    }

    #[test]
    fn parse_lasso_and_ramp() {
        let l = spec("lasso::ab");
        assert_eq!(
            l,
            InfiniteWord::Lasso(LassoWord {
                prefix: vec![],
                period: vec![Letter::plain(0), Letter::plain(1)]
            })
        );
        assert_eq!(l.to_spec(&AB, 0), "lasso::ab");
        assert_eq!(spec("ramp::a:b").to_spec(&AB, 0), "ramp::a:b");
    }

    #[test]
    fn annotate_lasso_folds_prefix() {
        let l = spec("lasso::ab");
        let annotated = annotate(&l, 0, &[2, 3]);
        let a = |bit| Letter::new(0, bit);
        let b = |bit| Letter::new(1, bit);
        assert_eq!(
            annotated,
            InfiniteWord::Lasso(LassoWord {
                prefix: vec![a(0), b(0), a(1), b(1)],
                period: vec![a(0), b(0)],
            })
        );
        let first = annotate(&spec("lasso::a"), 0, &[0]);
        assert_eq!(first.prefix(3), vec![a(1), a(0), a(0)]);
    }

    #[test]
    fn annotate_empty_set_sets_no_bits() {
        let w = annotate_finite(&[Letter::plain(0), Letter::plain(1)], 0, &[]);
        assert!(w.iter().all(|l| l.bits == 0));
    }

    #[test]
    fn annotate_ramp_keeps_the_block_structure() {
        let r = spec("ramp:c:a:b");
        let annotated = annotate(&r, 0, &[4]);
        let plain: Vec<Letter> = annotated.prefix(40).iter().map(|l| l.without_track(0)).collect();
        assert_eq!(plain, r.prefix(40));
        let marks: Vec<usize> = annotated
            .prefix(40)
            .iter()
            .enumerate()
            .filter(|(_, l)| l.bit(0))
            .map(|(i, _)| i)
            .collect();
        assert_eq!(marks, vec![4]);
    }

    #[test]
    fn annotated_specs_round_trip() {
        let w = parse_word_spec("lasso:a[1]:b[0]a[0]", &AB, 1).unwrap();
        assert_eq!(w.to_spec(&AB, 1), "lasso:a[1]:b[0]a[0]");
        assert!(matches!(
            parse_word_spec("lasso::a", &AB, 1),
            Err(Error::TrackMismatch { expected: 1, found: 0 })
        ));
    }

    #[test]
    fn block_index_tracks_ramp_blocks() {
        let InfiniteWord::Ramp(r) = spec("ramp::a:b") else { unreachable!() };
        // a b | a a b | a a a b
        assert_eq!(r.block_index(0), 0);
        assert_eq!(r.block_index(1), 0);
        assert_eq!(r.block_index(2), 1);
        assert_eq!(r.block_index(4), 1);
        assert_eq!(r.block_index(5), 2);
    }
}
