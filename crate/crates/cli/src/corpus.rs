//! Corpus files: one word spec per line; blank lines and lines starting
//! with `#` are ignored.

use std::path::Path;

use maxreg_core::word::parse_word_spec;
use maxreg_core::InfiniteWord;

use crate::{read_file, CliError, Result};

/// The built-in corpus: all lassos with `|u| <= 2`, `|v| <= 3` and all ramps
/// with components of length at most 2, over {a, b}.
pub const DEFAULT_CORPUS: &str = include_str!("../corpus/default.txt");

pub fn parse_corpus(text: &str, alphabet: &[char], tracks: usize) -> Result<Vec<(String, InfiniteWord)>> {
    let mut out = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let word = parse_word_spec(line, alphabet, tracks)
            .map_err(|e| CliError::Format(format!("corpus line {}: {e}", i + 1)))?;
        out.push((line.to_string(), word));
    }
    Ok(out)
}

pub fn load_corpus(path: &Path, alphabet: &[char], tracks: usize) -> Result<Vec<(String, InfiniteWord)>> {
    parse_corpus(&read_file(path)?, alphabet, tracks)
}

/// Renders words as a corpus file.
pub fn render_corpus(words: &[InfiniteWord], alphabet: &[char], tracks: usize) -> String {
    let mut out = String::new();
    for w in words {
        out.push_str(&w.to_spec(alphabet, tracks));
        out.push('\n');
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use maxreg_core::corpus::default_corpus;

    #[test]
    fn shipped_corpus_is_the_generated_one() {
        let generated = render_corpus(&default_corpus(2), &['a', 'b'], 0);
        let shipped: String = DEFAULT_CORPUS
            .lines()
            .filter(|l| !l.starts_with('#'))
            .map(|l| format!("{l}\n"))
            .collect();
        assert_eq!(shipped, generated);
    }

    #[test]
    fn comments_and_errors() {
        let words = parse_corpus("# two words\nlasso::ab\n\nramp::a:b\n", &['a', 'b'], 0).unwrap();
        assert_eq!(words.len(), 2);
        let err = parse_corpus("lasso::ab\nlasso:c:a\n", &['a', 'b'], 0).unwrap_err();
        assert!(err.to_string().starts_with("corpus line 2:"), "{err}");
    }
}
