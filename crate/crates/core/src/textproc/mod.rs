//! Tokenization and stemming shared by lexicon compilation, scoring and
//! word-frequency analysis.

mod porter;

pub use porter::porter_stem;

use std::collections::HashMap;

/// A lowercase surface word together with its Porter stem.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub surface: String,
    pub stem: String,
}

impl Token {
    pub fn new(surface: impl Into<String>) -> Self {
        let surface = surface.into();
        let stem = stem_surface(&surface);
        Token { surface, stem }
    }
}

fn is_apostrophe(c: char) -> bool {
    c == '\'' || c == '\u{2019}'
}

/// Splits text into lowercase words.
///
/// A word is a maximal run of ASCII letters, possibly with internal
/// apostrophes (`don't`). Leading and trailing apostrophes are dropped.
/// Everything else, including digits, hyphens and letters that do not
/// lowercase into `a`..=`z`, separates words.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut out = Vec::new();
    let mut cur = String::new();
    for c in text.chars() {
        let mut lower = c.to_lowercase();
        let single = match (lower.next(), lower.next()) {
            (Some(l), None) => Some(l),
            _ => None,
        };
        match single {
            Some(l) if l.is_ascii_lowercase() => cur.push(l),
            _ if is_apostrophe(c) => cur.push('\''),
            _ => flush(&mut cur, &mut out),
        }
    }
    flush(&mut cur, &mut out);
    out
}

fn flush(cur: &mut String, out: &mut Vec<String>) {
    let trimmed = cur.trim_matches('\'');
    if !trimmed.is_empty() {
        out.push(trimmed.to_owned());
    }
    cur.clear();
}

/// Stem of a tokenizer surface form: apostrophes are removed before stemming.
pub fn stem_surface(surface: &str) -> String {
    if surface.contains('\'') {
        let letters: String = surface.chars().filter(|&c| c != '\'').collect();
        porter_stem(&letters)
    } else {
        porter_stem(surface)
    }
}

/// Tokenizes and stems in one pass.
pub fn tokens(text: &str) -> Vec<Token> {
    tokenize(text).into_iter().map(Token::new).collect()
}

/// Memoizing stemmer for bulk work over large corpora, where the same
/// surface forms recur constantly.
#[derive(Debug, Default)]
pub struct StemCache {
    map: HashMap<String, String>,
}

impl StemCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn stem(&mut self, surface: &str) -> &str {
        if !self.map.contains_key(surface) {
            self.map.insert(surface.to_owned(), stem_surface(surface));
        }
        &self.map[surface]
    }

    pub fn stems<S: AsRef<str>>(&mut self, surfaces: &[S]) -> Vec<String> {
        surfaces.iter().map(|s| self.stem(s.as_ref()).to_owned()).collect()
    }
}
