use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A letter of a plain alphabet, or a pair `(letter, residue)` of an
/// enriched alphabet `A x Z_d`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol {
    letter: char,
    residue: Option<u32>,
}

impl Symbol {
    pub fn plain(letter: char) -> Self {
        Symbol {
            letter,
            residue: None,
        }
    }

    pub fn enriched(letter: char, residue: u32) -> Self {
        Symbol {
            letter,
            residue: Some(residue),
        }
    }

    pub fn letter(self) -> char {
        self.letter
    }

    pub fn residue(self) -> Option<u32> {
        self.residue
    }

    pub fn is_enriched(self) -> bool {
        self.residue.is_some()
    }

    /// The projection `(a, i) -> a`.
    pub fn underlying(self) -> Symbol {
        Symbol::plain(self.letter)
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.residue {
            None => write!(f, "{}", self.letter),
            Some(i) => write!(f, "{}@{}", self.letter, i),
        }
    }
}

pub(crate) fn is_letter_char(c: char) -> bool {
    !c.is_whitespace() && !c.is_control() && !"|*+().@^=:;#\"'".contains(c)
}

impl FromStr for Symbol {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut chars = s.chars();
        let letter = chars
            .next()
            .filter(|&c| is_letter_char(c))
            .ok_or_else(|| Error::UnknownLetter(s.to_string()))?;
        let rest = chars.as_str();
        if rest.is_empty() {
            return Ok(Symbol::plain(letter));
        }
        let residue = rest
            .strip_prefix('@')
            .and_then(|r| r.parse::<u32>().ok())
            .ok_or_else(|| Error::UnknownLetter(s.to_string()))?;
        Ok(Symbol::enriched(letter, residue))
    }
}

impl Serialize for Symbol {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Symbol {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

pub type Word = Vec<Symbol>;

/// Parses a word written as juxtaposed symbols, e.g. `abba` or `a@0b@1`.
pub fn parse_word(text: &str) -> Result<Word> {
    let chars: Vec<char> = text.chars().filter(|c| !c.is_whitespace()).collect();
    let mut word = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if !is_letter_char(c) {
            return Err(Error::syntax(i, format!("unexpected `{c}` in word")));
        }
        i += 1;
        if chars.get(i) == Some(&'@') {
            let start = i + 1;
            let mut end = start;
            while end < chars.len() && chars[end].is_ascii_digit() {
                end += 1;
            }
            if end == start {
                return Err(Error::syntax(i, "missing residue after `@`"));
            }
            let residue: String = chars[start..end].iter().collect();
            word.push(Symbol::enriched(c, residue.parse().unwrap_or(u32::MAX)));
            i = end;
        } else {
            word.push(Symbol::plain(c));
        }
    }
    Ok(word)
}

pub fn format_word(word: &[Symbol]) -> String {
    word.iter().map(ToString::to_string).collect()
}

/// An ordered, duplicate-free, non-empty set of symbols.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    symbols: Vec<Symbol>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = Symbol>) -> Result<Self> {
        let symbols: Vec<Symbol> = symbols.into_iter().collect();
        if symbols.is_empty() {
            return Err(Error::invalid("alphabet is empty"));
        }
        for (i, s) in symbols.iter().enumerate() {
            if symbols[..i].contains(s) {
                return Err(Error::invalid(format!("duplicate letter `{s}`")));
            }
        }
        Ok(Alphabet { symbols })
    }

    /// Plain alphabet from the characters of `letters`, in order.
    pub fn from_chars(letters: &str) -> Result<Self> {
        Alphabet::new(
            letters
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(Symbol::plain),
        )
    }

    /// The enriched alphabet `A x Z_d`, ordered letter-major.
    pub fn enriched(&self, modulus: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        if self.is_enriched() {
            return Err(Error::invalid("alphabet is already enriched"));
        }
        Alphabet::new(
            self.symbols
                .iter()
                .flat_map(|s| (0..modulus).map(move |i| Symbol::enriched(s.letter(), i))),
        )
    }

    /// The underlying plain alphabet, in order of first occurrence.
    pub fn underlying(&self) -> Alphabet {
        let mut out: Vec<Symbol> = Vec::new();
        for s in &self.symbols {
            let u = s.underlying();
            if !out.contains(&u) {
                out.push(u);
            }
        }
        Alphabet { symbols: out }
    }

    pub fn is_enriched(&self) -> bool {
        self.symbols.iter().any(|s| s.is_enriched())
    }

    /// The modulus of an enriched alphabet (largest residue + 1).
    pub fn modulus(&self) -> Option<u32> {
        self.symbols
            .iter()
            .filter_map(|s| s.residue())
            .max()
            .map(|r| r + 1)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn get(&self, index: usize) -> Symbol {
        self.symbols[index]
    }

    pub fn index_of(&self, symbol: Symbol) -> Option<usize> {
        self.symbols.iter().position(|&s| s == symbol)
    }

    /// Letter indices of `word`, failing on the first foreign symbol.
    pub fn indices(&self, word: &[Symbol]) -> Result<Vec<usize>> {
        word.iter()
            .map(|&s| {
                self.index_of(s)
                    .ok_or_else(|| Error::UnknownLetter(s.to_string()))
            })
            .collect()
    }

    /// All words of length at most `max_len`, in shortlex order.
    pub fn words_upto(&self, max_len: usize) -> Vec<Word> {
        let mut out = vec![Vec::new()];
        let mut layer = vec![Vec::new()];
        for _ in 0..max_len {
            let mut next = Vec::with_capacity(layer.len() * self.len());
            for w in &layer {
                for &s in &self.symbols {
                    let mut v = w.clone();
                    v.push(s);
                    next.push(v);
                }
            }
            out.extend(next.iter().cloned());
            layer = next;
        }
        out
    }
}

impl fmt::Display for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, s) in self.symbols.iter().enumerate() {
            if i > 0 {
                f.write_str(" ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_round_trip_through_text() {
        for text in ["a", "b@0", "z@12"] {
            let s: Symbol = text.parse().unwrap();
            assert_eq!(s.to_string(), text);
        }
        assert!("a@".parse::<Symbol>().is_err());
        assert!("@1".parse::<Symbol>().is_err());
    }

    #[test]
    fn rejects_empty_and_duplicate_alphabets() {
        assert!(Alphabet::from_chars("").is_err());
        assert!(Alphabet::from_chars("aba").is_err());
    }

    #[test]
    fn enriched_alphabet_is_letter_major() {
        let a = Alphabet::from_chars("ab").unwrap().enriched(2).unwrap();
        assert_eq!(a.to_string(), "a@0 a@1 b@0 b@1");
        assert_eq!(a.modulus(), Some(2));
        assert_eq!(a.underlying(), Alphabet::from_chars("ab").unwrap());
    }

    #[test]
    fn words_upto_counts() {
        let a = Alphabet::from_chars("ab").unwrap();
        assert_eq!(a.words_upto(3).len(), 15);
        assert_eq!(parse_word("a@0b@1").unwrap().len(), 2);
    }
}
