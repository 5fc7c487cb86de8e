//! Regular expressions over single-character letters.
//!
//! Grammar: juxtaposition is concatenation, `|` is union, postfix `*` and
//! `+` are iteration, `.` matches any letter and `()` denotes the empty
//! word. Whitespace is ignored.

use crate::automata::alphabet::{is_letter_char, Alphabet, Symbol};
use crate::automata::dfa::{Dfa, Nfa};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regex {
    Epsilon,
    Letter(char),
    Any,
    Concat(Vec<Regex>),
    Alt(Vec<Regex>),
    Star(Box<Regex>),
    Plus(Box<Regex>),
}

impl Regex {
    pub fn parse(text: &str) -> Result<Regex> {
        let tokens: Vec<(usize, char)> = text
            .char_indices()
            .filter(|(_, c)| !c.is_whitespace())
            .collect();
        let mut parser = Parser { tokens, pos: 0 };
        let re = parser.alternation()?;
        if let Some(&(at, c)) = parser.tokens.get(parser.pos) {
            return Err(Error::syntax(at, format!("unexpected `{c}`")));
        }
        Ok(re)
    }

    /// Letters mentioned in the expression, sorted.
    pub fn letters(&self) -> Vec<char> {
        fn walk(re: &Regex, out: &mut Vec<char>) {
            match re {
                Regex::Letter(c) => out.push(*c),
                Regex::Concat(v) | Regex::Alt(v) => v.iter().for_each(|r| walk(r, out)),
                Regex::Star(r) | Regex::Plus(r) => walk(r, out),
                Regex::Epsilon | Regex::Any => {}
            }
        }
        let mut out = Vec::new();
        walk(self, &mut out);
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Minimal automaton over `alphabet` (defaults to the mentioned letters).
    pub fn to_dfa(&self, alphabet: Option<&Alphabet>) -> Result<Dfa> {
        let alphabet = match alphabet {
            Some(a) => a.clone(),
            None => {
                let letters = self.letters();
                if letters.is_empty() {
                    return Err(Error::invalid(
                        "expression mentions no letter; supply an alphabet",
                    ));
                }
                Alphabet::new(letters.into_iter().map(Symbol::plain))?
            }
        };
        for c in self.letters() {
            if alphabet.index_of(Symbol::plain(c)).is_none() {
                return Err(Error::UnknownLetter(c.to_string()));
            }
        }
        let mut nfa = Nfa::default();
        let start = nfa.add_state();
        let end = nfa.add_state();
        self.build(&mut nfa, &alphabet, start, end);
        nfa.finals[end] = true;
        Ok(nfa.determinize(alphabet, start))
    }

    // Thompson construction between `from` and `to`.
    fn build(&self, nfa: &mut Nfa, alphabet: &Alphabet, from: usize, to: usize) {
        match self {
            Regex::Epsilon => nfa.epsilon[from].push(to),
            Regex::Letter(c) => {
                let a = alphabet
                    .index_of(Symbol::plain(*c))
                    .expect("letters checked against the alphabet");
                nfa.letters[from].push((a, to));
            }
            Regex::Any => {
                for a in 0..alphabet.len() {
                    nfa.letters[from].push((a, to));
                }
            }
            Regex::Concat(parts) => {
                let mut cur = from;
                for (i, part) in parts.iter().enumerate() {
                    let next = if i + 1 == parts.len() {
                        to
                    } else {
                        nfa.add_state()
                    };
                    part.build(nfa, alphabet, cur, next);
                    cur = next;
                }
                if parts.is_empty() {
                    nfa.epsilon[from].push(to);
                }
            }
            Regex::Alt(options) => {
                for option in options {
                    option.build(nfa, alphabet, from, to);
                }
            }
            Regex::Star(inner) | Regex::Plus(inner) => {
                let hub_in = nfa.add_state();
                let hub_out = nfa.add_state();
                nfa.epsilon[from].push(hub_in);
                inner.build(nfa, alphabet, hub_in, hub_out);
                nfa.epsilon[hub_out].push(hub_in);
                nfa.epsilon[hub_out].push(to);
                if matches!(self, Regex::Star(_)) {
                    nfa.epsilon[from].push(to);
                }
            }
        }
    }
}

struct Parser {
    tokens: Vec<(usize, char)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> Option<char> {
        self.tokens.get(self.pos).map(|&(_, c)| c)
    }

    fn offset(&self) -> usize {
        self.tokens
            .get(self.pos)
            .map(|&(i, _)| i)
            .or_else(|| self.tokens.last().map(|&(i, _)| i + 1))
            .unwrap_or(0)
    }

    fn alternation(&mut self) -> Result<Regex> {
        let mut options = vec![self.concatenation()?];
        while self.peek() == Some('|') {
            self.pos += 1;
            options.push(self.concatenation()?);
        }
        Ok(if options.len() == 1 {
            options.pop().unwrap()
        } else {
            Regex::Alt(options)
        })
    }

    fn concatenation(&mut self) -> Result<Regex> {
        let mut parts = Vec::new();
        while let Some(c) = self.peek() {
            if c == '|' || c == ')' {
                break;
            }
            parts.push(self.repetition()?);
        }
        Ok(match parts.len() {
            0 => Regex::Epsilon,
            1 => parts.pop().unwrap(),
            _ => Regex::Concat(parts),
        })
    }

    fn repetition(&mut self) -> Result<Regex> {
        let mut atom = self.atom()?;
        loop {
            match self.peek() {
                Some('*') => atom = Regex::Star(Box::new(atom)),
                Some('+') => atom = Regex::Plus(Box::new(atom)),
                _ => return Ok(atom),
            }
            self.pos += 1;
        }
    }

    fn atom(&mut self) -> Result<Regex> {
        let at = self.offset();
        match self.peek() {
            None => Err(Error::syntax(at, "unexpected end of expression")),
            Some('(') => {
                self.pos += 1;
                let inner = self.alternation()?;
                if self.peek() != Some(')') {
                    return Err(Error::syntax(self.offset(), "expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some('.') => {
                self.pos += 1;
                Ok(Regex::Any)
            }
            Some(c) if is_letter_char(c) => {
                self.pos += 1;
                Ok(Regex::Letter(c))
            }
            Some(c) => Err(Error::syntax(at, format!("unexpected `{c}`"))),
        }
    }
}
