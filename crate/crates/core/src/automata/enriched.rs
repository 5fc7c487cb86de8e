//! Alphabets enriched by position residues, and the languages built on them.

use crate::automata::alphabet::{Alphabet, Symbol, Word};
use crate::automata::dfa::{Dfa, Nfa};
use crate::error::{Error, Result};

/// A word over `A x Z_d`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EnrichedWord {
    symbols: Word,
    modulus: u32,
}

impl EnrichedWord {
    pub fn new(symbols: Word, modulus: u32) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::invalid("modulus must be positive"));
        }
        for s in &symbols {
            match s.residue() {
                Some(r) if r < modulus => {}
                _ => return Err(Error::NotEnriched(s.to_string())),
            }
        }
        Ok(EnrichedWord { symbols, modulus })
    }

    pub fn symbols(&self) -> &[Symbol] {
        &self.symbols
    }

    pub fn modulus(&self) -> u32 {
        self.modulus
    }

    /// Residue `j mod d` at every position `j`.
    pub fn is_well_formed(&self) -> bool {
        self.symbols
            .iter()
            .enumerate()
            .all(|(j, s)| s.residue() == Some((j as u64 % self.modulus as u64) as u32))
    }

    /// The underlying word.
    pub fn project(&self) -> Word {
        self.symbols.iter().map(|s| s.underlying()).collect()
    }
}

/// Labels position `j` of `word` with residue `start + j mod d`.
pub fn encode_alpha(word: &[Symbol], start: u32, modulus: u32) -> Result<EnrichedWord> {
    if modulus == 0 || start >= modulus {
        return Err(Error::invalid(format!(
            "residue {start} out of range for modulus {modulus}"
        )));
    }
    let symbols = word
        .iter()
        .enumerate()
        .map(|(j, s)| {
            let r = (start as u64 + j as u64) % modulus as u64;
            Symbol::enriched(s.letter(), r as u32)
        })
        .collect();
    EnrichedWord::new(symbols, modulus)
}

/// Which set of well-formed words to recognize.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WellFormedKind {
    /// `K_d`: words labelled `0, 1, ..., j mod d`.
    Words,
    /// `F_d`: factors of well-formed words (any starting residue).
    Factors,
    /// `A_d(i, j)`: non-empty factors whose first residue is `i` and last is `j`.
    Bounded { first: u32, last: u32 },
}

/// Automaton over `A x Z_d` for the requested well-formed set.
pub fn wellformed_recognizer(
    alphabet: &Alphabet,
    modulus: u32,
    kind: WellFormedKind,
) -> Result<Dfa> {
    let enriched = alphabet.enriched(modulus)?;
    let d = modulus as usize;
    if let WellFormedKind::Bounded { first, last } = kind {
        if first >= modulus || last >= modulus {
            return Err(Error::invalid(format!(
                "residues ({first}, {last}) out of range for modulus {modulus}"
            )));
        }
    }
    // States 0..d: "next residue expected is r"; d: sink; d + 1: start (factors only).
    let sink = d;
    let start = d + 1;
    let k = enriched.len();
    let mut delta = vec![sink; (d + 2) * k];
    for (a, s) in enriched.symbols().iter().enumerate() {
        let r = s.residue().expect("enriched") as usize;
        for q in 0..d {
            if q == r {
                delta[q * k + a] = (r + 1) % d;
            }
        }
        let from_start = match kind {
            WellFormedKind::Words => sink,
            WellFormedKind::Factors => (r + 1) % d,
            WellFormedKind::Bounded { first, .. } => {
                if r == first as usize {
                    (r + 1) % d
                } else {
                    sink
                }
            }
        };
        delta[start * k + a] = from_start;
    }
    let (initial, finals): (usize, Vec<usize>) = match kind {
        WellFormedKind::Words => (0, (0..d).collect()),
        WellFormedKind::Factors => (start, (0..d).chain([start]).collect()),
        WellFormedKind::Bounded { last, .. } => (start, vec![(last as usize + 1) % d]),
    };
    Ok(Dfa::new(enriched, d + 2, initial, finals, delta)?.minimize())
}

/// `L_d`: well-formed words whose projection lies in `L`.
pub fn enrich(language: &Dfa, modulus: u32) -> Result<Dfa> {
    if language.alphabet().is_enriched() {
        return Err(Error::invalid(
            "language is already over an enriched alphabet",
        ));
    }
    let enriched = language.alphabet().enriched(modulus)?;
    let d = modulus as usize;
    let n = language.state_count();
    let sink = n * d;
    let k = enriched.len();
    let mut delta = vec![sink; (sink + 1) * k];
    let mut finals = Vec::new();
    for q in 0..n {
        for c in 0..d {
            let state = q * d + c;
            if language.is_final(q) {
                finals.push(state);
            }
            for (a, s) in enriched.symbols().iter().enumerate() {
                if s.residue() == Some(c as u32) {
                    let plain = language
                        .alphabet()
                        .index_of(s.underlying())
                        .expect("enriched alphabet built from this alphabet");
                    delta[state * k + a] = language.next(q, plain) * d + (c + 1) % d;
                }
            }
        }
    }
    Ok(Dfa::new(enriched, sink + 1, language.initial() * d, finals, delta)?.minimize())
}

/// `pi_d(L)`: forgets residues, then determinizes.
pub fn project_letters(language: &Dfa) -> Result<Dfa> {
    let enriched = language.alphabet();
    if !enriched.is_enriched() {
        return Err(Error::invalid("projection needs an enriched alphabet"));
    }
    let plain = enriched.underlying();
    let mut nfa = Nfa::default();
    for _ in 0..language.state_count() {
        nfa.add_state();
    }
    for q in 0..language.state_count() {
        nfa.finals[q] = language.is_final(q);
        for (a, s) in enriched.symbols().iter().enumerate() {
            let target = plain.index_of(s.underlying()).expect("underlying letter");
            nfa.letters[q].push((target, language.next(q, a)));
        }
    }
    Ok(nfa.determinize(plain, language.initial()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automata::alphabet::parse_word;
    use crate::automata::regex::Regex;

    fn ab() -> Alphabet {
        Alphabet::from_chars("ab").unwrap()
    }

    fn w(text: &str) -> Word {
        parse_word(text).unwrap()
    }

    #[test]
    fn alpha_encodings() {
        let u = encode_alpha(&w("abba"), 0, 3).unwrap();
        assert_eq!(u.symbols(), w("a@0b@1b@2a@0").as_slice());
        assert!(u.is_well_formed());
        let v = encode_alpha(&w("ab"), 2, 3).unwrap();
        assert_eq!(v.symbols(), w("a@2b@0").as_slice());
        assert!(encode_alpha(&[], 0, 5).unwrap().symbols().is_empty());
        assert!(encode_alpha(&w("a"), 3, 3).is_err());
    }

    #[test]
    fn well_formed_words() {
        let a = Alphabet::from_chars("a").unwrap();
        let k2 = wellformed_recognizer(&a, 2, WellFormedKind::Words).unwrap();
        assert!(k2.accepts(&w("a@0a@1a@0")));
        assert!(!k2.accepts(&w("a@1")));
        let f2 = wellformed_recognizer(&a, 2, WellFormedKind::Factors).unwrap();
        assert!(f2.accepts(&w("a@1a@0")));
        assert!(!f2.accepts(&w("a@1a@1")));
        let a3 =
            wellformed_recognizer(&a, 3, WellFormedKind::Bounded { first: 1, last: 2 }).unwrap();
        assert!(a3.accepts(&w("a@1a@2")));
        assert!(!a3.accepts(&w("a@1a@2a@0")));
        assert!(!a3.accepts(&[]));
        assert!(
            wellformed_recognizer(&a, 3, WellFormedKind::Bounded { first: 3, last: 0 }).is_err()
        );
    }

    #[test]
    fn enriching_all_words_gives_k_d() {
        let all = Dfa::universal(ab());
        let k2 = wellformed_recognizer(&ab(), 2, WellFormedKind::Words).unwrap();
        assert!(enrich(&all, 2).unwrap().equivalent(&k2));
    }

    #[test]
    fn enrich_by_one_renames_letters() {
        let l = Regex::parse("a(ab)*").unwrap().to_dfa(None).unwrap();
        let l1 = enrich(&l, 1).unwrap();
        assert_eq!(l1.state_count(), l.state_count());
        assert!(l1.accepts(&w("a@0a@0b@0")));
    }

    #[test]
    fn projection_of_k2_is_everything() {
        let k2 = wellformed_recognizer(&ab(), 2, WellFormedKind::Words).unwrap();
        assert!(project_letters(&k2)
            .unwrap()
            .equivalent(&Dfa::universal(ab())));
        let none = Dfa::empty(ab().enriched(2).unwrap());
        assert!(project_letters(&none).unwrap().is_empty_language());
    }
}
