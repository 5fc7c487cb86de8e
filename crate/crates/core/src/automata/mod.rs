//! Regular languages as complete minimal automata, plus the enriched
//! alphabet constructions (`A_d`, `K_d`, `L_d`, `alpha_d^i`, `pi_d`).

mod alphabet;
mod dfa;
mod enriched;
mod regex;

pub use alphabet::{format_word, parse_word, Alphabet, Symbol, Word};
pub use dfa::{Dfa, SetOp};
pub use enriched::{
    encode_alpha, enrich, project_letters, wellformed_recognizer, EnrichedWord, WellFormedKind,
};
pub use regex::Regex;

use crate::error::Result;

/// Reads a language given either as a regex or in the DFA text format, and
/// returns its minimal automaton.
///
/// Text containing an `alphabet:` line is read as a DFA description.
pub fn parse_language(text: &str, alphabet: Option<&Alphabet>) -> Result<Dfa> {
    let looks_like_dfa = text
        .lines()
        .any(|l| l.trim_start().starts_with("alphabet:"));
    if looks_like_dfa {
        Ok(Dfa::from_text(text)?.minimize())
    } else {
        Regex::parse(text)?.to_dfa(alphabet)
    }
}
