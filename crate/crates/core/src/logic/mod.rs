//! First-order formulas on words: syntax, a brute-force semantics, quantifier
//! alternation, and the substitutions between modular predicates and
//! enriched letters.

mod alternation;
mod formula;
mod transform;

pub use alternation::{
    alternation_depth, prenex_normal_form, AlternationMode, FragmentTag, Quantifier, FRAGMENT_TAGS,
};
pub use formula::{evaluate, language_upto, Formula, Position};
pub use transform::{decompose_d, letters_to_mod, mod_to_letters, normalize_moduli};
