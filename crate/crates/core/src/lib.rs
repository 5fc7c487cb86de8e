//! Decision procedures for first-order definability of regular languages
//! in fragments enriched with modular predicates.
//!
//! The pipeline goes from a minimal automaton to its syntactic monoid, the
//! stability index and stable monoid, derived categories, and finally to
//! identity or path-equation checks. The [`logic`] module carries the
//! formula side: word-model semantics and the modular-predicate
//! transformations.

pub mod automata;
pub mod category;
pub mod decide;
mod error;
mod limits;
pub mod logic;
pub mod semigroup;
pub mod stability;

pub use automata::{parse_language, Alphabet, Dfa, Symbol, Word};
pub use category::{FiniteCategory, PathEquation};
pub use decide::{EvidenceReport, Verdict};
pub use error::{Error, Result};
pub use limits::Limits;
pub use semigroup::{ElementSet, IdentitySet, SyntacticPresentation};
pub use stability::StabilityRecord;
